"""Floating-point model of PU(3): gate words as unitaries, Haar sampling,
and Monte-Carlo covering statistics of the word nets.

The metric is the projective Frobenius chordal distance
d(x, y) = sqrt(6 - 2 |tr(x* y)|), which is bi-invariant and phase-blind;
only relative covering statistics matter here, so no volume normalization
is assumed beyond the empirical radial CDF reported with each run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _engine
from .gatesets import GateSet, sphere_level_arrays
from .matrices import ProjElement

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class PU3Point:
    """A unitary representative of a point of PU(3)."""

    u: np.ndarray

    def __post_init__(self):
        err = np.abs(self.u @ self.u.conj().T - np.eye(3)).max()
        if err > UNITARITY_TOL:
            raise ValueError(f"not unitary within {UNITARITY_TOL}: defect {err:.2e}")


def to_unitary(elem: ProjElement) -> PU3Point:
    """Normalize an exact similitude to u = g / sqrt(lambda)."""
    m = elem.canonical
    lam = float(m.integer_similitude_factor())
    z = np.array(
        [[complex(e.re, e.im) for e in row] for row in m.entries], dtype=complex
    )
    return PU3Point(z / np.sqrt(lam))


def distance(x: PU3Point, y: PU3Point) -> float:
    """Projective chordal metric; zero iff equal in PU(3)."""
    t = abs(np.vdot(x.u, y.u))  # |tr(x* y)|
    return float(np.sqrt(max(0.0, 6.0 - 2.0 * t)))


def haar_sample(rng: np.random.Generator) -> PU3Point:
    return PU3Point(_haar_batch(rng, 1)[0])


def _haar_batch(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed U(3) matrices: complex Ginibre + phase-fixed QR."""
    z = rng.standard_normal((n, 3, 3)) + 1j * rng.standard_normal((n, 3, 3))
    q, r = np.linalg.qr(z)
    d = np.einsum("nii->ni", r)
    q = q * (d / np.abs(d))[:, None, :]
    return q


def _net_unitaries(gs: GateSet, lmax: int, cap: int | None) -> list[np.ndarray]:
    levels = sphere_level_arrays(gs, lmax, cap=cap)
    return [_engine.batch_to_unitary(lv) for lv in levels]


def nearest_distances(
    nets: list[np.ndarray], samples: np.ndarray, chunk: int = 8192
) -> np.ndarray:
    """distances[l, s] = min over the union of nets[0..l] of d(net point, sample s).

    Works on the running maximum of |tr(x* y)| so nested nets cost nothing
    extra; the search is exhaustive (chunked BLAS products).
    """
    S = len(samples)
    flat_samples = samples.conj().reshape(S, 9)
    best = np.zeros(S)
    out = np.empty((len(nets), S))
    for l, net in enumerate(nets):
        flat = net.reshape(len(net), 9)
        for start in range(0, len(flat), chunk):
            gram = flat[start : start + chunk] @ flat_samples.T
            np.maximum(best, np.abs(gram).max(axis=0), out=best)
        out[l] = np.sqrt(np.maximum(0.0, 6.0 - 2.0 * best))
    return out


@dataclass(frozen=True)
class CoveringReport:
    p: int
    variant: str
    lmax: int
    n_samples: int
    seed: int
    net_sizes: list[int]  # |S^(<= l)| for l = 0..lmax
    distances: np.ndarray  # (lmax+1, n_samples) nearest-word distances
    radial_grid: np.ndarray
    radial_cdf: np.ndarray

    def summary(self) -> list[dict]:
        rows = []
        for l in range(self.lmax + 1):
            d = self.distances[l]
            rows.append(
                {
                    "l": l,
                    "net_size": self.net_sizes[l],
                    "mean": float(d.mean()),
                    "max": float(d.max()),
                    "q50": float(np.quantile(d, 0.5)),
                    "q90": float(np.quantile(d, 0.9)),
                    "covered_volume_rate": float(self.net_sizes[l])
                    * float(np.interp(d.mean(), self.radial_grid, self.radial_cdf)),
                }
            )
        return rows

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "variant": self.variant,
            "lmax": self.lmax,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "net_sizes": self.net_sizes,
            "summary": self.summary(),
            "radial_grid": [float(x) for x in self.radial_grid],
            "radial_cdf": [float(x) for x in self.radial_cdf],
            "distances": [[float(x) for x in row] for row in self.distances],
        }


def covering_stats(
    gs: GateSet,
    lmax: int,
    n_samples: int,
    seed: int,
    cap: int | None = 2_000_000,
) -> CoveringReport:
    """Nearest-word distances from Haar samples to the cumulative word nets.

    The radial CDF (empirical measure of balls around a fixed point, by
    bi-invariance estimated from the samples themselves) is reported so
    covering rates can be read off against net sizes.
    """
    rng = np.random.default_rng(seed)
    samples = _haar_batch(rng, n_samples)
    nets = _net_unitaries(gs, lmax, cap)
    dist = nearest_distances(nets, samples)
    # distances from the identity give the radial volume profile
    tr = np.abs(np.einsum("nii->n", samples))
    radial = np.sort(np.sqrt(np.maximum(0.0, 6.0 - 2.0 * tr)))
    grid = np.linspace(0.0, float(radial.max()), 256)
    cdf = np.searchsorted(radial, grid, side="right") / n_samples
    return CoveringReport(
        p=gs.p,
        variant=gs.variant,
        lmax=lmax,
        n_samples=n_samples,
        seed=seed,
        net_sizes=[int(x) for x in np.cumsum([len(n) for n in nets])],
        distances=dist,
        radial_grid=grid,
        radial_cdf=cdf,
    )
