"""Enumeration of the degree-one golden gate sets and their word spheres.

The full set at an odd prime p consists of all 3x3 Gaussian-integer
matrices A with A A* = p' I (p' = p or p^2 by the splitting type of p),
A non-scalar, and every diagonal entry congruent to 1 mod 2+2i.  The
split variant keeps the generators of colored building distance one.
The super variant is the finite-order pair acting at the prime 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _engine
from .errors import ResourceCapError
from .gaussian import GaussInt, is_prime, p_prime, residue_2p2i, RESIDUE_ONE
from .matrices import ProjElement, SimilitudeMatrix

MAX_ENUM_P = 50  # row search is quadratic in p'; beyond this it stops being desk scale


@dataclass(frozen=True)
class GateSet:
    """An indexed generating set; elements sorted by canonical key."""

    p: int
    variant: str  # "full" | "split" | "super"
    similitude: int  # A A* = similitude * I for every lift
    elements: tuple[ProjElement, ...]
    lifts: tuple[SimilitudeMatrix, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def index_of(self, elem: ProjElement) -> int:
        return _index_map(self)[elem.key]

    def lifts_batch(self) -> np.ndarray:
        return _engine.as_batch(self.lifts)


def _index_map(gs: GateSet) -> dict:
    # tiny per-set dict; rebuilt rarely enough that caching by identity suffices
    if not hasattr(gs, "_idx"):
        object.__setattr__(gs, "_idx", {e.key: i for i, e in enumerate(gs.elements)})
    return gs._idx


def _diag_congruent(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Entry a+bi is congruent to 1 mod 2+2i iff (a, b) = (1, 0) or (3, 2) mod 4."""
    am, bm = a % 4, b % 4
    return ((am == 1) & (bm == 0)) | ((am == 3) & (bm == 2))


def _rows_of_norm(pp: int) -> np.ndarray:
    """All (a1,b1,a2,b2,a3,b3) in Z^6 with |a+bi| norms summing to exactly pp."""
    amax = int(np.sqrt(pp)) + 1
    vals = np.arange(-amax, amax + 1)
    A, B = np.meshgrid(vals, vals, indexing="ij")
    n = A * A + B * B
    keep = n <= pp
    ents = np.stack([A[keep], B[keep], n[keep]], axis=1)
    ents = ents[np.argsort(ents[:, 2], kind="stable")]
    norms = ents[:, 2]

    n1 = norms[:, None] + norms[None, :]
    i1, i2 = np.nonzero(n1 <= pp)
    resid = pp - norms[i1] - norms[i2]
    lo = np.searchsorted(norms, resid, side="left")
    hi = np.searchsorted(norms, resid, side="right")
    counts = hi - lo
    i1 = np.repeat(i1, counts)
    i2 = np.repeat(i2, counts)
    # expand the third index over each [lo, hi) run
    offsets = np.concatenate([np.arange(c) for c in counts if c]) if counts.any() else np.empty(0, int)
    i3 = np.repeat(lo, counts) + offsets
    rows = np.empty((len(i1), 6), dtype=np.int64)
    rows[:, 0:2] = ents[i1, 0:2]
    rows[:, 2:4] = ents[i2, 0:2]
    rows[:, 4:6] = ents[i3, 0:2]
    return rows


def _herm_forms(rows: np.ndarray) -> np.ndarray:
    """Real and imaginary parts of s -> <s, r> as integer linear forms in s.

    Returns (n, 2, 6): [k, 0] dotted with s gives Re<s, r_k>, [k, 1] gives Im.
    """
    a = rows[:, 0::2]
    b = rows[:, 1::2]
    forms = np.empty((len(rows), 2, 6), dtype=np.int64)
    forms[:, 0, 0::2] = a
    forms[:, 0, 1::2] = b
    forms[:, 1, 0::2] = -b
    forms[:, 1, 1::2] = a
    return forms


def _orthogonal_mask(rows: np.ndarray, forms_chunk: np.ndarray) -> np.ndarray:
    """Boolean (len(rows), chunk) mask of Hermitian orthogonality, exact in f64."""
    W = forms_chunk.reshape(-1, 6).T.astype(np.float64)
    prod = rows.astype(np.float64) @ W
    prod = prod.reshape(len(rows), -1, 2)
    return (prod[..., 0] == 0) & (prod[..., 1] == 0)


def _enumerate_lifts(p: int) -> list[SimilitudeMatrix]:
    pp = p_prime(p)
    rows = _rows_of_norm(pp)
    slot = [rows[_diag_congruent(rows[:, 2 * j], rows[:, 2 * j + 1])] for j in range(3)]
    R1, R2, R3 = slot
    out = []
    chunk = 128
    for start in range(0, len(R1), chunk):
        batch = R1[start : start + chunk]
        m2 = _orthogonal_mask(R2, _herm_forms(batch))
        m3 = _orthogonal_mask(R3, _herm_forms(batch))
        for c in range(len(batch)):
            idx2 = np.nonzero(m2[:, c])[0]
            if not len(idx2):
                continue
            sub3 = R3[m3[:, c]]
            if not len(sub3):
                continue
            r1 = batch[c]
            sub3f = sub3.astype(np.float64)
            for i2 in idx2:
                r2 = R2[i2]
                f = _herm_forms(r2[None, :])[0].astype(np.float64)
                good = (sub3f @ f[0] == 0) & (sub3f @ f[1] == 0)
                for r3 in sub3[good]:
                    out.append(np.concatenate([r1, r2, r3]))
    return [_lift_from_flat(v, p) for v in out]


def _lift_from_flat(v, p: int) -> SimilitudeMatrix:
    rows = tuple(
        tuple(GaussInt(int(v[6 * i + 2 * j]), int(v[6 * i + 2 * j + 1])) for j in range(3))
        for i in range(3)
    )
    return SimilitudeMatrix(rows, p)


def _build_gate_set(p: int, variant: str, lifts: list[SimilitudeMatrix], expected: int) -> GateSet:
    pp = p_prime(p)
    seen: dict[tuple, tuple[ProjElement, SimilitudeMatrix]] = {}
    for m in lifts:
        assert m.integer_similitude_factor() == pp
        assert all(residue_2p2i(m.entries[i][i]) == RESIDUE_ONE for i in range(3))
        e = m.canonicalize()
        if e.key in seen:
            raise RuntimeError(f"gate lifts are not projectively distinct at p={p}")
        seen[e.key] = (e, m)
    if len(seen) != expected:
        raise RuntimeError(
            f"gate set size {len(seen)} at p={p} ({variant}) does not match the expected {expected}"
        )
    ordered = sorted(seen.items(), key=lambda kv: kv[0])
    return GateSet(
        p=p,
        variant=variant,
        similitude=pp,
        elements=tuple(e for _, (e, _m) in ordered),
        lifts=tuple(m for _, (_e, m) in ordered),
    )


@lru_cache(maxsize=16)
def full_gate_set(p: int) -> GateSet:
    """All generators at p: 2(p^2+p+1) of them for split p, p^4+p for inert p."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"gate sets need an odd prime, got {p}")
    if p > MAX_ENUM_P:
        raise ResourceCapError(f"enumeration at p={p} exceeds the desk-scale bound {MAX_ENUM_P}")
    lifts = [m for m in _enumerate_lifts(p) if not m.is_scalar()]
    c = p * p + p + 1
    expected = 2 * c if p % 4 == 1 else p**4 + p
    return _build_gate_set(p, "full", lifts, expected)


@lru_cache(maxsize=16)
def split_gate_set(p: int) -> GateSet:
    """The pi-height-one half: p^2+p+1 generators; split p only."""
    if p % 4 != 1:
        raise ValueError(f"the split gate set needs p = 1 mod 4, got {p}")
    full = full_gate_set(p)
    lifts = [m for m in full.lifts if m.pi_height() == 1]
    return _build_gate_set(p, "split", lifts, p * p + p + 1)


@lru_cache(maxsize=1)
def super_gate_set() -> GateSet:
    """The finite-order pair acting at the prime 2.

    sigma is the 3-cycle permutation; tau has tau tau* = 2I and tau^3 scalar,
    so both have projective order 3.
    """
    sigma = SimilitudeMatrix.from_ints(((0, 1, 0), (0, 0, 1), (1, 0, 0)), 2)
    tau = SimilitudeMatrix.from_ints(
        (((-1, 0), (1, 0), (0, 0)), ((0, 1), (0, 1), (0, 0)), ((0, 0), (0, 0), (1, -1))), 2
    )
    elements = tuple(m.canonicalize() for m in (sigma, tau))
    return GateSet(p=2, variant="super", similitude=0, elements=elements, lifts=(sigma, tau))


@lru_cache(maxsize=4)
def _sphere_levels_cached(gs: GateSet, lmax: int, cap: int | None):
    return _engine.sphere_levels(gs.lifts_batch(), gs.p, lmax, cap=cap)


def sphere_level_arrays(gs: GateSet, lmax: int, cap: int | None = None) -> list[np.ndarray]:
    """Canonical-form batches of the word spheres S^(0), ..., S^(lmax).

    Cached per gate set and radius; treat the returned arrays as read-only.
    """
    return _sphere_levels_cached(gs, lmax, cap)


def sphere_sizes(gs: GateSet, lmax: int, cap: int | None = None) -> list[int]:
    return [len(lv) for lv in sphere_level_arrays(gs, lmax, cap=cap)]


def sphere(gs: GateSet, l: int, cap: int | None = 200_000) -> frozenset[ProjElement]:
    """The word sphere at radius l as projective elements (small radii only)."""
    levels = sphere_level_arrays(gs, l, cap=cap)
    arr = levels[l]
    out = []
    for m in arr:
        rows = tuple(
            tuple(GaussInt(int(m[i, j, 0]), int(m[i, j, 1])) for j in range(3)) for i in range(3)
        )
        out.append(SimilitudeMatrix(rows, gs.p).canonicalize())
    return frozenset(out)


def free_product_check(max_syllables: int = 10) -> dict:
    """Distinctness of all alternating sigma/tau words up to a syllable bound.

    Words s^{a_1} t^{b_1} s^{a_2} ... with exponents in {1, 2} and alternating
    letters; a free product of two order-3 cyclic groups makes them pairwise
    distinct and non-identity.
    """
    gs = super_gate_set()
    sigma, tau = gs.lifts
    powers = {
        "s": (sigma, sigma @ sigma),
        "t": (tau, tau @ tau),
    }
    words: list[tuple[str, SimilitudeMatrix]] = [("", SimilitudeMatrix.identity(2))]
    keys = set()
    total = 0
    frontier = words
    for _ in range(max_syllables):
        nxt = []
        for last, mat in frontier:
            for letter in ("s", "t"):
                if letter == last:
                    continue
                for e, pw in enumerate(powers[letter], start=1):
                    m = mat @ pw
                    nxt.append((letter, m))
                    keys.add(m.canonicalize().key)
        total += len(nxt)
        frontier = nxt
    identity_key = SimilitudeMatrix.identity(2).canonicalize().key
    return {
        "max_syllables": max_syllables,
        "words": total,
        "distinct": len(keys),
        "contains_identity": identity_key in keys,
        "ok": len(keys) == total and identity_key not in keys,
    }
