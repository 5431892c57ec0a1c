"""Vectorized batch kernels for exact Gaussian-integer 3x3 matrix work.

Matrices travel as int64 arrays of shape (N, 3, 3, 2), last axis (re, im).
All arithmetic is integer-exact; bounds are asserted so nothing can
silently wrap.  These kernels back the sphere BFS and the covering nets,
where pure-Python objects would be orders of magnitude too slow.
"""

from __future__ import annotations

import numpy as np

from .errors import ResourceCapError
from .gaussian import pi_factor

_ENTRY_BOUND = 1 << 26  # keys pack (flags, re, im) into one int64 below this


def as_batch(mats) -> np.ndarray:
    """Stack SimilitudeMatrix lifts into an (N, 3, 3, 2) int64 array."""
    out = np.empty((len(mats), 3, 3, 2), dtype=np.int64)
    for k, m in enumerate(mats):
        for i in range(3):
            for j in range(3):
                e = m.entries[i][j]
                out[k, i, j, 0] = e.re
                out[k, i, j, 1] = e.im
    return out


def gmatmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Product of a batch A (N,3,3,2) with a single matrix B (3,3,2)."""
    ar, ai = A[..., 0], A[..., 1]
    br, bi = B[..., 0], B[..., 1]
    out = np.empty(A.shape, dtype=np.int64)
    out[..., 0] = ar @ br - ai @ bi
    out[..., 1] = ar @ bi + ai @ br
    return out


def _divide_all_by(M: np.ndarray, cr: int, ci: int, nrm: int) -> None:
    """In place: divide every matrix by c = cr+ci*i wherever c divides all entries."""
    while True:
        tr = M[..., 0] * cr + M[..., 1] * ci
        ti = M[..., 1] * cr - M[..., 0] * ci
        ok = ((tr % nrm == 0) & (ti % nrm == 0)).all(axis=(1, 2))
        if not ok.any():
            return
        M[ok, ..., 0] = tr[ok] // nrm
        M[ok, ..., 1] = ti[ok] // nrm


def gcanon(M: np.ndarray, p: int) -> np.ndarray:
    """Canonical projective form: strip content at primes above p, fix the unit.

    Matches `SimilitudeMatrix.canonicalize` entry for entry.
    """
    M = M.copy()
    if p == 2:
        _divide_all_by(M, 1, 1, 2)
    else:
        pi = pi_factor(p)
        if pi.im == 0:
            _divide_all_by(M, p, 0, p * p)  # inert: content is a power of p
        else:
            _divide_all_by(M, pi.re, pi.im, p)
            _divide_all_by(M, pi.re, -pi.im, p)

    flat = M.reshape(len(M), 9, 2)
    nz = (flat[..., 0] != 0) | (flat[..., 1] != 0)
    first = nz.argmax(axis=1)
    idx = np.arange(len(M))
    a = flat[idx, first, 0]
    b = flat[idx, first, 1]
    assert np.abs(M).max(initial=0) < _ENTRY_BOUND, "entry bound exceeded in gcanon"

    # The four unit multiples of a+bi, packed as one sortable integer per the
    # tie-break (re > 0, im >= 0, re, im); pick the rotation maximizing it.
    keys = np.empty((4, len(M)), dtype=np.int64)
    ra, rb = a, b
    for k in range(4):
        keys[k] = (
            ((ra > 0).astype(np.int64) * 2 + (rb >= 0)) << 54
        ) + ((ra + _ENTRY_BOUND) << 27) + (rb + _ENTRY_BOUND)
        ra, rb = -rb, ra  # multiply by i
    rot = keys.argmax(axis=0)

    out = np.empty_like(M)
    re, im = M[..., 0], M[..., 1]
    r = rot[:, None, None]
    out[..., 0] = np.select([r == 0, r == 1, r == 2, r == 3], [re, -im, -re, im])
    out[..., 1] = np.select([r == 0, r == 1, r == 2, r == 3], [im, re, -im, -re])
    return out


def gkeys(M: np.ndarray, dtype=np.int64) -> list[bytes]:
    """Hashable byte keys of canonical matrices.

    The dtype must be fixed per dedup domain (mixed widths would make equal
    matrices hash differently); callers narrow it when entry bounds allow.
    """
    flat = M.reshape(len(M), 18)
    if dtype is not np.int64:
        assert np.abs(flat).max(initial=0) < np.iinfo(dtype).max
        flat = flat.astype(dtype)
    flat = np.ascontiguousarray(flat)
    return [row.tobytes() for row in flat]


def unique_rows(M: np.ndarray) -> np.ndarray:
    return np.unique(M.reshape(len(M), 18), axis=0).reshape(-1, 3, 3, 2)


def sphere_levels(
    gens: np.ndarray, p: int, lmax: int, cap: int | None = None
) -> list[np.ndarray]:
    """Word spheres S^(l) for l = 0..lmax, as canonical-form batches.

    Level l holds exactly the classes reachable by some length-l generator
    word and by no shorter one (deduplicated breadth-first closure).
    """
    ident = np.zeros((1, 3, 3, 2), dtype=np.int64)
    ident[0, 0, 0, 0] = ident[0, 1, 1, 0] = ident[0, 2, 2, 0] = 1
    key_dtype = sphere_key_dtype(gens, lmax)
    levels = [ident]
    seen: set[bytes] = set(gkeys(ident, key_dtype))
    frontier = ident
    for _ in range(lmax):
        prods = np.concatenate([gmatmul(frontier, g) for g in gens])
        prods = unique_rows(gcanon(prods, p))
        keys = gkeys(prods, key_dtype)
        fresh = np.fromiter(
            (k not in seen for k in keys), dtype=bool, count=len(keys)
        )
        level = prods[fresh]
        if cap is not None and len(level) + sum(map(len, levels)) > cap:
            raise ResourceCapError(
                f"sphere closure exceeded cap {cap} at radius {len(levels)}"
            )
        seen.update(k for k, f in zip(keys, fresh) if f)
        levels.append(level)
        frontier = level
    return levels


def sphere_key_dtype(gens: np.ndarray, lmax: int):
    """Key width for a sphere run: radius-l entries stay below sqrt(max p'^l)."""
    pp = int((gens[:, 0, :, :].astype(object) ** 2).sum(axis=(1, 2)).max())
    bound = 6 * pp ** ((lmax + 2) // 2)
    return np.int16 if bound < (1 << 15) else np.int64


def batch_to_unitary(M: np.ndarray) -> np.ndarray:
    """Normalize exact similitudes to complex unitaries u = g / sqrt(lambda)."""
    Z = M[..., 0].astype(np.float64) + 1j * M[..., 1].astype(np.float64)
    lam = np.einsum("nij,nij->n", M[:, 0, :, :].astype(np.float64), M[:, 0, :, :].astype(np.float64))
    return Z / np.sqrt(lam)[:, None, None]
