"""Reduction of gate sets modulo q and identification of the finite group.

For q = 1 mod 4 the Gaussian unit i maps to a square root of -1 in F_q and
the reduced generators live in PGL_3(F_q); for q = 3 mod 4 they keep a
unitary structure over F_{q^2} = F_q[w], w^2 = -1.  The group they generate
is pinned down by cubic residue symbols (label among PSL/PGL/PSU/PU), and
cross-checked by the determinant-class test and, when small enough, by a
breadth-first closure count.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np

from .errors import ResourceCapError
from .gaussian import is_prime, split_prime
from .matrices import ProjElement

DEFAULT_CLOSURE_CAP = 10**7


# ---------------------------------------------------------------------------
# scalars


@dataclass(frozen=True)
class FqElem:
    """Element of the prime field F_q."""

    value: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.q)

    def __add__(self, o):
        return FqElem(self.value + o.value, self.q)

    def __sub__(self, o):
        return FqElem(self.value - o.value, self.q)

    def __mul__(self, o):
        return FqElem(self.value * o.value, self.q)

    def __pow__(self, n: int):
        return FqElem(pow(self.value, n, self.q), self.q)

    def inverse(self):
        return FqElem(pow(self.value, -1, self.q), self.q)

    def conj(self):
        return self

    @property
    def is_zero(self):
        return self.value == 0


@dataclass(frozen=True)
class Fq2Elem:
    """Element a + b*w of F_{q^2} = F_q[w]/(w^2+1); needs q = 3 mod 4."""

    a: int
    b: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "a", self.a % self.q)
        object.__setattr__(self, "b", self.b % self.q)

    def __add__(self, o):
        return Fq2Elem(self.a + o.a, self.b + o.b, self.q)

    def __sub__(self, o):
        return Fq2Elem(self.a - o.a, self.b - o.b, self.q)

    def __mul__(self, o):
        return Fq2Elem(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a, self.q)

    def __pow__(self, n: int):
        result = Fq2Elem(1, 0, self.q)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self):
        """Frobenius x -> x^q, which sends w to -w."""
        return Fq2Elem(self.a, -self.b, self.q)

    def inverse(self):
        n = (self.a * self.a + self.b * self.b) % self.q
        ninv = pow(n, -1, self.q)
        return Fq2Elem(self.a * ninv, -self.b * ninv, self.q)

    @property
    def is_zero(self):
        return self.a == 0 and self.b == 0


def sqrt_minus_one(q: int) -> FqElem:
    """The canonical square root of -1 in F_q (the smaller of the two)."""
    if q % 4 != 1 or not is_prime(q):
        raise ValueError(f"-1 is a square mod q only for primes q = 1 mod 4, got {q}")
    for x in range(2, q):
        if x * x % q == q - 1:
            return FqElem(min(x, q - x), q)
    raise AssertionError("unreachable")


def cubic_residue(a, q: int) -> int:
    """The cubic residue symbol: +1 if a is a cube in the ambient group, else -1.

    `a` is an FqElem (group F_q^x) or an Fq2Elem (group F_{q^2}^x).  When 3
    does not divide the group order the cube map is onto and the symbol is 1.
    """
    if isinstance(a, FqElem):
        if a.is_zero:
            raise ValueError("cubic symbol of 0 is undefined")
        order = q - 1
        if order % 3:
            return 1
        return 1 if pow(a.value, order // 3, q) == 1 else -1
    if isinstance(a, Fq2Elem):
        if a.is_zero:
            raise ValueError("cubic symbol of 0 is undefined")
        order = q * q - 1
        if order % 3:
            return 1
        one = Fq2Elem(1, 0, q)
        return 1 if a ** (order // 3) == one else -1
    raise TypeError(f"unsupported scalar {a!r}")


# ---------------------------------------------------------------------------
# reduced matrices


@dataclass(frozen=True, eq=False)
class FinMat:
    """3x3 matrix over F_q or F_{q^2}, canonicalized modulo scalars.

    Entries are stored as (a, b) pairs meaning a + b*w; for the prime-field
    case b is identically 0.  The canonical form scales the first nonzero
    entry in row-major order to 1.
    """

    q: int
    quadratic: bool
    entries: tuple  # 3x3 of (a, b) int pairs

    def __hash__(self):
        return hash((self.q, self.quadratic, self.entries))

    def __eq__(self, other):
        return (
            isinstance(other, FinMat)
            and self.q == other.q
            and self.quadratic == other.quadratic
            and self.entries == other.entries
        )

    def _scalar(self, pair):
        return Fq2Elem(*pair, self.q) if self.quadratic else FqElem(pair[0], self.q)

    def scalars(self):
        return tuple(tuple(self._scalar(e) for e in row) for row in self.entries)

    @classmethod
    def from_scalars(cls, rows, q: int, quadratic: bool) -> FinMat:
        ent = []
        for row in rows:
            out = []
            for e in row:
                if isinstance(e, FqElem):
                    out.append((e.value, 0))
                else:
                    out.append((e.a, e.b))
            ent.append(tuple(out))
        return _canonical_finmat(tuple(ent), q, quadratic)

    def __matmul__(self, other: FinMat) -> FinMat:
        a, b = self.scalars(), other.scalars()
        rows = tuple(
            tuple(a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j] for j in range(3))
            for i in range(3)
        )
        return FinMat.from_scalars(rows, self.q, self.quadratic)

    def adjoint(self) -> FinMat:
        if not self.quadratic:
            raise ValueError("adjoint needs the quadratic (unitary) case")
        s = self.scalars()
        rows = tuple(tuple(s[j][i].conj() for j in range(3)) for i in range(3))
        return FinMat.from_scalars(rows, self.q, self.quadratic)

    def det(self):
        e = self.scalars()
        return (
            e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
        )

    def similitude_factor(self):
        """lambda with M M* = lambda I for this representative (quadratic case).

        Uses the raw conjugate transpose, not the canonicalized adjoint class.
        """
        if not self.quadratic:
            raise ValueError("similitude factor needs the unitary case")
        s = self.scalars()
        adj = tuple(tuple(s[j][i].conj() for j in range(3)) for i in range(3))
        prod = tuple(
            tuple(s[i][0] * adj[0][j] + s[i][1] * adj[1][j] + s[i][2] * adj[2][j] for j in range(3))
            for i in range(3)
        )
        for i in range(3):
            for j in range(3):
                if i != j and not prod[i][j].is_zero:
                    raise ValueError("M M* is not scalar over F_{q^2}")
        lam = prod[0][0]
        if prod[1][1] != lam or prod[2][2] != lam or lam.b != 0:
            raise ValueError("M M* is not a scalar in F_q")
        return FqElem(lam.a, self.q)

    def is_identity(self) -> bool:
        want = tuple(tuple((1, 0) if i == j else (0, 0) for j in range(3)) for i in range(3))
        return self.entries == want


def _canonical_finmat(entries, q: int, quadratic: bool) -> FinMat:
    flat = [e for row in entries for e in row]
    first = next(((a % q, b % q) for a, b in flat if (a % q, b % q) != (0, 0)), None)
    if first is None:
        raise ValueError("zero matrix cannot be canonicalized")
    inv = (Fq2Elem(*first, q) if quadratic else FqElem(first[0], q)).inverse()
    rows = []
    for row in entries:
        out = []
        for a, b in row:
            e = Fq2Elem(a, b, q) * inv if quadratic else FqElem(a, q) * inv
            out.append((e.a, e.b) if quadratic else (e.value, 0))
        rows.append(tuple(out))
    return FinMat(q, quadratic, tuple(rows))


def reduce_gate(elem: ProjElement, q: int) -> FinMat:
    """Reduce a projective element mod q, mapping i by the splitting of q."""
    if not is_prime(q) or q == 2:
        raise ValueError(f"reduction needs an odd prime q, got {q}")
    if q == elem.p:
        raise ValueError("reduction prime q must differ from the working prime p")
    m = elem.canonical
    if q % 4 == 1:
        r = sqrt_minus_one(q).value
        rows = tuple(tuple(((e.re + e.im * r) % q, 0) for e in row) for row in m.entries)
        return _canonical_finmat(rows, q, False)
    rows = tuple(tuple((e.re % q, e.im % q) for e in row) for row in m.entries)
    return _canonical_finmat(rows, q, True)


def reduce_gate_set(gs, q: int) -> list[FinMat]:
    reduced = []
    seen = set()
    for e in gs.elements:
        f = reduce_gate(e, q)
        if f.entries not in seen:
            seen.add(f.entries)
            reduced.append(f)
    return reduced


# ---------------------------------------------------------------------------
# group identification


@dataclass(frozen=True)
class GroupPrediction:
    p: int
    q: int
    label: str  # "PSL3" | "PGL3" | "PSU3" | "PU3"
    tri_partite: bool
    symbol: int | None  # the cubic symbol when one was evaluated

    @property
    def pretty(self) -> str:
        return f"{self.label}(F_{self.q})"

    def order(self) -> int:
        return group_order(self.label, self.q)


def group_order(label: str, q: int) -> int:
    """Standard orders of the four possible groups over F_q."""
    if label == "PGL3":
        return (q**3 - 1) * (q**3 - q) * (q**3 - q**2) // (q - 1)
    if label == "PSL3":
        return group_order("PGL3", q) // gcd(3, q - 1)
    if label == "PU3":
        return q**3 * (q**3 + 1) * (q**2 - 1)
    if label == "PSU3":
        return group_order("PU3", q) // gcd(3, q + 1)
    raise ValueError(f"unknown label {label}")


def predict_group(p: int, q: int) -> GroupPrediction:
    """Identify the group generated by the reduced gate set, by congruence class.

    The split/unitary shape follows q mod 4; whether the full similitude
    quotient or only the simple group appears is decided by a cubic residue
    symbol of p*pi, evaluated in F_q (q = 1 mod 12) or F_{q^2} (q = 11 mod 12).
    The complex is tri-partite exactly in the PGL3/PU3 cases.
    """
    for n in (p, q):
        if not is_prime(n) or n == 2:
            raise ValueError(f"need odd primes, got {n}")
    if p == q:
        raise ValueError("p and q must be distinct")
    linear = q % 4 == 1  # reduced matrices live in PGL_3(F_q)
    if p % 4 == 3:
        # determinants are p^3 times units: always cubes
        return GroupPrediction(p, q, "PSL3" if linear else "PSU3", False, None)
    pi = split_prime(p)
    if q % 12 == 1:
        r = sqrt_minus_one(q).value
        x = FqElem(p * (pi.re + pi.im * r), q)
        s = cubic_residue(x, q)
        return GroupPrediction(p, q, "PSL3" if s == 1 else "PGL3", s == -1, s)
    if q % 12 == 5:
        return GroupPrediction(p, q, "PSL3", False, None)
    if q % 12 == 11:
        x = Fq2Elem(p * pi.re, p * pi.im, q)
        s = cubic_residue(x, q)
        return GroupPrediction(p, q, "PSU3" if s == 1 else "PU3", s == -1, s)
    # q = 3, 7 mod 12: the norm-one group has no index-three subgroup
    return GroupPrediction(p, q, "PSU3", False, None)


def det_class_test(gens: list[FinMat]) -> bool:
    """True iff every generator determinant is a cube in the right group.

    Split q: det in F_q^x modulo cubes.  Quadratic q: scale to a genuine
    unitary matrix (divide by a solution of the norm equation) and test the
    norm-one determinant against the cubes of U_1(F_q).
    """
    if not gens:
        raise ValueError("empty generator list")
    q = gens[0].q
    for m in gens:
        if not m.quadratic:
            if cubic_residue(m.det(), q) != 1:
                return False
            continue
        lam = m.similitude_factor()
        c = _norm_equation(lam)
        d = m.det() * (c.inverse() ** 3)
        if not _u1_is_cube(d):
            return False
    return True


def _norm_equation(lam: FqElem) -> Fq2Elem:
    """Some c in F_{q^2} with c * conj(c) = lam (norms are onto F_q^x)."""
    q = lam.q
    for a in range(q):
        for b in range(q):
            if (a * a + b * b) % q == lam.value:
                return Fq2Elem(a, b, q)
    raise AssertionError(f"norm equation unsolvable for {lam}, which cannot happen")


def _u1_is_cube(d: Fq2Elem) -> bool:
    """Cube test inside U_1(F_q) = {x in F_{q^2} : x conj(x) = 1} (order q+1)."""
    q = d.q
    one = Fq2Elem(1, 0, q)
    assert d * d.conj() == one, "determinant class is not norm-one"
    if (q + 1) % 3:
        return True
    return d ** ((q + 1) // 3) == one


# ---------------------------------------------------------------------------
# breadth-first closure over the finite field (vectorized)


def _encode_base(q: int, quadratic: bool) -> np.ndarray | None:
    digits = 18 if quadratic else 9
    if q**digits < 2**62:
        return q ** np.arange(digits, dtype=np.int64)
    return None


def _fmats_to_array(gens: list[FinMat]) -> np.ndarray:
    arr = np.array([[[e for e in row] for row in m.entries] for m in gens], dtype=np.int64)
    return arr  # (N, 3, 3, 2)


def _fmul(A: np.ndarray, B: np.ndarray, q: int, quadratic: bool) -> np.ndarray:
    ar, ai = A[..., 0], A[..., 1]
    br, bi = B[..., 0], B[..., 1]
    out = np.empty(A.shape if A.ndim == 4 else B.shape, dtype=np.int64)
    if quadratic:
        out[..., 0] = (ar @ br - ai @ bi) % q
        out[..., 1] = (ar @ bi + ai @ br) % q
    else:
        out[..., 0] = (ar @ br) % q
        out[..., 1] = 0
    return out


def _fcanon(M: np.ndarray, q: int, quadratic: bool, inv_table: np.ndarray) -> np.ndarray:
    flat = M.reshape(len(M), 9, 2)
    nz = (flat[..., 0] != 0) | (flat[..., 1] != 0)
    first = nz.argmax(axis=1)
    idx = np.arange(len(M))
    a = flat[idx, first, 0]
    b = flat[idx, first, 1]
    if quadratic:
        n = (a * a + b * b) % q
        ninv = inv_table[n]
        ca = (a * ninv) % q  # inverse of a+bw is (a-bw)/(a^2+b^2)
        cb = (-b * ninv) % q
        out = np.empty_like(M)
        out[..., 0] = (M[..., 0] * ca[:, None, None] - M[..., 1] * cb[:, None, None]) % q
        out[..., 1] = (M[..., 0] * cb[:, None, None] + M[..., 1] * ca[:, None, None]) % q
        return out
    inv = inv_table[a]
    out = np.zeros_like(M)
    out[..., 0] = (M[..., 0] * inv[:, None, None]) % q
    return out


def _fencode(M: np.ndarray, base: np.ndarray, quadratic: bool) -> np.ndarray:
    if quadratic:
        flat = M.reshape(len(M), 18)
    else:
        flat = M[..., 0].reshape(len(M), 9)
    return flat @ base


def _fdecode(codes: np.ndarray, q: int, base: np.ndarray, quadratic: bool) -> np.ndarray:
    n = len(codes)
    digits = len(base)
    out = np.empty((n, digits), dtype=np.int64)
    rem = codes.copy()
    for k in range(digits):
        out[:, k] = rem % q
        rem //= q
    if quadratic:
        return out.reshape(n, 3, 3, 2)
    M = np.zeros((n, 3, 3, 2), dtype=np.int64)
    M[..., 0] = out.reshape(n, 3, 3)
    return M


@dataclass(frozen=True)
class Closure:
    """The group generated by reduced gates, as sorted canonical codes."""

    q: int
    quadratic: bool
    codes: np.ndarray
    gens: tuple[FinMat, ...]

    @property
    def order(self) -> int:
        return len(self.codes)


def close_under_products(gens: list[FinMat], cap: int = DEFAULT_CLOSURE_CAP) -> Closure:
    """Breadth-first closure of the generated group, deduplicated by code.

    Raises ResourceCapError beyond `cap` elements.
    """
    q, quadratic = gens[0].q, gens[0].quadratic
    base = _encode_base(q, quadratic)
    if base is None:
        raise ResourceCapError(f"q={q} too large for int64 closure codes")
    inv_table = np.array([0] + [pow(v, -1, q) for v in range(1, q)], dtype=np.int64)
    G = _fmats_to_array(gens)
    ident = np.zeros((1, 3, 3, 2), dtype=np.int64)
    ident[0, 0, 0, 0] = ident[0, 1, 1, 0] = ident[0, 2, 2, 0] = 1
    visited = _fencode(ident, base, quadratic)
    frontier = ident
    chunk = 1 << 21
    while len(frontier):
        new_codes = []
        for g in G:
            for start in range(0, len(frontier), chunk):
                prod = _fmul(frontier[start : start + chunk], g, q, quadratic)
                prod = _fcanon(prod, q, quadratic, inv_table)
                new_codes.append(_fencode(prod, base, quadratic))
        cand = np.unique(np.concatenate(new_codes))
        fresh = cand[~np.isin(cand, visited, assume_unique=False)]
        if not len(fresh):
            break
        visited = np.concatenate([visited, fresh])
        if len(visited) > cap:
            raise ResourceCapError(f"closure exceeded cap {cap}")
        frontier = _fdecode(fresh, q, base, quadratic)
    return Closure(q=q, quadratic=quadratic, codes=np.sort(visited), gens=tuple(gens))


def closure_order(gens: list[FinMat], cap: int = DEFAULT_CLOSURE_CAP) -> int:
    return close_under_products(gens, cap=cap).order
