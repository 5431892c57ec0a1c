"""Word-length-optimal compilation of lattice elements into generator words.

Split p: any element of the lattice generated by the gate set factors as a
positive word in the split generators, of length exactly its pi-height.
Each step strips one letter by left-multiplying with an adjoint; the letter
is found in O(1) from the Iwasawa normal form of the element over Q_p
(unique upper-triangular b with p-power diagonal), falling back to a scan
certified by the height itself.  Inert p: the same descent driven by the
level, two units per letter, by scanning the full gate set.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotInLatticeError, PrecisionExceededError
from .gaussian import GaussInt, UNITS, RESIDUE_ONE, residue_2p2i, split_prime
from .gatesets import GateSet
from .matrices import ProjElement, SimilitudeMatrix


@dataclass(frozen=True)
class PadicScalar:
    """An element of Z_p known to `precision` digits: value mod p^precision."""

    p: int
    precision: int
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p**self.precision)


@dataclass(frozen=True)
class Word:
    """A generator word: (index, inverse?) steps, evaluated left to right."""

    steps: tuple[tuple[int, bool], ...]

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> list[dict]:
        return [{"index": i, "inverse": inv} for i, inv in self.steps]

    @classmethod
    def from_json(cls, data) -> Word:
        return cls(tuple((int(d["index"]), bool(d["inverse"])) for d in data))


@dataclass(frozen=True)
class IwasawaForm:
    """Upper-triangular normal form b with diag(p^m1, p^m2, p^m3).

    Off-diagonal entries satisfy 0 <= x, y < p^m1 and 0 <= z < p^m2, and the
    entries have no common p factor; this is a complete coset invariant for
    GL_3(Q_p) modulo scalars times GL_3(Z_p).
    """

    p: int
    m: tuple[int, int, int]
    x: int
    y: int
    z: int

    def matrix(self) -> list[list[int]]:
        m1, m2, m3 = self.m
        p = self.p
        return [[p**m1, self.x, self.y], [0, p**m2, self.z], [0, 0, p**m3]]

    @property
    def height(self) -> int:
        return sum(self.m)

    @property
    def pivot_row(self) -> int:
        """Largest 1-based index i with m_i != 0 (0 for the identity coset)."""
        for i in (3, 2, 1):
            if self.m[i - 1]:
                return i
        return 0


def min_sqrt_minus_one(p: int) -> int:
    for x in range(2, p):
        if x * x % p == p - 1:
            return x
    raise ValueError(f"-1 is not a square mod {p}")


def hensel_sqrt_minus_one(p: int, digits: int, *, low: int | None = None) -> PadicScalar:
    """Square root of -1 in Z_p to `digits` digits, by Newton lifting.

    The canonical branch starts from the smaller root mod p; pass `low` to
    select the other branch explicitly.
    """
    if p % 4 != 1:
        raise ValueError(f"-1 is a square in Z_p only for p = 1 mod 4, got {p}")
    if digits < 1:
        raise ValueError("need at least one digit")
    r = min_sqrt_minus_one(p)
    x = r if low is None else low % p
    if (x * x + 1) % p:
        raise ValueError(f"{low} is not a square root of -1 mod {p}")
    prec = 1
    while prec < digits:
        prec = min(2 * prec, digits)
        mod = p**prec
        # Newton step for x^2 + 1: exact once past half precision
        x = (x - (x * x + 1) * pow(2 * x, -1, mod)) % mod
    assert (x * x + 1) % p**digits == 0
    return PadicScalar(p, digits, x)


def _padic_valuation(v: int, p: int, prec: int) -> int:
    """Valuation of v mod p^prec; `prec` means indistinguishable from zero."""
    v %= p**prec
    if v == 0:
        return prec
    k = 0
    while v % p == 0:
        v //= p
        k += 1
    return k


def iwasawa_form(mat, p: int, precision: int) -> IwasawaForm:
    """Column-reduce an integer matrix mod p^precision to its normal form.

    Right multiplication by GL_3(Z_p) gives column operations; scalars kill
    the overall p-power content.  Raises PrecisionExceededError when a pivot
    or the final form is not determined at this precision.
    """
    mod = p**precision
    A = [[int(e) % mod for e in row] for row in mat]
    for r in (2, 1, 0):
        vals = [_padic_valuation(A[r][c], p, precision) for c in range(r + 1)]
        mr = min(vals)
        if mr >= precision:
            raise PrecisionExceededError(f"row {r} vanishes at precision {precision}")
        c0 = vals.index(mr)
        if c0 != r:
            for i in range(3):
                A[i][c0], A[i][r] = A[i][r], A[i][c0]
        unit = A[r][r] // p**mr
        uinv = pow(unit, -1, mod)
        for i in range(3):
            A[i][r] = A[i][r] * uinv % mod
        for c in range(r):
            f = A[r][c] // p**mr
            for i in range(3):
                A[i][c] = (A[i][c] - f * A[i][r]) % mod
    # strip common p content (a projective scalar)
    d = min(_padic_valuation(A[i][j], p, precision) for i in range(3) for j in range(3))
    if d:
        A = [[v // p**d for v in row] for row in A]
    mod = p ** (precision - d)
    m = [_padic_valuation(A[i][i], p, precision - d) for i in range(3)]
    if sum(m) >= precision - d:
        raise PrecisionExceededError("diagonal exceeds working precision")
    # reduce above-diagonal entries modulo the diagonal of their row
    pm1, pm2 = p ** m[0], p ** m[1]
    z = A[1][2] % pm2
    f = (A[1][2] - z) // pm2
    A[0][2] = (A[0][2] - f * A[0][1]) % mod
    x = A[0][1] % pm1
    y = A[0][2] % pm1
    return IwasawaForm(p=p, m=(m[0], m[1], m[2]), x=x, y=y, z=z)


# ---------------------------------------------------------------------------
# lattice membership


def lattice_unit(elem: ProjElement) -> GaussInt | None:
    """The unit making all diagonal entries of the canonical lift = 1 mod 2+2i.

    Membership in the navigable lattice amounts to: the similitude factor is
    a power of p, and some unit multiple carries the diagonal congruence.
    Returns None when no unit works.
    """
    m = elem.canonical
    lam = m.integer_similitude_factor()
    while lam % m.p == 0:
        lam //= m.p
    if lam != 1:
        return None
    for u in UNITS:
        if all(residue_2p2i(u * m.entries[i][i]) == RESIDUE_ONE for i in range(3)):
            return u
    return None


def in_lattice(elem: ProjElement) -> bool:
    return lattice_unit(elem) is not None


# ---------------------------------------------------------------------------
# navigation


@lru_cache(maxsize=8)
def _step_table(gs: GateSet) -> tuple[dict, int]:
    """Map (pivot row, row residues mod p) -> generator index, plus the branch root.

    Built from the Iwasawa forms of the split generators; the square root of
    -1 is chosen so that the canonical Gaussian prime over p embeds as a
    uniformizer (otherwise heights would track its conjugate).
    """
    p = gs.p
    pi = split_prime(p)
    r = min_sqrt_minus_one(p)
    if (pi.re + pi.im * r) % p != 0:
        r = p - r
    assert (pi.re + pi.im * r) % p == 0
    table: dict[tuple, int] = {}
    for idx, lift in enumerate(gs.lifts):
        b = _embedded_iwasawa(lift, r, p, precision=3)
        assert b.height == 1, "split generators must have height one"
        key = _row_key(b, p)
        assert key not in table, "step table keys must be unique"
        table[key] = idx
    assert len(table) == len(gs.lifts)
    return table, r


def _row_key(b: IwasawaForm, p: int) -> tuple:
    j = b.pivot_row
    if j == 1:
        return (1, b.x % p, b.y % p)
    if j == 2:
        return (2, b.z % p)
    return (3,)


def _embedded_iwasawa(m: SimilitudeMatrix, root: int, p: int, precision: int) -> IwasawaForm:
    mod = p**precision
    mat = [[(e.re + e.im * root) % mod for e in row] for row in m.entries]
    return iwasawa_form(mat, p, precision)


def navigate(elem: ProjElement, gs: GateSet, *, guard_digits: int = 2) -> Word:
    """Factor a lattice element into a shortest generator word.

    Split variant: the word length is the pi-height, each step found from
    the Iwasawa pivot row (with a certified height-descent fallback).  Full
    variant at inert p: length level/2, each step found by the level scan.
    """
    u = lattice_unit(elem)
    if u is None:
        raise NotInLatticeError("element is not in the navigable lattice")
    if gs.variant == "split":
        return _navigate_split(elem, gs, guard_digits)
    if gs.variant == "full" and gs.p % 4 == 3:
        return _navigate_inert(elem, gs)
    raise ValueError(
        f"navigation works over the split set (p = 1 mod 4) or the full inert set, got {gs.variant!r} at p={gs.p}"
    )


#: Number of times the Iwasawa selector missed and the height scan took over.
#: Expected to stay 0; watched by the test suite.
fallback_count = 0


def select_letter(elem: ProjElement, gs: GateSet, guard_digits: int = 2) -> int:
    """The split generator chosen by the Iwasawa pivot-row rule.

    The pivot row of the normal form, taken mod p, matches the corresponding
    row of exactly one generator's normal form (the key space is a bijection
    onto the p^2+p+1 possibilities); that letter starts a geodesic word.
    """
    p = gs.p
    table, root = _step_table(gs)
    cur = elem.canonical
    h = cur.pi_height()
    if h == 0:
        raise ValueError("the identity class has no letters")
    precision = h + guard_digits
    root_full = hensel_sqrt_minus_one(p, precision, low=root).value
    b = _embedded_iwasawa(cur, root_full, p, precision)
    assert b.height == h, "Iwasawa height must match the exact pi-height"
    return table[_row_key(b, p)]


def _navigate_split(elem: ProjElement, gs: GateSet, guard_digits: int) -> Word:
    global fallback_count
    cur = elem.canonical
    h = cur.pi_height()
    steps: list[tuple[int, bool]] = []
    while h > 0:
        idx = select_letter(cur.canonicalize(), gs, guard_digits)
        cand = (gs.lifts[idx].adjoint() @ cur).canonicalize().canonical
        if cand.pi_height() != h - 1:  # certified fallback: scan for a descent
            fallback_count += 1
            logging.getLogger(__name__).warning(
                "pivot-row selector missed at height %d; falling back to the height scan", h
            )
            for idx, lift in enumerate(gs.lifts):
                cand = (lift.adjoint() @ cur).canonicalize().canonical
                if cand.pi_height() == h - 1:
                    break
            else:
                raise NotInLatticeError("no generator descends; element is not in the lattice")
        steps.append((idx, False))
        cur = cand
        h -= 1
    if not cur.canonicalize().is_identity():
        raise NotInLatticeError("descent terminated away from the identity")
    return Word(tuple(steps))


def _navigate_inert(elem: ProjElement, gs: GateSet) -> Word:
    cur = elem.canonical
    lv = cur.level()
    if lv % 2:
        raise NotInLatticeError(f"inert levels are even, got {lv}")
    steps: list[tuple[int, bool]] = []
    while lv > 0:
        for idx, lift in enumerate(gs.lifts):
            cand = (lift.adjoint() @ cur).canonicalize().canonical
            if cand.level() == lv - 2:
                steps.append((idx, False))
                cur = cand
                lv -= 2
                break
        else:
            raise NotInLatticeError("no generator descends; element is not in the lattice")
    if not cur.canonicalize().is_identity():
        raise NotInLatticeError("descent terminated away from the identity")
    return Word(tuple(steps))


def descending_letters(elem: ProjElement, gs: GateSet) -> list[int]:
    """All generator indices whose adjoint strictly descends; used to test
    uniqueness of the navigation step."""
    cur = elem.canonical
    if gs.variant == "split":
        h = cur.pi_height()
        return [
            i
            for i, lift in enumerate(gs.lifts)
            if (lift.adjoint() @ cur).canonicalize().canonical.pi_height() == h - 1
        ]
    lv = cur.level()
    return [
        i
        for i, lift in enumerate(gs.lifts)
        if (lift.adjoint() @ cur).canonicalize().canonical.level() == lv - 2
    ]


def evaluate_word(word: Word, gs: GateSet) -> ProjElement:
    """Exact product of the referenced lifts (adjoints for inverse steps)."""
    acc = SimilitudeMatrix.identity(gs.p)
    for idx, inverse in word.steps:
        if not 0 <= idx < len(gs.lifts):
            raise IndexError(f"generator index {idx} out of range")
        lift = gs.lifts[idx]
        acc = acc @ (lift.adjoint() if inverse else lift)
    return acc.canonicalize()
