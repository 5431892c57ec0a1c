"""3x3 unitary-similitude matrices over Z[i] and their projective classes.

A similitude is a matrix g with g g* = lambda I for a positive scalar
lambda.  Matrices are stored with integer entries plus an explicit power
of the working prime p in the denominator, so all arithmetic stays in
Z[i].  Projective classes (matrices up to scalars in Z[i, 1/p]^x) get a
canonical primitive representative and a hashable key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .gaussian import (
    ONE,
    UNITS,
    ZERO,
    GaussInt,
    divides,
    exact_div,
    pi_factor,
    valuation,
)

Rows = tuple[tuple[GaussInt, GaussInt, GaussInt], ...]


class NotSimilitudeError(ArithmeticError):
    """g g* is not a scalar matrix."""


def _as_rows(entries) -> Rows:
    rows = tuple(tuple(e for e in row) for row in entries)
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("expected a 3x3 matrix")
    return rows


@dataclass(frozen=True)
class SimilitudeMatrix:
    """3x3 matrix over Z[i] scaled by p^-denom_exp, with g g* scalar."""

    entries: Rows
    p: int
    denom_exp: int = 0

    @classmethod
    def from_rows(cls, entries, p: int, denom_exp: int = 0) -> SimilitudeMatrix:
        return cls(_as_rows(entries), p, denom_exp)

    @classmethod
    def from_ints(cls, rows, p: int, denom_exp: int = 0) -> SimilitudeMatrix:
        """Build from ((re, im), ...) int pairs or plain ints."""
        conv = lambda e: GaussInt(*e) if isinstance(e, tuple) else GaussInt(e, 0)
        return cls(tuple(tuple(conv(e) for e in row) for row in rows), p, denom_exp)

    @classmethod
    def identity(cls, p: int) -> SimilitudeMatrix:
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(3)) for i in range(3)), p)

    def __matmul__(self, other: SimilitudeMatrix) -> SimilitudeMatrix:
        if self.p != other.p:
            raise ValueError("p mismatch in matrix product")
        a, b = self.entries, other.entries
        rows = tuple(
            tuple(
                a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j]
                for j in range(3)
            )
            for i in range(3)
        )
        return SimilitudeMatrix(rows, self.p, self.denom_exp + other.denom_exp)

    def adjoint(self) -> SimilitudeMatrix:
        """Conjugate transpose; same denominator convention."""
        e = self.entries
        rows = tuple(tuple(e[j][i].conj() for j in range(3)) for i in range(3))
        return SimilitudeMatrix(rows, self.p, self.denom_exp)

    def scale(self, c: GaussInt) -> SimilitudeMatrix:
        rows = tuple(tuple(c * e for e in row) for row in self.entries)
        return SimilitudeMatrix(rows, self.p, self.denom_exp)

    def det(self) -> GaussInt:
        e = self.entries
        return (
            e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
        )

    @property
    def is_zero(self) -> bool:
        return all(e.is_zero for row in self.entries for e in row)

    def is_scalar(self) -> bool:
        e = self.entries
        off = all(e[i][j].is_zero for i in range(3) for j in range(3) if i != j)
        return off and e[0][0] == e[1][1] == e[2][2]

    def integer_similitude_factor(self) -> int:
        """lambda of the integer part: entries * adjoint(entries) = lambda I."""
        m = (self @ self.adjoint()).entries
        for i in range(3):
            for j in range(3):
                if i != j and not m[i][j].is_zero:
                    raise NotSimilitudeError("g g* has a nonzero off-diagonal entry")
        lam = m[0][0]
        if m[1][1] != lam or m[2][2] != lam:
            raise NotSimilitudeError("g g* is not a scalar matrix")
        if lam.im != 0 or lam.re <= 0:
            raise NotSimilitudeError(f"similitude factor {lam} is not a positive integer")
        return lam.re

    def similitude_factor(self) -> Fraction:
        """lambda with g g* = lambda I, for the true (denominator-scaled) matrix."""
        return Fraction(self.integer_similitude_factor(), self.p ** (2 * self.denom_exp))

    def min_valuation(self, prime: GaussInt) -> int:
        """ord_prime of the matrix: minimum over nonzero entries."""
        if self.is_zero:
            raise ValueError("valuation of the zero matrix is undefined")
        return min(valuation(prime, e) for row in self.entries for e in row if not e.is_zero)

    def level(self) -> int:
        """Building distance from the base vertex: ord_p(g g*) - ord_pi g - ord_pibar g.

        Invariant under scalars from Z[i, 1/p]^x, so it only depends on the
        projective class.  Needs odd p.
        """
        if self.p == 2:
            raise ValueError("level is defined for odd p only")
        pi = pi_factor(self.p)
        lam = self.integer_similitude_factor()
        ordp_lam = 0
        while lam % self.p == 0:
            lam //= self.p
            ordp_lam += 1
        return ordp_lam - self.min_valuation(pi) - self.min_valuation(pi.conj())

    def pi_height(self) -> int:
        """Colored building distance: ord_pi(det g) - 3 ord_pi(g); split p only."""
        if self.p % 4 != 1:
            raise ValueError("pi_height needs a split prime p = 1 mod 4")
        pi = pi_factor(self.p)
        return valuation(pi, self.det()) - 3 * self.min_valuation(pi)

    def projective_equal(self, other: SimilitudeMatrix) -> bool:
        """True iff self * adjoint(other) is scalar (equality in the projective group).

        For matrices whose similitude factor is a power of p this agrees with
        equality of canonical forms; for unrelated scalars it is just the
        scalar test stated here.
        """
        return (self @ other.adjoint()).is_scalar()

    def canonicalize(self) -> ProjElement:
        return _canonicalize(self)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "denom_exp": self.denom_exp,
            "rows": [[str(e) for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> SimilitudeMatrix:
        rows = tuple(
            tuple(GaussInt.parse(s) for s in row) for row in data["rows"]
        )
        return cls(rows, int(data["p"]), int(data.get("denom_exp", 0)))


def _unit_key(z: GaussInt) -> tuple[bool, bool, int, int]:
    return (z.re > 0, z.im >= 0, z.re, z.im)


def canonical_unit(z: GaussInt) -> GaussInt:
    """The unit u in {1, i, -1, -i} maximizing the tie-break key of u*z."""
    return max(UNITS, key=lambda u: _unit_key(u * z))


@lru_cache(maxsize=8)
def _content_primes(p: int) -> tuple[GaussInt, ...]:
    """Primes of Z[i] above p, whose powers (with units) make up Z[i, 1/p]^x."""
    if p == 2:
        return (GaussInt(1, 1),)
    pi = pi_factor(p)
    if pi.im == 0:
        return (pi,)
    return (pi, pi.conj())


@dataclass(frozen=True, eq=False)
class ProjElement:
    """Canonical representative of a similitude matrix modulo Z[i, 1/p]^x scalars."""

    canonical: SimilitudeMatrix
    key: tuple = field(repr=False)

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProjElement) and self.key == other.key

    @property
    def p(self) -> int:
        return self.canonical.p

    @property
    def matrix(self) -> SimilitudeMatrix:
        return self.canonical

    def is_identity(self) -> bool:
        return self.canonical.entries == SimilitudeMatrix.identity(self.p).entries

    def __matmul__(self, other: ProjElement) -> ProjElement:
        return (self.canonical @ other.canonical).canonicalize()

    def inverse(self) -> ProjElement:
        # g^-1 = g*/lambda, and scalars cancel projectively.
        return self.canonical.adjoint().canonicalize()

    def to_json(self) -> dict:
        return self.canonical.to_json()


def _canonicalize(g: SimilitudeMatrix) -> ProjElement:
    if g.is_zero:
        raise ValueError("cannot canonicalize the zero matrix")
    rows = [list(row) for row in g.entries]
    # Clear all content at primes above p; the p-denominator is a scalar too.
    for prime in _content_primes(g.p):
        while all(divides(prime, e) for row in rows for e in row):
            rows = [[exact_div(e, prime) for e in row] for row in rows]
    flat = [e for row in rows for e in row]
    first = next(e for e in flat if not e.is_zero)
    u = canonical_unit(first)
    rows = tuple(tuple(u * e for e in row) for row in rows)
    key = (g.p,) + tuple((e.re, e.im) for row in rows for e in row)
    return ProjElement(SimilitudeMatrix(rows, g.p, 0), key)


def identity_element(p: int) -> ProjElement:
    return SimilitudeMatrix.identity(p).canonicalize()
