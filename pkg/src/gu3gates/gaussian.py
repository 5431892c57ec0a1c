"""Exact arithmetic in the ring of Gaussian integers Z[i].

Everything downstream (unitary-similitude matrices, gate-set enumeration,
navigation) reduces to integer arithmetic here, so this module sticks to
plain Python ints: no floats, no overflow.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass


class NotDivisibleError(ArithmeticError):
    """Exact division was requested but the quotient is not integral."""


_GAUSS_RE = re.compile(r"^\s*([+-]?\d+)\s*([+-]\s*\d+)\s*i\s*$")


@dataclass(frozen=True)
class GaussInt:
    """A Gaussian integer re + im*i with arbitrary-precision components."""

    re: int
    im: int

    def __add__(self, other: GaussInt) -> GaussInt:
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussInt) -> GaussInt:
        return GaussInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussInt:
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other: GaussInt) -> GaussInt:
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussInt(a * c - b * d, a * d + b * c)

    def conj(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def scale(self, n: int) -> GaussInt:
        return GaussInt(self.re * n, self.im * n)

    def __str__(self) -> str:
        return f"{self.re}{self.im:+d}i"

    @classmethod
    def parse(cls, text: str) -> GaussInt:
        m = _GAUSS_RE.match(text)
        if m is None:
            raise ValueError(f"not a Gaussian integer literal: {text!r}")
        return cls(int(m.group(1)), int(m.group(2).replace(" ", "")))


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I_UNIT = GaussInt(0, 1)

#: The four units of Z[i], in the order 1, i, -1, -i.
UNITS = (ONE, I_UNIT, GaussInt(-1, 0), GaussInt(0, -1))


def norm(a: GaussInt) -> int:
    """Field norm re^2 + im^2; multiplicative and non-negative."""
    return a.norm()


def exact_div(a: GaussInt, b: GaussInt) -> GaussInt:
    """Return a / b when b divides a exactly in Z[i], else raise."""
    if b.is_zero:
        raise ZeroDivisionError("division by zero Gaussian integer")
    n = b.norm()
    t = a * b.conj()
    if t.re % n or t.im % n:
        raise NotDivisibleError(f"{b} does not divide {a}")
    return GaussInt(t.re // n, t.im // n)


def divides(b: GaussInt, a: GaussInt) -> bool:
    if b.is_zero:
        return a.is_zero
    n = b.norm()
    t = a * b.conj()
    return t.re % n == 0 and t.im % n == 0


def valuation(prime: GaussInt, a: GaussInt) -> int:
    """Largest k such that prime^k divides a exactly.

    Undefined for a = 0 (raises ValueError), mirroring ord_pi on Z[i]\\{0}.
    """
    if a.is_zero:
        raise ValueError("valuation of 0 is undefined")
    if prime.norm() <= 1:
        raise ValueError("valuation prime must be a non-unit")
    k = 0
    while divides(prime, a):
        a = exact_div(a, prime)
        k += 1
    return k


@dataclass(frozen=True)
class Residue8:
    """One of the 8 residue classes of Z[i]/(2+2i).

    Since 4 lies in the ideal (2+2i), a class is determined by the pair
    (re mod 4, im mod 4); the two pairs (a, b) and (a+2, b+2) coincide and
    the class keeps the lexicographically smaller one.
    """

    rep: tuple[int, int]

    @property
    def class_id(self) -> int:
        return _RESIDUE_IDS[self.rep]


def residue_2p2i(a: GaussInt) -> Residue8:
    """Canonical residue of a modulo 2+2i."""
    x, y = a.re % 4, a.im % 4
    alt = ((x + 2) % 4, (y + 2) % 4)
    return Residue8(min((x, y), alt))


_RESIDUE_IDS = {}
for _x in range(4):
    for _y in range(4):
        _rep = min((_x, _y), ((_x + 2) % 4, (_y + 2) % 4))
        if _rep not in _RESIDUE_IDS:
            _RESIDUE_IDS[_rep] = len(_RESIDUE_IDS)

RESIDUE_ONE = residue_2p2i(ONE)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def split_prime(p: int) -> GaussInt | None:
    """Factor an odd prime over Z[i].

    Returns the canonical prime factor pi with pi * conj(pi) = p when
    p = 1 mod 4, and None when p = 3 mod 4 (p stays prime).  The canonical
    choice has re > |im| > 0 and im > 0, which pins down one element of the
    eight associates/conjugates.
    """
    if not is_prime(p) or p == 2:
        raise ValueError(f"split_prime wants an odd prime, got {p}")
    if p % 4 == 3:
        return None
    for a in range(1, math.isqrt(p) + 1):
        b2 = p - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            return GaussInt(max(a, b), min(a, b))
    raise AssertionError(f"no two-square decomposition found for prime {p}")


def pi_factor(p: int) -> GaussInt:
    """The working prime above p: the canonical split factor, or p itself."""
    pi = split_prime(p)
    return GaussInt(p, 0) if pi is None else pi


def p_prime(p: int) -> int:
    """Similitude factor of the degree-one gate sets: p if split, p^2 if inert."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"expected an odd prime, got {p}")
    return p if p % 4 == 1 else p * p
