"""Closed forms for sphere sizes and tempered spectral bounds.

For the spherical sum operator attached to the radius-l word sphere of a
gate set, lambda_triv is its degree (= the sphere size, by simple
transitivity) and lambda_ram is the operator-norm bound on the tempered
part of the spectrum.  Everything is evaluated in exact rationals; the
degree formulas must come out integral and are checked to.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb


def _comb0(n: int, k: int) -> int:
    """Binomial coefficient that is 0 whenever the top is negative."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def _check_variant(p: int, variant: str) -> None:
    if variant not in ("full", "split"):
        raise ValueError(f"variant must be 'full' or 'split', got {variant!r}")
    if variant == "split" and p % 4 != 1:
        raise ValueError("the split variant needs p = 1 mod 4")
    if p % 2 == 0:
        raise ValueError("p must be an odd prime")


def lambda_triv(p: int, l: int, variant: str = "full") -> int:
    """Size of the radius-l word sphere (degree of the spherical operator)."""
    _check_variant(p, variant)
    if l == 0:
        return 1
    P = Fraction(p)
    if variant == "split":
        val = (P ** (2 * l) + P ** (2 * l - 1) + P ** (2 * l - 2)) * (
            1 + sum(P**-i for i in range(2, l + 1))
        )
    elif p % 4 == 1:
        val = (
            (l + 1) * P ** (2 * l)
            + 2 * l * P ** (2 * l - 1)
            + 2 * l * P ** (2 * l - 2)
            + (l - 1) * P ** (2 * l - 3)
        )
    else:
        val = P ** (4 * l) + P ** (4 * l - 3)
    if val.denominator != 1:
        raise ArithmeticError(f"sphere size came out non-integral: {val}")
    return int(val)


def lambda_ram(p: int, l: int, variant: str = "full") -> Fraction:
    """Tempered operator-norm bound for the radius-l spherical operator."""
    _check_variant(p, variant)
    if l == 0:
        return Fraction(1)
    P = Fraction(p)
    if variant == "split":
        return _comb0(l + 2, 2) * P**l - _comb0(l - 1, 2) * P ** (l - 3)
    if p % 4 == 1:
        return (
            Fraction(_comb0(l + 3, 3) * (l + 2), 2) * P**l
            - Fraction(_comb0(l + 1, 3) * (3 * l + 8), 2) * P ** (l - 1)
            + Fraction(_comb0(l + 1, 3) * (3 * l - 8), 2) * P ** (l - 2)
            - Fraction(_comb0(l - 1, 3) * (l - 2), 2) * P ** (l - 3)
        )
    return (l + 1) * P ** (2 * l) + l * P ** (2 * l - 3) * (P**2 - P - 1) + P ** (2 * l - 3)


@dataclass(frozen=True)
class SphereStats:
    p: int
    l: int
    variant: str
    lambda_triv: int
    lambda_ram: Fraction

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "l": self.l,
            "variant": self.variant,
            "lambda_triv": self.lambda_triv,
            "lambda_ram": str(self.lambda_ram),
            "lambda_ram_float": float(self.lambda_ram),
        }


def sphere_stats(p: int, l: int, variant: str = "full") -> SphereStats:
    lt = lambda_triv(p, l, variant)
    lr = lambda_ram(p, l, variant)
    if l >= 1 and not lt > lr > 0:
        raise ArithmeticError(f"expected lambda_triv > lambda_ram > 0, got {lt}, {lr}")
    return SphereStats(p, l, variant, lt, lr)


def stats_table(p: int, lmax: int, variant: str = "full") -> list[SphereStats]:
    return [sphere_stats(p, l, variant) for l in range(1, lmax + 1)]
