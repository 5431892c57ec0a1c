import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gu3gates.gaussian import (
    GaussInt,
    NotDivisibleError,
    exact_div,
    norm,
    p_prime,
    pi_factor,
    residue_2p2i,
    split_prime,
    valuation,
)

gauss = st.builds(GaussInt, st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))


def test_norm_examples():
    assert norm(GaussInt(2, 1)) == 5
    assert norm(GaussInt(0, 0)) == 0
    # (2+i)(3+2i) = 4+7i, and the norm is multiplicative: 5 * 13 = 65
    prod = GaussInt(2, 1) * GaussInt(3, 2)
    assert prod == GaussInt(4, 7)
    assert norm(prod) == 65 == norm(GaussInt(2, 1)) * norm(GaussInt(3, 2))


@settings(max_examples=200)
@given(gauss, gauss)
def test_norm_multiplicative(a, b):
    assert norm(a * b) == norm(a) * norm(b)


def test_norm_multiplicative_bulk():
    rng = random.Random(7)
    for _ in range(1000):
        a = GaussInt(rng.randrange(-10**9, 10**9), rng.randrange(-10**9, 10**9))
        b = GaussInt(rng.randrange(-10**9, 10**9), rng.randrange(-10**9, 10**9))
        assert norm(a * b) == norm(a) * norm(b)


@settings(max_examples=200)
@given(gauss)
def test_conj_involution(a):
    assert a.conj().conj() == a
    assert norm(a.conj()) == norm(a)


def test_residue_ring_has_eight_classes():
    classes = {residue_2p2i(GaussInt(a, b)) for a in range(4) for b in range(4)}
    assert len(classes) == 8


def test_residue_units_distinct():
    units = [GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1)]
    assert len({residue_2p2i(u) for u in units}) == 4


def test_residue_translation_invariance():
    m = GaussInt(2, 2)
    rng = random.Random(11)
    for _ in range(300):
        a = GaussInt(rng.randrange(-50, 50), rng.randrange(-50, 50))
        b = GaussInt(rng.randrange(-50, 50), rng.randrange(-50, 50))
        assert residue_2p2i(a + m * b) == residue_2p2i(a)


def test_residue_examples():
    assert residue_2p2i(GaussInt(3, 2)) == residue_2p2i(GaussInt(1, 0))
    assert residue_2p2i(GaussInt(2, 2)) == residue_2p2i(GaussInt(0, 0))


def test_split_prime_small():
    pi5 = split_prime(5)
    assert pi5 == GaussInt(2, 1)
    assert pi5 * pi5.conj() == GaussInt(5, 0)
    pi13 = split_prime(13)
    assert pi13 == GaussInt(3, 2)
    assert pi13.norm() == 13
    assert split_prime(3) is None
    assert split_prime(7) is None


def test_split_prime_canonical_shape():
    for p in (5, 13, 17, 29, 37, 41, 53):
        pi = split_prime(p)
        assert pi.re > abs(pi.im) > 0 and pi.im > 0
        assert pi.norm() == p


def test_split_prime_rejects_bad_input():
    for bad in (2, 9, 15, 1, 0):
        with pytest.raises(ValueError):
            split_prime(bad)


def test_pi_factor_and_p_prime():
    assert pi_factor(3) == GaussInt(3, 0)
    assert pi_factor(5) == GaussInt(2, 1)
    assert p_prime(5) == 5
    assert p_prime(3) == 9
    with pytest.raises(ValueError):
        p_prime(2)


def test_valuation_examples():
    pi = GaussInt(2, 1)
    assert valuation(pi, GaussInt(5, 0)) == 1
    assert valuation(pi, GaussInt(25, 0)) == 2
    assert valuation(pi, GaussInt(2, -1)) == 0
    with pytest.raises(ValueError):
        valuation(pi, GaussInt(0, 0))


def test_valuation_splits_norm():
    # ord_pi + ord_pibar recovers the p-adic valuation of the norm.
    pi = split_prime(5)
    rng = random.Random(23)
    checked = 0
    while checked < 500:
        a = GaussInt(rng.randrange(-200, 200), rng.randrange(-200, 200))
        if a.is_zero:
            continue
        k = rng.randrange(0, 4)
        a = a.scale(5**k)
        n = norm(a)
        vp = 0
        while n % 5 == 0:
            n //= 5
            vp += 1
        assert valuation(pi, a) + valuation(pi.conj(), a) == vp
        checked += 1


def test_exact_div():
    a = GaussInt(4, 7)
    assert exact_div(a, GaussInt(2, 1)) == GaussInt(3, 2)
    with pytest.raises(NotDivisibleError):
        exact_div(GaussInt(1, 0), GaussInt(2, 1))


def test_text_roundtrip():
    for a in (GaussInt(3, 2), GaussInt(-1, -2), GaussInt(0, 0), GaussInt(10**30, -5)):
        assert GaussInt.parse(str(a)) == a
    assert str(GaussInt(3, 2)) == "3+2i"
    assert str(GaussInt(1, -2)) == "1-2i"
