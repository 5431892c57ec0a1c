from fractions import Fraction

import pytest

from gu3gates.gatesets import full_gate_set, split_gate_set, sphere_sizes
from gu3gates.spectral import lambda_ram, lambda_triv, sphere_stats, stats_table


def test_lambda_triv_examples():
    assert lambda_triv(5, 1, "full") == 62
    assert lambda_triv(3, 1, "full") == 84
    # 3*5^4 + 4*5^3 + 4*5^2 + 5
    assert lambda_triv(5, 2, "full") == 2480
    assert lambda_triv(5, 1, "split") == 31
    assert lambda_triv(5, 2, "split") == 806
    assert lambda_triv(3, 2, "full") == 3**8 + 3**5


def test_lambda_ram_small_radii():
    for p in (5, 13, 17):
        assert lambda_ram(p, 1, "full") == 6 * p
        assert lambda_ram(p, 1, "split") == 3 * p
    for p in (3, 7, 11):
        assert lambda_ram(p, 1, "full") == 2 * p * p + p - 1
    assert lambda_ram(3, 1, "full") == 20


def test_lambda_ram_radius_one_matches_deltoid_geometry():
    # The radius-1 bounds are extremes over the colored spectrum region
    # p(a + b + conj(ab)): |z| maxes at 3p (split operator) and z + conj(z)
    # at 6p (symmetric full operator), both attained at a = b = 1.
    import numpy as np

    p = 5
    rng = np.random.default_rng(17)
    th = rng.uniform(0, 2 * np.pi, (100_000, 2))
    z = p * (np.exp(1j * th[:, 0]) + np.exp(1j * th[:, 1]) + np.exp(-1j * th.sum(axis=1)))
    assert float(np.abs(z).max()) <= 3 * p + 1e-9
    assert float((2 * z.real).max()) <= 6 * p + 1e-9
    assert float(np.abs(z).max()) > 3 * p - 0.05 * p
    assert float((2 * z.real).max()) > 6 * p - 0.05 * p
    corner = p * (1 + 1 + 1)
    assert abs(corner) == 3 * p and 2 * corner.real == 6 * p
    assert lambda_ram(p, 1, "split") == 3 * p
    assert lambda_ram(p, 1, "full") == 6 * p


def test_lambda_ram_exact_rational():
    assert isinstance(lambda_ram(5, 3, "split"), Fraction)
    # split-full values for l = 2, 3 reduce to integer polynomials in p
    for p in (5, 13):
        assert lambda_ram(p, 2, "full") == 20 * p**2 - 7 * p - 1
        assert lambda_ram(p, 3, "full") == 50 * p**3 - 34 * p**2 + 2 * p


def test_variant_validation():
    with pytest.raises(ValueError):
        lambda_triv(3, 1, "split")
    with pytest.raises(ValueError):
        lambda_triv(5, 1, "both")
    with pytest.raises(ValueError):
        lambda_triv(4, 1, "full")


def test_sphere_sizes_match_closed_forms():
    # Independent cross-check: breadth-first sphere counts against the formulas.
    sizes = sphere_sizes(split_gate_set(5), 3)
    assert sizes == [1] + [lambda_triv(5, l, "split") for l in (1, 2, 3)]
    sizes = sphere_sizes(full_gate_set(5), 2)
    assert sizes == [1] + [lambda_triv(5, l, "full") for l in (1, 2)]
    sizes = sphere_sizes(full_gate_set(3), 2)
    assert sizes == [1] + [lambda_triv(3, l, "full") for l in (1, 2)]


def test_exponential_growth():
    for p in (3, 5, 13):
        for variant in ("full", "split") if p % 4 == 1 else ("full",):
            for l in range(1, 8):
                ratio = Fraction(lambda_triv(p, l + 1, variant), lambda_triv(p, l, variant))
                assert ratio >= p * p


def test_ram_versus_triv_scaling():
    # lambda_ram^2 stays within a poly(l) factor of lambda_triv
    C, c = 20, 8
    for p in (3, 5, 13):
        variants = ("full", "split") if p % 4 == 1 else ("full",)
        for variant in variants:
            for l in range(1, 9):
                lr = lambda_ram(p, l, variant)
                lt = lambda_triv(p, l, variant)
                assert lr * lr <= C * l**c * lt


def test_stats_table():
    table = stats_table(5, 3, "split")
    assert [s.l for s in table] == [1, 2, 3]
    assert table[0].lambda_triv == 31
    data = table[1].to_json()
    assert data["lambda_triv"] == 806
    assert isinstance(data["lambda_ram"], str)


def test_stats_ordering_invariant():
    for p in (3, 5):
        s = sphere_stats(p, 4, "full")
        assert s.lambda_triv > s.lambda_ram > 0
