import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "ci", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def closure53():
    """The group generated by S_5 mod 3 (PSU_3(3), 6048 elements)."""
    from gu3gates.finitefield import close_under_products, reduce_gate_set
    from gu3gates.gatesets import full_gate_set

    return close_under_products(reduce_gate_set(full_gate_set(5), 3))


@pytest.fixture(scope="session")
def graph53_full(closure53):
    from gu3gates.cayley import build_cayley
    from gu3gates.finitefield import reduce_gate_set
    from gu3gates.gatesets import full_gate_set

    return build_cayley(closure53, reduce_gate_set(full_gate_set(5), 3))


@pytest.fixture(scope="session")
def graph53_split(closure53):
    from gu3gates.cayley import build_cayley
    from gu3gates.finitefield import reduce_gate_set
    from gu3gates.gatesets import split_gate_set

    return build_cayley(closure53, reduce_gate_set(split_gate_set(5), 3))
