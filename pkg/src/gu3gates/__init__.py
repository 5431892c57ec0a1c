"""Golden gate sets for PU(3) from Gaussian-integer unitary similitudes.

Construction of the degree-one generator sets and their congruence Cayley
graphs over finite fields, exact word-length navigation, closed-form sphere
sizes and tempered spectral bounds, and numerical verification of the
Ramanujan conditions at desk scale.
"""

from .gaussian import GaussInt, Residue8, norm, pi_factor, p_prime, residue_2p2i, split_prime, valuation
from .matrices import NotSimilitudeError, ProjElement, SimilitudeMatrix, identity_element

__version__ = "0.1.0"

__all__ = [
    "GaussInt",
    "Residue8",
    "norm",
    "residue_2p2i",
    "split_prime",
    "pi_factor",
    "p_prime",
    "valuation",
    "SimilitudeMatrix",
    "ProjElement",
    "NotSimilitudeError",
    "identity_element",
    "full_gate_set",
    "split_gate_set",
    "super_gate_set",
    "__version__",
]


def __getattr__(name):
    # gate-set constructors pull in numpy; keep the base import light
    if name in ("full_gate_set", "split_gate_set", "super_gate_set"):
        from . import gatesets

        return getattr(gatesets, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
