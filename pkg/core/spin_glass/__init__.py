"""3-spin spherical spin glass: energy, gradient and projected gradient descent."""

from .hamiltonian import hamiltonian, gradient, energy_and_gradient
from .descent import (
    SpinGlassResult,
    gradient_descent_halting,
    tangential_component,
    FLOOR_ENERGY_PER_SPIN,
)

__all__ = [
    "hamiltonian",
    "gradient",
    "energy_and_gradient",
    "SpinGlassResult",
    "gradient_descent_halting",
    "tangential_component",
    "FLOOR_ENERGY_PER_SPIN",
]
