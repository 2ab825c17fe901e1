"""Random problem generators: Wishart matrices, couplings, right-hand sides, sphere points."""

from .streams import trial_stream
from .matrices import sample_wishart, inner_dimension
from .couplings import CouplingTensor, EnsembleSizeError, sample_coupling_tensor, MAX_SPINS, COUPLING_STD
from .vectors import sample_rhs, sample_sphere_point

__all__ = [
    "trial_stream",
    "sample_wishart",
    "inner_dimension",
    "CouplingTensor",
    "EnsembleSizeError",
    "sample_coupling_tensor",
    "MAX_SPINS",
    "COUPLING_STD",
    "sample_rhs",
    "sample_sphere_point",
]
