"""Coupling tensors x_ijk for the 3-spin spherical spin glass."""

from dataclasses import dataclass

import numpy as np

from ..storage.models import CouplingEnsemble, CouplingKind

# Dense n^3 storage
MAX_SPINS = 512

UNIFORM_HALF_WIDTH = 1.5 ** (1.0 / 3.0)
BERNOULLI_MAGNITUDE = 1.0 / np.sqrt(2.0)

# Standard deviation of a single coupling under each law
COUPLING_STD = {
    CouplingKind.GAUSSIAN: 1.0,
    CouplingKind.BERNOULLI: BERNOULLI_MAGNITUDE,
    CouplingKind.UNIFORM: UNIFORM_HALF_WIDTH / np.sqrt(3.0),
}


class EnsembleSizeError(ValueError):
    """Raised when a requested instance is too large to store densely."""
    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(f"Coupling tensor with n={n} exceeds the dense limit n <= {limit}")


@dataclass
class CouplingTensor:
    """Unsymmetrized order-3 couplings, stored row-major as (n, n, n)."""
    n: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.ascontiguousarray(self.entries, dtype=np.float64)
        if self.entries.shape != (self.n, self.n, self.n):
            raise ValueError(
                f"Coupling entries have shape {self.entries.shape}, expected {(self.n,) * 3}"
            )
        if not np.all(np.isfinite(self.entries)):
            raise ValueError("Coupling entries must be finite")

    @classmethod
    def zeros(cls, n: int) -> "CouplingTensor":
        return cls(n=n, entries=np.zeros((n, n, n)))


def sample_coupling_tensor(spec: CouplingEnsemble, rng: np.random.Generator) -> CouplingTensor:
    """
    Draw n^3 iid couplings from the ensemble's law.

    Laws: Gaussian(0, 1); Bernoulli +-1/sqrt(2); Uniform(-(3/2)^(1/3), (3/2)^(1/3)).

    Args:
        spec: Coupling law and number of spins
        rng: Random stream

    Returns:
        CouplingTensor with unsymmetrized entries
    """
    if spec.n > MAX_SPINS:
        raise EnsembleSizeError(spec.n, MAX_SPINS)

    shape = (spec.n,) * 3

    if spec.kind == CouplingKind.GAUSSIAN:
        entries = rng.standard_normal(shape)
    elif spec.kind == CouplingKind.BERNOULLI:
        signs = rng.integers(0, 2, size=shape).astype(np.float64) * 2.0 - 1.0
        entries = signs * BERNOULLI_MAGNITUDE
    else:
        entries = rng.uniform(-UNIFORM_HALF_WIDTH, UNIFORM_HALF_WIDTH, size=shape)

    return CouplingTensor(n=spec.n, entries=entries)
