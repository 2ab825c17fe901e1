"""Wishart-type matrices A = XX* for the conjugate gradient experiments."""

import numpy as np

from ..storage.models import MatrixEnsemble, MatrixKind, inner_dimension


def _sample_factor(spec: MatrixEnsemble, rng: np.random.Generator) -> np.ndarray:
    """Draw X of shape n x m with iid entries from the ensemble's law."""
    shape = (spec.n, spec.m)

    if spec.kind == MatrixKind.PBE:
        return rng.integers(0, 2, size=shape).astype(np.float64) * 2.0 - 1.0

    if spec.kind == MatrixKind.LOE:
        return rng.standard_normal(shape)

    # Standard complex normal: variance 1/2 per real part
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / np.sqrt(2.0)


def sample_wishart(spec: MatrixEnsemble, rng: np.random.Generator) -> np.ndarray:
    """
    Sample a positive semidefinite matrix A = XX*.

    Args:
        spec: Ensemble kind and dimensions (m >= n)
        rng: Random stream

    Returns:
        Dense n x n array, float64 for PBE/LOE and complex128 for LUE,
        exactly equal to its conjugate transpose
    """
    if spec.m < spec.n:
        raise ValueError(f"Inner dimension m={spec.m} must be at least n={spec.n}")

    x = _sample_factor(spec, rng)
    a = x @ x.conj().T
    # Averaging with the adjoint makes A Hermitian bit-for-bit
    return (a + a.conj().T) / 2.0


__all__ = ["sample_wishart", "inner_dimension"]
