"""Random right-hand sides and starting points."""

import numpy as np


def sample_rhs(n: int, rng: np.random.Generator) -> np.ndarray:
    """
    Right-hand side b with iid Uniform(-1, 1) entries.

    Args:
        n: Dimension
        rng: Random stream

    Returns:
        Vector of length n with every |b_j| < 1
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    b = rng.uniform(-1.0, 1.0, size=n)
    # uniform() is half-open; redraw the (measure-zero) endpoint
    while np.any(b <= -1.0):
        mask = b <= -1.0
        b[mask] = rng.uniform(-1.0, 1.0, size=int(mask.sum()))
    return b


def sample_sphere_point(n: int, rng: np.random.Generator) -> np.ndarray:
    """
    Uniform point on the sphere of radius sqrt(n).

    Args:
        n: Dimension
        rng: Random stream

    Returns:
        Vector w with ||w|| = sqrt(n)
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    g = rng.standard_normal(n)
    norm = np.linalg.norm(g)
    while norm == 0.0:
        g = rng.standard_normal(n)
        norm = np.linalg.norm(g)
    return np.sqrt(n) * g / norm
