"""Energy H(w) = (1/N) sum_{i,j,k} x_ijk w_i w_j w_k and its Euclidean gradient."""

import numpy as np

from ..ensembles.couplings import CouplingTensor


def _check_dimension(x: CouplingTensor, w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (x.n,):
        raise ValueError(f"w has shape {w.shape}, expected ({x.n},)")
    return w


def energy_and_gradient(x: CouplingTensor, w: np.ndarray) -> tuple[float, np.ndarray]:
    """
    Evaluate H and its gradient with one pass over the tensor per contraction.

    Args:
        x: Coupling tensor
        w: Spin configuration

    Returns:
        Tuple of (energy, gradient)
    """
    w = _check_dimension(x, w)
    n = x.n

    # t[i, j] = sum_k x_ijk w_k
    t = x.entries @ w
    # u[j, l] = sum_i x_ijl w_i
    u = np.tensordot(w, x.entries, axes=(0, 0))

    tw = t @ w
    energy = float(w @ tw) / n
    grad = (tw + w @ t + w @ u) / n
    return energy, grad


def hamiltonian(x: CouplingTensor, w: np.ndarray) -> float:
    """
    Spin-glass energy over all ordered triples.

    Args:
        x: Coupling tensor
        w: Spin configuration of length x.n

    Returns:
        H_N(w)
    """
    w = _check_dimension(x, w)
    return float(w @ ((x.entries @ w) @ w)) / x.n


def gradient(x: CouplingTensor, w: np.ndarray) -> np.ndarray:
    """
    Exact Euclidean gradient of the unsymmetrized triple sum.

    Component l is (1/N)[sum_jk x_ljk w_j w_k + sum_ik x_ilk w_i w_k + sum_ij x_ijl w_i w_j].

    Args:
        x: Coupling tensor
        w: Spin configuration of length x.n

    Returns:
        Gradient vector of length x.n
    """
    return energy_and_gradient(x, w)[1]
