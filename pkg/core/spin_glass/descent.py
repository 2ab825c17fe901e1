"""Projected gradient descent on the sphere of radius sqrt(N)."""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..ensembles.couplings import CouplingTensor
from ..storage.models import SpinGlassConfig, GradientNorm
from .hamiltonian import energy_and_gradient

logger = logging.getLogger(__name__)

# Asymptotic energy per spin where most local minima sit: -2 sqrt(2/3)
FLOOR_ENERGY_PER_SPIN = -2.0 * np.sqrt(2.0 / 3.0)

SPHERE_RTOL = 1e-10


@dataclass
class SpinGlassResult:
    """Outcome of one gradient-descent run."""
    halting_time: int
    final_energy: float
    final_energy_per_spin: float
    final_gradient_norm: float
    converged: bool
    final_point: Optional[np.ndarray] = None
    energy_history: Optional[list[float]] = None
    error: Optional[str] = None  # "non_finite" or "max_iter"


def tangential_component(grad: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Project a gradient onto the tangent space of the sphere at w."""
    return grad - (np.dot(grad, w) / np.dot(w, w)) * w


def _stopping_norm(grad: np.ndarray, w: np.ndarray, kind: GradientNorm) -> float:
    if kind == GradientNorm.AMBIENT:
        return float(np.linalg.norm(grad))
    return float(np.linalg.norm(tangential_component(grad, w)))


def gradient_descent_halting(
    x: CouplingTensor,
    w0: np.ndarray,
    cfg: SpinGlassConfig,
) -> SpinGlassResult:
    """
    Descend H from w0 until the gradient norm drops below eps.

    Each iteration takes a Euclidean gradient step with fixed eta, rescales
    to ||w|| = sqrt(N), then tests the gradient norm at the rescaled point.

    Args:
        x: Coupling tensor
        w0: Starting point on the sphere of radius sqrt(N)
        cfg: Step size, threshold, cap and which norm to test

    Returns:
        SpinGlassResult. Non-finite values and the cap are flagged, not raised.
    """
    w = np.array(w0, dtype=np.float64, copy=True)
    if w.shape != (x.n,):
        raise ValueError(f"w0 has shape {w.shape}, expected ({x.n},)")
    radius = np.sqrt(x.n)
    if abs(np.linalg.norm(w) - radius) > SPHERE_RTOL * radius:
        raise ValueError(f"w0 must lie on the sphere of radius sqrt({x.n})")

    energy, grad = energy_and_gradient(x, w)
    grad_norm = _stopping_norm(grad, w, cfg.gradient_norm)
    history = [energy] if cfg.record_history else None
    error = None
    t = 0

    while grad_norm >= cfg.eps and t < cfg.max_iter:
        w = w - cfg.eta * grad
        w *= radius / np.linalg.norm(w)
        energy, grad = energy_and_gradient(x, w)
        t += 1

        if not (np.isfinite(energy) and np.all(np.isfinite(grad))):
            error = "non_finite"
            grad_norm = float("nan")
            break

        grad_norm = _stopping_norm(grad, w, cfg.gradient_norm)
        if cfg.record_history:
            history.append(energy)

    converged = error is None and grad_norm < cfg.eps
    if error is None and not converged:
        error = "max_iter"
    if error is not None:
        logger.debug(f"Gradient descent stopped at t={t} without convergence: {error}")

    return SpinGlassResult(
        halting_time=t,
        final_energy=energy,
        final_energy_per_spin=energy / x.n,
        final_gradient_norm=grad_norm,
        converged=converged,
        final_point=w,
        energy_history=history,
        error=error,
    )
