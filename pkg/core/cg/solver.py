"""Conjugate gradient with halting-time instrumentation.

The iteration is the textbook three-step recurrence started from x0 = b:

    r_k = r_{k-1} - a_{k-1} A p_{k-1},   a_{k-1} = <r_{k-1}, r_{k-1}> / <p_{k-1}, A p_{k-1}>
    p_k = r_k + b_{k-1} p_{k-1},         b_{k-1} = <r_k, r_k> / <r_{k-1}, r_{k-1}>
    x_k = x_{k-1} + a_{k-1} p_{k-1}

and the halting time is T = min{k : ||r_k|| < eps}, measured on the
recursively updated residual. No clamping at k = n: in floating point the
iteration routinely needs more than n steps.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from ..storage.models import CgConfig

logger = logging.getLogger(__name__)

ORACLE_MAX_DIM = 64


@dataclass
class CgResult:
    """Outcome of one conjugate gradient run."""
    halting_time: int
    recursive_residual_norm: float
    true_residual_norm: float
    converged: bool
    solution: np.ndarray
    residual_history: Optional[list[float]] = None
    true_residual_history: Optional[list[float]] = None
    error: Optional[str] = None  # "non_finite", "indefinite" or "max_iter"


def _check_system(a: np.ndarray, b: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"A must be square, got shape {a.shape}")
    if b.shape != (a.shape[0],):
        raise ValueError(f"b has shape {b.shape}, expected ({a.shape[0]},)")


def cg_halting_time(
    a: np.ndarray,
    b: np.ndarray,
    cfg: CgConfig,
    x0: Optional[np.ndarray] = None,
) -> CgResult:
    """
    Run conjugate gradient on Ax = b and report the halting time.

    Args:
        a: Hermitian positive definite matrix (real or complex)
        b: Right-hand side
        cfg: Threshold eps, iteration cap and history switch
        x0: Initial guess; defaults to b

    Returns:
        CgResult. Numerical breakdowns are flagged through `error`, not raised.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    _check_system(a, b)

    dtype = np.result_type(a.dtype, b.dtype, np.float64)
    x = np.array(b if x0 is None else x0, dtype=dtype, copy=True)
    if x.shape != b.shape:
        raise ValueError(f"x0 has shape {x.shape}, expected {b.shape}")

    r = b.astype(dtype) - a @ x
    p = r.copy()
    rr = float(np.vdot(r, r).real)
    norm = np.sqrt(rr)

    history = [norm] if cfg.record_history else None
    true_history = [norm] if cfg.record_history else None
    error = None
    k = 0

    while norm >= cfg.eps and k < cfg.max_iter:
        ap = a @ p
        pap = float(np.vdot(p, ap).real)
        if not np.isfinite(pap):
            error = "non_finite"
            break
        if pap <= 0.0:
            error = "indefinite"
            break

        step = rr / pap
        r = r - step * ap
        x = x + step * p
        rr_next = float(np.vdot(r, r).real)
        k += 1
        if not np.isfinite(rr_next):
            error = "non_finite"
            norm = float("nan")
            break

        p = r + (rr_next / rr) * p
        rr = rr_next
        norm = np.sqrt(rr)

        if cfg.record_history:
            history.append(norm)
            true_history.append(float(np.linalg.norm(b - a @ x)))

    converged = error is None and norm < cfg.eps
    if error is None and not converged:
        error = "max_iter"
    if error is not None:
        logger.debug(f"CG stopped at k={k} without convergence: {error}")

    return CgResult(
        halting_time=k,
        recursive_residual_norm=float(norm),
        true_residual_norm=float(np.linalg.norm(b - a @ x)),
        converged=converged,
        solution=x,
        residual_history=history,
        true_residual_history=true_history,
        error=error,
    )


def direct_solve_oracle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Solve Ax = b by Cholesky factorization (test oracle for small systems).

    Args:
        a: Hermitian positive definite matrix, n <= 64
        b: Right-hand side

    Returns:
        The solution A^{-1} b
    """
    a = np.asarray(a)
    b = np.asarray(b)
    _check_system(a, b)
    if a.shape[0] > ORACLE_MAX_DIM:
        raise ValueError(f"Oracle limited to n <= {ORACLE_MAX_DIM}, got {a.shape[0]}")

    if np.linalg.cond(a) * np.finfo(np.float64).eps >= 1.0:
        raise np.linalg.LinAlgError("Matrix is singular to working precision")

    factor = scipy.linalg.cho_factor(a)
    return scipy.linalg.cho_solve(factor, b)
