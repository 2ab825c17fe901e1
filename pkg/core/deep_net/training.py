"""Minibatch SGD with halting rules."""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..storage.models import MlpArchitecture, StoppingRule, StoppingKind, CostSource
from .mnist import MnistDataset
from .network import MlpParams, init_params, cost_and_gradient, forward_cost, accuracy

logger = logging.getLogger(__name__)


@dataclass
class TrainResult:
    """Outcome of one training run."""
    halting_time: int
    final_train_cost: float
    train_accuracy: float
    converged: bool
    params: MlpParams
    final_gradient_norm: float = float("nan")
    cost_history: Optional[list[float]] = None
    error: Optional[str] = None  # "non_finite" or "max_iter"


class CostDiffMonitor:
    """Mean of |c_t - c_{t-1}| over the trailing `window` costs."""

    def __init__(self, window: int):
        if window < 2:
            raise ValueError(f"window must be at least 2, got {window}")
        self.window = window
        self._costs: deque[float] = deque(maxlen=window)

    def update(self, cost: float) -> Optional[float]:
        """
        Record a cost.

        Returns:
            The windowed mean absolute difference, or None until the window is full
        """
        self._costs.append(cost)
        if len(self._costs) < self.window:
            return None
        costs = np.fromiter(self._costs, dtype=np.float64)
        return float(np.mean(np.abs(np.diff(costs))))


def sgd_train_halting(
    arch: MlpArchitecture,
    dataset: MnistDataset,
    batch_size: int,
    lr: float,
    stop: StoppingRule,
    cap: int,
    rng: np.random.Generator,
    record_history: bool = False,
    params: Optional[MlpParams] = None,
) -> TrainResult:
    """
    Train by minibatch SGD until the stopping rule fires.

    Each epoch reshuffles the data; trailing items that do not fill a batch
    wait for the next epoch. After every iteration the rule is evaluated:
    AvgCostDiff on the windowed costs, GradNorm on the minibatch gradient.

    Args:
        arch: Network architecture
        dataset: Training set with at least batch_size items
        batch_size: Minibatch size
        lr: Constant learning rate
        stop: Stopping rule
        cap: Maximum number of iterations
        rng: Random stream (initialization and shuffling)
        record_history: Keep every monitored cost
        params: Starting parameters; drawn with init_params when omitted

    Returns:
        TrainResult; the cap and non-finite costs are flagged, not raised
    """
    if len(dataset) < batch_size:
        raise ValueError(f"Dataset of {len(dataset)} items is smaller than batch_size={batch_size}")
    if dataset.images.shape[1] != arch.layer_sizes[0]:
        raise ValueError(
            f"Inputs have {dataset.images.shape[1]} features, architecture expects {arch.layer_sizes[0]}"
        )

    if params is None:
        params = init_params(arch, rng)
    monitor = CostDiffMonitor(stop.window) if stop.kind == StoppingKind.AVG_COST_DIFF else None
    history = [] if record_history else None
    n_batches = len(dataset) // batch_size

    iteration = 0
    cost = float("nan")
    grad_norm = float("nan")
    error = None
    halted = False

    while not halted and iteration < cap:
        order = rng.permutation(len(dataset))
        for start in range(0, n_batches * batch_size, batch_size):
            idx = order[start:start + batch_size]
            cost, grad = cost_and_gradient(params, dataset.images[idx], dataset.labels[idx])
            params.axpy(-lr, grad)
            iteration += 1

            if not np.isfinite(cost) or not params.is_finite():
                error = "non_finite"
                halted = True
                break

            grad_norm = grad.norm()
            if monitor is not None:
                monitored = cost
                if stop.cost_source == CostSource.FULL:
                    monitored = forward_cost(params, dataset.images, dataset.labels)
                if history is not None:
                    history.append(monitored)
                statistic = monitor.update(monitored)
                halted = statistic is not None and statistic < stop.threshold
            else:
                if history is not None:
                    history.append(cost)
                halted = grad_norm < stop.threshold

            if halted or iteration >= cap:
                break

    converged = halted and error is None
    if error is None and not converged:
        error = "max_iter"
        logger.debug(f"SGD reached the cap of {cap} iterations")

    final_cost = forward_cost(params, dataset.images, dataset.labels) if params.is_finite() else float("nan")
    train_acc = accuracy(params, dataset) if params.is_finite() else 0.0

    return TrainResult(
        halting_time=iteration,
        final_train_cost=final_cost,
        train_accuracy=train_acc,
        converged=converged,
        params=params,
        final_gradient_norm=grad_norm,
        cost_history=history,
        error=error,
    )
