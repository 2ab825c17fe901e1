"""Fully connected networks trained by minibatch SGD on MNIST or Gaussian noise."""

from .mnist import (
    N_DIGITS,
    MnistDataset,
    IDXFormatError,
    load_mnist_idx,
    subsample,
    make_noise_inputs,
    complement,
)
from .network import MlpParams, init_params, forward_cost, backward, cost_and_gradient, predict, accuracy
from .training import TrainResult, CostDiffMonitor, sgd_train_halting

__all__ = [
    "N_DIGITS",
    "MnistDataset",
    "IDXFormatError",
    "load_mnist_idx",
    "subsample",
    "make_noise_inputs",
    "complement",
    "MlpParams",
    "init_params",
    "forward_cost",
    "backward",
    "cost_and_gradient",
    "predict",
    "accuracy",
    "TrainResult",
    "CostDiffMonitor",
    "sgd_train_halting",
]
