"""Fully connected ReLU network with softmax cross-entropy cost."""

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp, softmax

from ..storage.models import MlpArchitecture
from .mnist import MnistDataset


@dataclass
class MlpParams:
    """Per-layer weights (fan_in x fan_out) and biases."""
    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def flatten(self) -> np.ndarray:
        """All parameters as one vector, layer by layer, weights before biases."""
        parts = []
        for w, b in zip(self.weights, self.biases):
            parts.append(w.ravel())
            parts.append(b.ravel())
        return np.concatenate(parts)

    def unflatten(self, vector: np.ndarray) -> "MlpParams":
        """Parameters with this object's shapes, filled from `vector`."""
        weights, biases = [], []
        offset = 0
        for w, b in zip(self.weights, self.biases):
            weights.append(vector[offset:offset + w.size].reshape(w.shape).copy())
            offset += w.size
            biases.append(vector[offset:offset + b.size].reshape(b.shape).copy())
            offset += b.size
        if offset != vector.size:
            raise ValueError(f"Vector has {vector.size} entries, expected {offset}")
        return MlpParams(weights=weights, biases=biases)

    def norm(self) -> float:
        return float(np.sqrt(sum(np.sum(w * w) + np.sum(b * b) for w, b in zip(self.weights, self.biases))))

    def axpy(self, alpha: float, other: "MlpParams") -> None:
        """In place: self += alpha * other."""
        for w, b, dw, db in zip(self.weights, self.biases, other.weights, other.biases):
            w += alpha * dw
            b += alpha * db

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(w)) and np.all(np.isfinite(b)) for w, b in zip(self.weights, self.biases))


def init_params(arch: MlpArchitecture, rng: np.random.Generator) -> MlpParams:
    """
    Gaussian weights scaled by 1/sqrt(fan_in), zero biases.

    Args:
        arch: Layer sizes
        rng: Random stream

    Returns:
        Freshly initialized parameters
    """
    weights, biases = [], []
    for fan_in, fan_out in zip(arch.layer_sizes[:-1], arch.layer_sizes[1:]):
        weights.append(rng.standard_normal((fan_in, fan_out)) / np.sqrt(fan_in))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights=weights, biases=biases)


def _check_batch(params: MlpParams, images: np.ndarray, labels: np.ndarray) -> None:
    if images.ndim != 2 or images.shape[0] == 0:
        raise ValueError(f"Batch must be a nonempty 2-D array, got shape {images.shape}")
    if images.shape[1] != params.weights[0].shape[0]:
        raise ValueError(
            f"Inputs have {images.shape[1]} features, network expects {params.weights[0].shape[0]}"
        )
    if labels.shape != (images.shape[0],):
        raise ValueError(f"labels have shape {labels.shape}, expected ({images.shape[0]},)")
    n_classes = params.weights[-1].shape[1]
    if labels.min() < 0 or labels.max() >= n_classes:
        raise ValueError(f"Labels must lie in 0..{n_classes - 1}")


def _forward(params: MlpParams, images: np.ndarray) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Return (layer inputs, pre-activations); the last pre-activation is the logits."""
    inputs, pre = [], []
    a = images
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        inputs.append(a)
        z = a @ w + b
        pre.append(z)
        if i < last:
            a = np.maximum(z, 0.0)
    return inputs, pre


def _cross_entropy(logits: np.ndarray, labels: np.ndarray) -> float:
    rows = np.arange(labels.shape[0])
    return float(np.mean(logsumexp(logits, axis=1) - logits[rows, labels]))


def forward_cost(params: MlpParams, images: np.ndarray, labels: np.ndarray) -> float:
    """
    Mean cross-entropy -log softmax(logits)[label] over the batch.

    Args:
        params: Network parameters
        images: Batch inputs (B, features)
        labels: Integer labels (B,)

    Returns:
        Batch cost
    """
    images = np.asarray(images, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    _check_batch(params, images, labels)
    _, pre = _forward(params, images)
    return _cross_entropy(pre[-1], labels)


def cost_and_gradient(
    params: MlpParams,
    images: np.ndarray,
    labels: np.ndarray,
) -> tuple[float, MlpParams]:
    """
    Batch cost and its exact gradient by backpropagation.

    The ReLU subgradient at 0 is taken as 0.

    Args:
        params: Network parameters
        images: Batch inputs (B, features)
        labels: Integer labels (B,)

    Returns:
        Tuple of (cost, gradient with the shapes of params)
    """
    images = np.asarray(images, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    _check_batch(params, images, labels)

    inputs, pre = _forward(params, images)
    logits = pre[-1]
    batch = labels.shape[0]
    cost = _cross_entropy(logits, labels)

    dz = softmax(logits, axis=1)
    dz[np.arange(batch), labels] -= 1.0
    dz /= batch

    n_layers = len(params.weights)
    grad_w: list[np.ndarray] = [None] * n_layers
    grad_b: list[np.ndarray] = [None] * n_layers
    for i in range(n_layers - 1, -1, -1):
        grad_w[i] = inputs[i].T @ dz
        grad_b[i] = dz.sum(axis=0)
        if i > 0:
            dz = (dz @ params.weights[i].T) * (pre[i - 1] > 0.0)

    return cost, MlpParams(weights=grad_w, biases=grad_b)


def backward(params: MlpParams, images: np.ndarray, labels: np.ndarray) -> MlpParams:
    """Gradient of forward_cost with respect to every weight and bias."""
    return cost_and_gradient(params, images, labels)[1]


def predict(params: MlpParams, images: np.ndarray) -> np.ndarray:
    """Argmax-logit class for each row."""
    _, pre = _forward(params, np.asarray(images, dtype=np.float64))
    return np.argmax(pre[-1], axis=1)


def accuracy(params: MlpParams, dataset: MnistDataset) -> float:
    """
    Fraction of argmax-logit predictions equal to the labels.

    Args:
        params: Network parameters
        dataset: Nonempty dataset

    Returns:
        Accuracy in [0, 1]
    """
    if len(dataset) == 0:
        raise ValueError("Cannot evaluate accuracy on an empty dataset")
    return float(np.mean(predict(params, dataset.images) == dataset.labels))
