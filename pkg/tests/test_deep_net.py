"""Tests for MNIST ingestion, the ReLU network and SGD halting."""

import gzip
import math
import struct

import numpy as np
import pytest

from core.deep_net import (
    CostDiffMonitor,
    IDXFormatError,
    MlpParams,
    MnistDataset,
    accuracy,
    backward,
    complement,
    cost_and_gradient,
    forward_cost,
    init_params,
    load_mnist_idx,
    make_noise_inputs,
    predict,
    sgd_train_halting,
    subsample,
)
from core.storage.models import DataSource, MlpArchitecture, StoppingKind, StoppingRule
from tests.conftest import write_idx_images, write_idx_labels


def _random_params(sizes: list[int], rng: np.random.Generator) -> MlpParams:
    params = init_params(MlpArchitecture(layer_sizes=sizes), rng)
    for b in params.biases:
        b += 0.1 * rng.standard_normal(b.shape)
    return params


def _scalar_cost(params: MlpParams, images: np.ndarray, labels: np.ndarray) -> float:
    """Loop-by-loop forward pass."""
    total = 0.0
    for x, label in zip(images, labels):
        activation = list(x)
        n_layers = len(params.weights)
        for layer, (w, b) in enumerate(zip(params.weights, params.biases)):
            out = []
            for j in range(w.shape[1]):
                z = b[j] + sum(activation[i] * w[i, j] for i in range(w.shape[0]))
                out.append(z if layer == n_layers - 1 else max(z, 0.0))
            activation = out
        top = max(activation)
        log_norm = top + math.log(sum(math.exp(z - top) for z in activation))
        total += log_norm - activation[label]
    return total / len(labels)


def _blobs(count: int, rng: np.random.Generator) -> MnistDataset:
    labels = np.arange(count) % 2
    centers = np.where(labels[:, None] == 0, -2.0, 2.0)
    images = centers + 0.5 * rng.standard_normal((count, 2))
    return MnistDataset(images=images, labels=labels, source=DataSource.SYNTHETIC)


# =============================================================================
# IDX
# =============================================================================

class TestLoadMnistIdx:
    def test_reads_pixels_and_labels(self, tmp_path):
        pixels = np.array([[0, 255, 51, 102], [255, 0, 0, 0], [1, 2, 3, 4]], dtype=np.uint8)
        images = write_idx_images(tmp_path / "img", pixels, 2, 2)
        labels = write_idx_labels(tmp_path / "lbl", np.array([7, 0, 9]))
        dataset = load_mnist_idx(images, labels)
        assert len(dataset) == 3
        assert dataset.images.shape == (3, 4)
        np.testing.assert_allclose(dataset.images[0], [0.0, 1.0, 0.2, 0.4])
        np.testing.assert_array_equal(dataset.labels, [7, 0, 9])
        assert dataset.source == DataSource.IDX_FILES

    def test_header_bytes(self, tmp_path):
        images = write_idx_images(tmp_path / "img", np.zeros((1, 4)), 2, 2)
        labels = write_idx_labels(tmp_path / "lbl", np.array([1]))
        assert images.read_bytes()[:4] == bytes([0x00, 0x00, 0x08, 0x03])
        assert labels.read_bytes()[:4] == bytes([0x00, 0x00, 0x08, 0x01])

    def test_gzip(self, tmp_path):
        images = write_idx_images(tmp_path / "img", np.full((2, 4), 255), 2, 2)
        labels = write_idx_labels(tmp_path / "lbl", np.array([3, 4]))
        gz_images = tmp_path / "img.gz"
        gz_images.write_bytes(gzip.compress(images.read_bytes()))
        dataset = load_mnist_idx(gz_images, labels)
        np.testing.assert_array_equal(dataset.images, np.ones((2, 4)))

    def test_bad_magic(self, tmp_path):
        labels = write_idx_labels(tmp_path / "lbl", np.array([1]))
        with pytest.raises(IDXFormatError):
            load_mnist_idx(labels, labels)

    def test_truncated_pixels(self, tmp_path):
        path = tmp_path / "img"
        path.write_bytes(struct.pack(">IIII", 0x803, 2, 2, 2) + bytes(5))
        labels = write_idx_labels(tmp_path / "lbl", np.array([1, 2]))
        with pytest.raises(IDXFormatError) as exc_info:
            load_mnist_idx(path, labels)
        assert exc_info.value.path == str(path)

    def test_truncated_header(self, tmp_path):
        path = tmp_path / "img"
        path.write_bytes(b"\x00\x00\x08")
        labels = write_idx_labels(tmp_path / "lbl", np.array([1]))
        with pytest.raises(IDXFormatError):
            load_mnist_idx(path, labels)

    def test_count_mismatch(self, tmp_path):
        images = write_idx_images(tmp_path / "img", np.zeros((3, 4)), 2, 2)
        labels = write_idx_labels(tmp_path / "lbl", np.array([1, 2]))
        with pytest.raises(IDXFormatError):
            load_mnist_idx(images, labels)

    def test_label_out_of_range(self, tmp_path):
        images = write_idx_images(tmp_path / "img", np.zeros((1, 4)), 2, 2)
        labels = write_idx_labels(tmp_path / "lbl", np.array([12]))
        with pytest.raises(IDXFormatError):
            load_mnist_idx(images, labels)


class TestMnistDataset:
    def test_pixel_range_enforced_for_idx(self):
        with pytest.raises(ValueError):
            MnistDataset(images=np.full((1, 4), 2.0), labels=np.array([0]))

    def test_noise_has_no_pixel_range(self):
        MnistDataset(images=np.full((1, 4), -3.0), labels=np.array([0]), source=DataSource.GAUSSIAN_NOISE)

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            MnistDataset(images=np.zeros((2, 4)), labels=np.array([0]))


class TestSubsample:
    def test_full_size_is_permutation(self, idx_files):
        dataset = load_mnist_idx(idx_files["train_images"], idx_files["train_labels"])
        drawn = subsample(dataset, len(dataset), np.random.default_rng(0))
        np.testing.assert_array_equal(np.sort(drawn.origin_indices), np.arange(len(dataset)))

    def test_single_item(self, idx_files):
        dataset = load_mnist_idx(idx_files["train_images"], idx_files["train_labels"])
        drawn = subsample(dataset, 1, np.random.default_rng(1))
        index = drawn.origin_indices[0]
        np.testing.assert_array_equal(drawn.images[0], dataset.images[index])
        assert drawn.labels[0] == dataset.labels[index]

    def test_distinct_indices(self, idx_files):
        dataset = load_mnist_idx(idx_files["train_images"], idx_files["train_labels"])
        drawn = subsample(dataset, 300, np.random.default_rng(2))
        assert len(np.unique(drawn.origin_indices)) == 300

    def test_too_large(self, idx_files):
        dataset = load_mnist_idx(idx_files["train_images"], idx_files["train_labels"])
        with pytest.raises(ValueError):
            subsample(dataset, len(dataset) + 1, np.random.default_rng(0))

    def test_complement_is_disjoint(self, idx_files):
        dataset = load_mnist_idx(idx_files["train_images"], idx_files["train_labels"])
        drawn = subsample(dataset, 400, np.random.default_rng(3))
        rest = complement(dataset, drawn)
        assert len(rest) == 200
        assert not set(rest.origin_indices) & set(drawn.origin_indices)
        assert len(complement(dataset, drawn, limit=50)) == 50


class TestMakeNoiseInputs:
    def test_labels_kept_images_replaced(self, idx_files):
        dataset = load_mnist_idx(idx_files["train_images"], idx_files["train_labels"])
        noise = make_noise_inputs(dataset, np.random.default_rng(0))
        np.testing.assert_array_equal(noise.labels, dataset.labels)
        assert noise.source == DataSource.GAUSSIAN_NOISE
        assert noise.images.shape == dataset.images.shape
        assert noise.images.min() < 0.0
        assert abs(noise.images.std() - 1.0) < 0.05

    def test_empty_rejected(self):
        empty = MnistDataset(images=np.zeros((0, 4)), labels=np.zeros(0, dtype=int))
        with pytest.raises(ValueError):
            make_noise_inputs(empty, np.random.default_rng(0))


# =============================================================================
# NETWORK
# =============================================================================

class TestInitParams:
    def test_zero_biases(self):
        params = init_params(MlpArchitecture(layer_sizes=[784, 50, 30, 10]), np.random.default_rng(0))
        assert all(np.all(b == 0.0) for b in params.biases)
        assert [w.shape for w in params.weights] == [(784, 50), (50, 30), (30, 10)]

    def test_weight_scale(self):
        params = init_params(MlpArchitecture(layer_sizes=[784, 50, 10]), np.random.default_rng(1))
        assert params.weights[0].var() == pytest.approx(1.0 / 784, rel=0.05)

    def test_streams_differ(self):
        arch = MlpArchitecture(layer_sizes=[4, 3, 2])
        a = init_params(arch, np.random.default_rng(1))
        b = init_params(arch, np.random.default_rng(2))
        assert not np.array_equal(a.flatten(), b.flatten())


class TestForwardCost:
    def test_uniform_logits(self):
        params = init_params(MlpArchitecture(layer_sizes=[6, 5, 10]), np.random.default_rng(0))
        params = params.unflatten(np.zeros_like(params.flatten()))
        images = np.random.default_rng(1).standard_normal((4, 6))
        assert forward_cost(params, images, np.array([0, 3, 5, 9])) == pytest.approx(math.log(10), rel=1e-14)

    def test_matches_scalar_loops(self):
        rng = np.random.default_rng(2)
        params = _random_params([4, 3, 2], rng)
        images = rng.standard_normal((5, 4))
        labels = np.array([0, 1, 1, 0, 1])
        assert forward_cost(params, images, labels) == pytest.approx(_scalar_cost(params, images, labels), rel=1e-12)

    def test_nonnegative(self):
        rng = np.random.default_rng(3)
        params = _random_params([5, 4, 3], rng)
        assert forward_cost(params, rng.standard_normal((8, 5)), rng.integers(0, 3, 8)) >= 0.0

    def test_shape_mismatch(self):
        params = init_params(MlpArchitecture(layer_sizes=[4, 3, 2]), np.random.default_rng(0))
        with pytest.raises(ValueError):
            forward_cost(params, np.zeros((2, 5)), np.array([0, 1]))
        with pytest.raises(ValueError):
            forward_cost(params, np.zeros((2, 4)), np.array([0]))


class TestBackward:
    def test_matches_finite_differences(self):
        rng = np.random.default_rng(4)
        h = 1e-6
        for trial in range(20):
            sizes = [int(s) for s in rng.integers(2, 7, size=int(rng.integers(2, 5)))]
            params = _random_params(sizes, rng)
            batch = int(rng.integers(1, 8))
            images = rng.standard_normal((batch, sizes[0]))
            labels = rng.integers(0, sizes[-1], size=batch)

            grad = backward(params, images, labels).flatten()
            theta = params.flatten()
            fd = np.empty_like(theta)
            for i in range(theta.size):
                up, down = theta.copy(), theta.copy()
                up[i] += h
                down[i] -= h
                fd[i] = (forward_cost(params.unflatten(up), images, labels)
                         - forward_cost(params.unflatten(down), images, labels)) / (2.0 * h)

            assert np.linalg.norm(grad - fd) <= 1e-6 * max(np.linalg.norm(grad), 1e-8)
            assert np.all(np.abs(grad - fd) <= 1e-5 * np.maximum(np.abs(grad), 1e-3))

    def test_softmax_minus_onehot(self):
        # Zero parameters on a [2, 2] net, one sample with label 1
        params = MlpParams(weights=[np.zeros((2, 2))], biases=[np.zeros(2)])
        x = np.array([[0.5, -1.5]])
        grad = backward(params, x, np.array([1]))
        delta = np.array([0.5, -0.5])
        np.testing.assert_allclose(grad.weights[0], np.outer(x[0], delta), rtol=1e-14)
        np.testing.assert_allclose(grad.biases[0], delta, rtol=1e-14)

    def test_zero_input_zero_first_layer_gradient(self):
        rng = np.random.default_rng(5)
        params = _random_params([4, 3, 2], rng)
        grad = backward(params, np.zeros((3, 4)), np.array([0, 1, 0]))
        np.testing.assert_array_equal(grad.weights[0], np.zeros((4, 3)))

    def test_cost_matches_forward(self):
        rng = np.random.default_rng(6)
        params = _random_params([3, 4, 2], rng)
        images, labels = rng.standard_normal((6, 3)), rng.integers(0, 2, 6)
        cost, _ = cost_and_gradient(params, images, labels)
        assert cost == forward_cost(params, images, labels)


class TestAccuracy:
    def test_perfect_predictor(self):
        # Identity network on one-hot inputs
        labels = np.arange(10)
        dataset = MnistDataset(images=np.eye(10), labels=labels)
        params = MlpParams(weights=[np.eye(10)], biases=[np.zeros(10)])
        assert accuracy(params, dataset) == 1.0

    def test_constant_predictor(self):
        labels = np.arange(100) % 10
        dataset = MnistDataset(images=np.zeros((100, 4)), labels=labels)
        bias = np.zeros(10)
        bias[3] = 1.0
        params = MlpParams(weights=[np.zeros((4, 10))], biases=[bias])
        np.testing.assert_array_equal(predict(params, dataset.images), np.full(100, 3))
        assert accuracy(params, dataset) == pytest.approx(0.1)


# =============================================================================
# TRAINING
# =============================================================================

class TestCostDiffMonitor:
    def test_window(self):
        monitor = CostDiffMonitor(3)
        assert monitor.update(1.0) is None
        assert monitor.update(2.0) is None
        assert monitor.update(4.0) == pytest.approx(1.5)
        assert monitor.update(4.0) == pytest.approx(1.0)

    def test_rejects_short_window(self):
        with pytest.raises(ValueError):
            CostDiffMonitor(1)


class TestSgdTrainHalting:
    def test_infinite_threshold_halts_when_window_fills(self):
        rng = np.random.default_rng(0)
        dataset = _blobs(100, rng)
        stop = StoppingRule(threshold=float("inf"), window=25)
        result = sgd_train_halting(MlpArchitecture(layer_sizes=[2, 8, 2]), dataset, batch_size=10,
                                   lr=0.1, stop=stop, cap=1000, rng=rng)
        assert result.halting_time == 25
        assert result.converged

    def test_separable_blobs_reach_full_accuracy(self):
        rng = np.random.default_rng(1)
        dataset = _blobs(200, rng)
        stop = StoppingRule(threshold=1e-12, window=25)
        result = sgd_train_halting(MlpArchitecture(layer_sizes=[2, 8, 2]), dataset, batch_size=20,
                                   lr=0.1, stop=stop, cap=2000, rng=rng)
        assert result.train_accuracy == 1.0
        assert result.halting_time <= 2000

    def test_cap_flagged(self):
        rng = np.random.default_rng(2)
        dataset = _blobs(50, rng)
        stop = StoppingRule(threshold=1e-15, window=2)
        result = sgd_train_halting(MlpArchitecture(layer_sizes=[2, 4, 2]), dataset, batch_size=10,
                                   lr=0.01, stop=stop, cap=5, rng=rng)
        assert result.halting_time == 5
        assert not result.converged
        assert result.error == "max_iter"

    def test_grad_norm_rule(self):
        rng = np.random.default_rng(3)
        dataset = _blobs(50, rng)
        stop = StoppingRule(kind=StoppingKind.GRAD_NORM, threshold=1e9)
        result = sgd_train_halting(MlpArchitecture(layer_sizes=[2, 4, 2]), dataset, batch_size=10,
                                   lr=0.1, stop=stop, cap=100, rng=rng)
        assert result.halting_time == 1
        assert result.converged

    def test_full_cost_source(self):
        rng = np.random.default_rng(4)
        dataset = _blobs(60, rng)
        stop = StoppingRule(threshold=float("inf"), window=5, cost_source="full")
        result = sgd_train_halting(MlpArchitecture(layer_sizes=[2, 4, 2]), dataset, batch_size=10,
                                   lr=0.1, stop=stop, cap=100, rng=rng, record_history=True)
        assert result.halting_time == 5
        assert len(result.cost_history) == 5

    def test_non_finite_flagged(self):
        rng = np.random.default_rng(5)
        dataset = _blobs(40, rng)
        stop = StoppingRule(threshold=1e-12, window=5)
        result = sgd_train_halting(MlpArchitecture(layer_sizes=[2, 4, 2]), dataset, batch_size=10,
                                   lr=float("inf"), stop=stop, cap=100, rng=rng)
        assert not result.converged
        assert result.error == "non_finite"

    def test_deterministic(self):
        dataset = _blobs(80, np.random.default_rng(6))
        arch = MlpArchitecture(layer_sizes=[2, 4, 2])
        stop = StoppingRule(threshold=0.01, window=10)
        first = sgd_train_halting(arch, dataset, 10, 0.1, stop, 500, np.random.default_rng(7))
        second = sgd_train_halting(arch, dataset, 10, 0.1, stop, 500, np.random.default_rng(7))
        assert first.halting_time == second.halting_time
        np.testing.assert_array_equal(first.params.flatten(), second.params.flatten())

    def test_batch_larger_than_dataset(self):
        dataset = _blobs(5, np.random.default_rng(0))
        with pytest.raises(ValueError):
            sgd_train_halting(MlpArchitecture(layer_sizes=[2, 4, 2]), dataset, 10, 0.1,
                              StoppingRule(threshold=0.1), 10, np.random.default_rng(0))
