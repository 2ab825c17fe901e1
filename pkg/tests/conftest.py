"""Shared fixtures: isolated settings and tiny IDX datasets built on the fly."""

import struct
from pathlib import Path

import numpy as np
import pytest

from config.settings import get_settings

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    """Fresh settings per test, writing under tmp_path and without progress bars."""
    for name in ("HALTING_THREADS", "HALTING_MNIST_DIR", "HALTING_RECORD_WALL_TIME",
                 "HALTING_MAX_FLAGGED_FRACTION", "DEBUG"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("HALTING_OUTPUT_DIR", str(tmp_path / "results"))
    get_settings.cache_clear()
    get_settings().harness.show_progress = False
    yield get_settings()
    get_settings.cache_clear()


def write_idx_images(path: Path, pixels: np.ndarray, rows: int, cols: int) -> Path:
    """Write uint8 pixels of shape (count, rows*cols) as an IDX image file."""
    pixels = np.asarray(pixels, dtype=np.uint8)
    header = struct.pack(">IIII", IMAGE_MAGIC, pixels.shape[0], rows, cols)
    path.write_bytes(header + pixels.tobytes())
    return path


def write_idx_labels(path: Path, labels: np.ndarray) -> Path:
    """Write uint8 labels as an IDX label file."""
    labels = np.asarray(labels, dtype=np.uint8)
    header = struct.pack(">II", LABEL_MAGIC, labels.shape[0])
    path.write_bytes(header + labels.tobytes())
    return path


def make_digit_pixels(labels: np.ndarray, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Learnable stand-in for digits: class k lights up pixel block k over faint noise."""
    features = rows * cols
    pixels = rng.integers(0, 40, size=(labels.shape[0], features))
    block = features // 10
    for i, label in enumerate(labels):
        pixels[i, label * block:(label + 1) * block] = 255
    return pixels.astype(np.uint8)


@pytest.fixture
def idx_files(tmp_path):
    """A 4x4-pixel, 10-class IDX train/test pair (600 train, 200 test items)."""
    rng = np.random.default_rng(7)
    rows = cols = 4
    train_labels = np.arange(600) % 10
    test_labels = np.arange(200) % 10
    directory = tmp_path / "mnist"
    directory.mkdir()
    paths = {
        "train_images": write_idx_images(directory / "train-images-idx3-ubyte",
                                         make_digit_pixels(train_labels, rows, cols, rng), rows, cols),
        "train_labels": write_idx_labels(directory / "train-labels-idx1-ubyte", train_labels),
        "test_images": write_idx_images(directory / "t10k-images-idx3-ubyte",
                                        make_digit_pixels(test_labels, rows, cols, rng), rows, cols),
        "test_labels": write_idx_labels(directory / "t10k-labels-idx1-ubyte", test_labels),
    }
    paths["dir"] = directory
    return paths
