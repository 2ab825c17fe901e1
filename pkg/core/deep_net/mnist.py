"""MNIST IDX reader and the input ensembles built from it.

IDX layout (big-endian):

    images: 0x00000803, count, rows, cols, then count*rows*cols unsigned bytes
    labels: 0x00000801, count, then count unsigned bytes
"""

import gzip
import logging
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..storage.models import DataSource

logger = logging.getLogger(__name__)

IMAGE_MAGIC = 0x00000803
LABEL_MAGIC = 0x00000801
N_DIGITS = 10


class IDXFormatError(ValueError):
    """Raised when an IDX file is malformed."""
    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Invalid IDX file {path}: {reason}")


@dataclass
class MnistDataset:
    """Flat images with integer labels."""
    images: np.ndarray  # (S, features)
    labels: np.ndarray  # (S,) integers
    source: DataSource = DataSource.IDX_FILES
    # Row indices into the dataset this one was drawn from
    origin_indices: Optional[np.ndarray] = None

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.images.ndim != 2:
            raise ValueError(f"images must be 2-D, got shape {self.images.shape}")
        if self.images.shape[0] != self.labels.shape[0]:
            raise ValueError(
                f"{self.images.shape[0]} images but {self.labels.shape[0]} labels"
            )
        if self.source == DataSource.IDX_FILES and self.images.size:
            if self.images.min() < 0.0 or self.images.max() > 1.0:
                raise ValueError("IDX pixels must lie in [0, 1]")

    def __len__(self) -> int:
        return self.labels.shape[0]

    def take(self, indices: np.ndarray) -> "MnistDataset":
        """Rows at the given indices, same source."""
        indices = np.asarray(indices, dtype=np.int64)
        return MnistDataset(
            images=self.images[indices],
            labels=self.labels[indices],
            source=self.source,
            origin_indices=indices,
        )


def _read_bytes(path: Path) -> bytes:
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as f:
            return f.read()
    return path.read_bytes()


def _parse_images(path: Path) -> np.ndarray:
    data = _read_bytes(path)
    if len(data) < 16:
        raise IDXFormatError(str(path), "truncated header")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IMAGE_MAGIC:
        raise IDXFormatError(str(path), f"bad magic number 0x{magic:08x}")
    expected = count * rows * cols
    if len(data) - 16 < expected:
        raise IDXFormatError(str(path), f"expected {expected} pixel bytes, found {len(data) - 16}")
    pixels = np.frombuffer(data, dtype=np.uint8, count=expected, offset=16)
    return pixels.reshape(count, rows * cols).astype(np.float64) / 255.0


def _parse_labels(path: Path) -> np.ndarray:
    data = _read_bytes(path)
    if len(data) < 8:
        raise IDXFormatError(str(path), "truncated header")
    magic, count = struct.unpack(">II", data[:8])
    if magic != LABEL_MAGIC:
        raise IDXFormatError(str(path), f"bad magic number 0x{magic:08x}")
    if len(data) - 8 < count:
        raise IDXFormatError(str(path), f"expected {count} labels, found {len(data) - 8}")
    labels = np.frombuffer(data, dtype=np.uint8, count=count, offset=8).astype(np.int64)
    if labels.size and labels.max() >= N_DIGITS:
        raise IDXFormatError(str(path), f"label {labels.max()} outside 0..9")
    return labels


def load_mnist_idx(images_path: str | Path, labels_path: str | Path) -> MnistDataset:
    """
    Load an MNIST image/label file pair (optionally gzipped).

    Args:
        images_path: Path to the idx3-ubyte image file
        labels_path: Path to the idx1-ubyte label file

    Returns:
        MnistDataset with pixels scaled to [0, 1]
    """
    images_path = Path(images_path)
    labels_path = Path(labels_path)

    images = _parse_images(images_path)
    labels = _parse_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise IDXFormatError(
            str(labels_path),
            f"{labels.shape[0]} labels for {images.shape[0]} images",
        )

    logger.info(f"Loaded {images.shape[0]} images of {images.shape[1]} pixels from {images_path.name}")
    return MnistDataset(images=images, labels=labels, source=DataSource.IDX_FILES)


def subsample(dataset: MnistDataset, s: int, rng: np.random.Generator) -> MnistDataset:
    """
    Choose s items uniformly without replacement.

    Args:
        dataset: Source dataset
        s: Number of items
        rng: Random stream

    Returns:
        New dataset whose origin_indices point into the source
    """
    if s < 1 or s > len(dataset):
        raise ValueError(f"Cannot draw {s} items from a dataset of {len(dataset)}")
    indices = rng.choice(len(dataset), size=s, replace=False)
    return dataset.take(indices)


def complement(dataset: MnistDataset, drawn: MnistDataset, limit: Optional[int] = None) -> MnistDataset:
    """Items of `dataset` not drawn into `drawn`, in source order, at most `limit` of them."""
    mask = np.ones(len(dataset), dtype=bool)
    if drawn.origin_indices is not None:
        mask[drawn.origin_indices] = False
    indices = np.flatnonzero(mask)
    if limit is not None:
        indices = indices[:limit]
    return dataset.take(indices)


def make_noise_inputs(dataset: MnistDataset, rng: np.random.Generator) -> MnistDataset:
    """
    Replace every image by iid standard Gaussian noise, keeping the labels.

    Args:
        dataset: Nonempty dataset
        rng: Random stream

    Returns:
        Dataset tagged as gaussian_noise
    """
    if len(dataset) == 0:
        raise ValueError("Cannot build noise inputs for an empty dataset")
    return MnistDataset(
        images=rng.standard_normal(dataset.images.shape),
        labels=dataset.labels.copy(),
        source=DataSource.GAUSSIAN_NOISE,
        origin_indices=dataset.origin_indices,
    )
