"""Loaders for the MNIST IDX and CIFAR-10 binary formats, plus target encoding.

Pixels are kept as raw 0-255 reals; all scaling is done by the preprocessing
steps. Labels are 0-based internally.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import BadMagic, BadRecordSize, LabelOutOfRange, ShapeMismatch, Truncated

IDX_IMAGE_MAGIC = 2051
IDX_LABEL_MAGIC = 2049
CIFAR_RECORD_SIZE = 3073  # 1 label byte + 3*1024 pixel bytes


@dataclass(frozen=True)
class LabeledDataset:
    """Row-major sample matrix with integer class labels in 0..num_classes-1."""

    samples: np.ndarray  # (N, M)
    labels: np.ndarray   # (N,)
    num_classes: int

    def __post_init__(self):
        if self.samples.ndim != 2 or self.samples.shape[0] < 1 or self.samples.shape[1] < 1:
            raise ValueError("samples must be a nonempty N x M matrix")
        if self.labels.shape != (self.samples.shape[0],):
            raise ValueError("labels length must match sample count")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples contain NaN/Inf")
        if self.labels.min() < 0 or self.labels.max() >= self.num_classes:
            raise LabelOutOfRange("label outside 0..K-1")

    @property
    def n(self):
        return self.samples.shape[0]

    @property
    def m(self):
        return self.samples.shape[1]


def load_idx_images(path):
    """Read an IDX image file; returns a (count, rows, cols) float64 array in [0, 255]."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 16:
        raise Truncated(f"{path}: IDX image header needs 16 bytes, got {len(data)}")
    magic, count, rows, cols = struct.unpack(">IIII", data[:16])
    if magic != IDX_IMAGE_MAGIC:
        raise BadMagic(f"{path}: expected magic {IDX_IMAGE_MAGIC}, got {magic}")
    need = 16 + count * rows * cols
    if len(data) < need:
        raise Truncated(f"{path}: header promises {need} bytes, file has {len(data)}")
    pixels = np.frombuffer(data, dtype=np.uint8, count=count * rows * cols, offset=16)
    return pixels.reshape(count, rows, cols).astype(np.float64)


def load_idx_labels(path):
    """Read an IDX label file; returns a length-N int array."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 8:
        raise Truncated(f"{path}: IDX label header needs 8 bytes, got {len(data)}")
    magic, count = struct.unpack(">II", data[:8])
    if magic != IDX_LABEL_MAGIC:
        raise BadMagic(f"{path}: expected magic {IDX_LABEL_MAGIC}, got {magic}")
    if len(data) < 8 + count:
        raise Truncated(f"{path}: header promises {8 + count} bytes, file has {len(data)}")
    return np.frombuffer(data, dtype=np.uint8, count=count, offset=8).astype(np.int64)


def load_mnist(images_path, labels_path):
    """Pair an IDX image file with its label file into a LabeledDataset (K=10)."""
    images = load_idx_images(images_path)
    labels = load_idx_labels(labels_path)
    if images.shape[0] != labels.shape[0]:
        raise ShapeMismatch(
            f"image/label count mismatch between {images_path} and {labels_path}"
        )
    samples = images.reshape(images.shape[0], -1)
    return LabeledDataset(samples, labels, num_classes=10)


def load_cifar10_batches(paths):
    """Load one or more CIFAR-10 binary batches, concatenated in argument order.

    Each 3073-byte record is <label u8, 1024 R bytes, 1024 G bytes, 1024 B bytes>;
    the three planes are kept channel-major in the 3072-long feature vector.
    """
    sample_parts = []
    label_parts = []
    for path in paths:
        with open(path, "rb") as f:
            data = f.read()
        if len(data) == 0 or len(data) % CIFAR_RECORD_SIZE != 0:
            raise BadRecordSize(
                f"{path}: length {len(data)} is not a positive multiple of {CIFAR_RECORD_SIZE}"
            )
        records = np.frombuffer(data, dtype=np.uint8).reshape(-1, CIFAR_RECORD_SIZE)
        labels = records[:, 0].astype(np.int64)
        if labels.max() >= 10:
            raise LabelOutOfRange(f"{path}: label byte {labels.max()} >= 10")
        sample_parts.append(records[:, 1:].astype(np.float64))
        label_parts.append(labels)
    return LabeledDataset(
        np.concatenate(sample_parts), np.concatenate(label_parts), num_classes=10
    )


def one_hot_targets(labels, num_classes):
    """Zero-bordered one-hot target matrix Z of shape (N+1, K).

    Row 0 is all zeros (the bias constraint border); row i+1 has a single 1
    at column labels[i].
    """
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise LabelOutOfRange(f"label outside 0..{num_classes - 1}")
    z = np.zeros((labels.shape[0] + 1, num_classes))
    z[np.arange(labels.shape[0]) + 1, labels] = 1.0
    return z
