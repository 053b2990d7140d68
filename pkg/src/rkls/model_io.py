"""Binary model persistence and delimited trace/report emission.

Model files are fixed-width little-endian: magic "RKLS", format version,
dimensions, kernel spec, preprocessing chain, the preprocessed training
support and the weight matrix. Round-tripping reproduces scores bit for bit.
"""

import json
import struct

import numpy as np

from .classifier import FORMAT_VERSION, Model
from .errors import BadMagic, Truncated, VersionMismatch
from .kernels import Gaussian, Polynomial
from .preprocess import GaussianFilter, PreprocessSpec, SpectralConcat, TwoStepNormalize

MAGIC = b"RKLS"

_KERNEL_TAGS = {Polynomial: 0, Gaussian: 1}
_STEP_TAGS = {GaussianFilter: 0, TwoStepNormalize: 1, SpectralConcat: 2}
_DTYPE_TAGS = {4: np.dtype("<f4"), 8: np.dtype("<f8")}


def serialize_model(model, path):
    n, m = model.train_samples.shape
    dtype = np.dtype(model.train_samples.dtype)
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<IIIII", FORMAT_VERSION, model.num_classes, n, m, model.raw_dim))
        f.write(struct.pack("<I", dtype.itemsize))
        if isinstance(model.kernel, Polynomial):
            f.write(struct.pack("<Id", 0, float(model.kernel.degree)))
        else:
            f.write(struct.pack("<Id", 1, model.kernel.sigma))
        f.write(struct.pack("<d", model.gamma))
        steps = model.preprocess.steps
        f.write(struct.pack("<I", len(steps)))
        for step in steps:
            tag = _STEP_TAGS[type(step)]
            c = step.c if isinstance(step, GaussianFilter) else 0.0
            side = step.side if isinstance(step, GaussianFilter) else 0
            f.write(struct.pack("<IdI", tag, c, side))
        f.write(np.ascontiguousarray(model.train_samples, dtype.newbyteorder("<")).tobytes())
        f.write(np.ascontiguousarray(model.weights.astype(dtype.newbyteorder("<"))).tobytes())


class _Reader:
    def __init__(self, data, path):
        self.data = data
        self.path = path
        self.pos = 0

    def take(self, count):
        if self.pos + count > len(self.data):
            raise Truncated(f"{self.path}: needed {self.pos + count} bytes, have {len(self.data)}")
        out = self.data[self.pos : self.pos + count]
        self.pos += count
        return out

    def unpack(self, fmt):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def deserialize_model(path):
    with open(path, "rb") as f:
        rd = _Reader(f.read(), path)
    if rd.take(4) != MAGIC:
        raise BadMagic(f"{path}: not a model file")
    (version,) = rd.unpack("<I")
    if version != FORMAT_VERSION:
        raise VersionMismatch(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    k, n, m, raw_dim = rd.unpack("<IIII")
    (itemsize,) = rd.unpack("<I")
    if itemsize not in _DTYPE_TAGS:
        raise Truncated(f"{path}: unknown dtype width {itemsize}")
    dtype = _DTYPE_TAGS[itemsize]
    kernel_tag, kernel_param = rd.unpack("<Id")
    if kernel_tag == 0:
        kernel = Polynomial(int(kernel_param))
    elif kernel_tag == 1:
        kernel = Gaussian(kernel_param)
    else:
        raise Truncated(f"{path}: unknown kernel tag {kernel_tag}")
    (gamma,) = rd.unpack("<d")
    (n_steps,) = rd.unpack("<I")
    steps = []
    for _ in range(n_steps):
        tag, c, side = rd.unpack("<IdI")
        if tag == 0:
            steps.append(GaussianFilter(c=c, side=side))
        elif tag == 1:
            steps.append(TwoStepNormalize())
        elif tag == 2:
            steps.append(SpectralConcat())
        else:
            raise Truncated(f"{path}: unknown preprocess tag {tag}")
    samples = np.frombuffer(rd.take(n * m * itemsize), dtype=dtype).reshape(n, m)
    weights = np.frombuffer(rd.take((n + 1) * k * itemsize), dtype=dtype).reshape(n + 1, k)
    native = dtype.newbyteorder("=")
    return Model(
        kernel=kernel,
        gamma=gamma,
        preprocess=PreprocessSpec(tuple(steps)),
        train_samples=samples.astype(native),
        weights=weights.astype(native),
        num_classes=k,
        raw_dim=raw_dim,
    )


def emit_trace_csv(trace, path):
    """Write `t,residual,eta` rows; eta column empty where not measured."""
    with open(path, "w", newline="") as f:
        f.write("t,residual,eta\n")
        for t, res, eta in zip(trace.steps, trace.residuals, trace.errors):
            eta_txt = "" if eta is None else repr(eta)
            f.write(f"{t},{res!r},{eta_txt}\n")


def emit_report_json(report, path, extra=None):
    payload = {
        "eta": report.error_rate,
        "confusion_counts": report.confusion_counts.tolist(),
        "confusion_percent": [
            [round(v, 4) for v in row] for row in report.confusion_percent.tolist()
        ],
        "num_misclassified": int(report.misclassified_indices.size),
    }
    if extra:
        payload.update(extra)
    with open(path, "w") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
