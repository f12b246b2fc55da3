"""Max-depth classification of directions between two populations."""

from dataclasses import dataclass
from typing import Union

import numpy as np

from .baseline import asd_circle_many, atd_circle_many
from .depth import depth_values
from .errors import ConfigError, DimMismatch, LengthMismatch, NotCircle
from .rng import MASK64, derive_seed, mix64
from .sphere import DeltaSpec, as_sample, as_unit, get_kernel

BASELINES = ("atd", "asd")


def _resolve(spec):
    if isinstance(spec, str) and spec in BASELINES:
        return spec
    return get_kernel(spec)


def kernel_name(spec):
    return spec if isinstance(spec, str) else spec.kind


def point_hash(coords):
    """64-bit hash of the exact float64 bit patterns of ``coords``."""
    h = 0x2545F4914F6CDD1D
    for word in np.ascontiguousarray(coords, dtype=np.float64).view(np.uint64):
        h = mix64(h ^ int(word))
    return h


def tie_coin(tie_seed, coords):
    """Fair coin, 1 or 2, fixed by ``(tie_seed, coords)``."""
    return 1 + (derive_seed(tie_seed, point_hash(coords)) >> 63)


@dataclass(frozen=True)
class DepthClassifier:
    """Two training samples and the depth used to compare them."""

    spec: Union[DeltaSpec, str]
    sample1: object
    sample2: object
    tie_seed: int = 0

    def depths(self, queries):
        """Depths of each query row under populations 1 and 2, shape (m, 2)."""
        q = np.atleast_2d(np.asarray(queries, dtype=np.float64))
        if q.shape[1] != self.sample1.dim:
            raise DimMismatch(f"dimension {q.shape[1]} != {self.sample1.dim}")
        if isinstance(self.spec, str):
            fn = atd_circle_many if self.spec == "atd" else asd_circle_many
            alphas = np.arctan2(q[:, 1], q[:, 0])
            return np.column_stack([fn(alphas, self.sample1), fn(alphas, self.sample2)])
        return np.column_stack(
            [depth_values(self.spec, q, self.sample1), depth_values(self.spec, q, self.sample2)]
        )

    def predict(self, queries):
        q = np.atleast_2d(np.asarray(queries, dtype=np.float64))
        d = self.depths(q)
        labels = np.where(d[:, 0] > d[:, 1], 1, 2)
        for i in np.flatnonzero(d[:, 0] == d[:, 1]):
            labels[i] = tie_coin(self.tie_seed, q[i])
        return labels


def fit(spec, sample1, sample2, tie_seed=0):
    """Store the training samples; depths are computed at query time."""
    spec = _resolve(spec)
    s1, s2 = as_sample(sample1), as_sample(sample2)
    if s1.dim != s2.dim:
        raise DimMismatch(f"training samples differ in dimension: {s1.dim} != {s2.dim}")
    if isinstance(spec, str) and s1.dim != 2:
        raise NotCircle(f"{spec} is only available on the circle")
    if isinstance(spec, str) and spec == "asd" and min(s1.n, s2.n) < 2:
        raise ConfigError("asd needs at least 2 points per population")
    return DepthClassifier(spec, s1, s2, int(tie_seed) & MASK64)


def classify(model, w):
    """Label 1 or 2 for a single direction ``w``."""
    w = as_unit(w)
    return int(model.predict(w.coords[None, :])[0])


def misclassification_rate(model, test, labels):
    test = as_sample(test)
    labels = np.asarray(labels)
    if labels.shape != (test.n,):
        raise LengthMismatch(f"{labels.size} labels for {test.n} test points")
    return float(np.mean(model.predict(test.points) != labels))
