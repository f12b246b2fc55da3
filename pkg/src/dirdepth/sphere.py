"""Points, samples, rotation-invariant distances and rotations on S^{q-1}."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    DimMismatch,
    DimensionTooSmall,
    EmptySample,
    InvalidKernel,
    ZeroNorm,
)
from .rng import Stream

NORM_TOL = 1e-8
_EXACT_TOL = 1e-15


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class UnitVector:
    """A point on the unit sphere S^{q-1}.

    Coordinates within ``1e-8`` of unit norm are accepted and renormalized.
    Use :func:`unit_from_components` to normalize arbitrary vectors.
    """

    coords: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.coords, dtype=np.float64)
        if x.ndim != 1:
            raise DimMismatch("a unit vector must be one-dimensional")
        if x.size < 2:
            raise DimensionTooSmall(f"need q >= 2, got {x.size}")
        norm = np.linalg.norm(x)
        if not np.isfinite(norm) or abs(norm - 1.0) > NORM_TOL:
            raise ZeroNorm(f"norm {norm!r} is not within {NORM_TOL} of 1")
        object.__setattr__(self, "coords", _frozen(x if abs(norm - 1.0) <= _EXACT_TOL else x / norm))

    @property
    def dim(self):
        return self.coords.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype)

    def __neg__(self):
        return UnitVector(-self.coords)

    def __eq__(self, other):
        if not isinstance(other, UnitVector):
            return NotImplemented
        return np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        return f"UnitVector({np.array2string(self.coords, precision=6, separator=', ')})"

    def angle(self):
        """Polar angle in [0, 2*pi) of a point on the circle."""
        if self.dim != 2:
            raise DimMismatch("angle() is only defined for q = 2")
        return float(np.arctan2(self.coords[1], self.coords[0]) % (2 * np.pi))


@dataclass(frozen=True, eq=False)
class DirectionalSample:
    """An empirical distribution: ``n`` points on S^{q-1}, stored as rows."""

    points: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.points, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2:
            raise DimMismatch("sample must be an (n, q) array")
        if x.shape[0] == 0:
            raise EmptySample("sample has no points")
        if x.shape[1] < 2:
            raise DimensionTooSmall(f"need q >= 2, got {x.shape[1]}")
        norms = np.linalg.norm(x, axis=1)
        bad = np.flatnonzero(~(np.abs(norms - 1.0) <= NORM_TOL))
        if bad.size:
            raise ZeroNorm(f"row {bad[0]} has norm {norms[bad[0]]!r}")
        # rows already unit to rounding are kept bit-for-bit so files round-trip
        scale = np.where(np.abs(norms - 1.0) <= _EXACT_TOL, 1.0, norms)
        object.__setattr__(self, "points", _frozen(x / scale[:, None]))

    @classmethod
    def _trusted(cls, points):
        # internal fast path for sampler output that is unit norm by construction
        obj = object.__new__(cls)
        object.__setattr__(obj, "points", _frozen(points))
        return obj

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        return UnitVector(self.points[i])

    def __iter__(self):
        return (UnitVector(p) for p in self.points)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)

    def __neg__(self):
        return DirectionalSample._trusted(-self.points)

    def __repr__(self):
        return f"DirectionalSample(n={self.n}, q={self.dim})"

    def head(self, m):
        return DirectionalSample._trusted(self.points[:m])


def as_unit(x):
    return x if isinstance(x, UnitVector) else UnitVector(np.asarray(x, dtype=np.float64))


def as_sample(x):
    return x if isinstance(x, DirectionalSample) else DirectionalSample(x)


def unit_from_components(xs):
    """Normalize ``xs`` onto the sphere."""
    x = np.asarray(xs, dtype=np.float64).ravel()
    if x.size < 2:
        raise DimensionTooSmall(f"need at least 2 components, got {x.size}")
    norm = np.linalg.norm(x)
    if not norm >= 1e-300:
        raise ZeroNorm("cannot normalize a zero vector")
    return UnitVector(x / norm)


def circle_point(alpha):
    """``(cos alpha, sin alpha)`` as a :class:`UnitVector`."""
    return UnitVector(np.array([np.cos(alpha), np.sin(alpha)]))


def basis_vector(q, j):
    """The ``j``-th canonical basis vector of R^q, 1-based like ``e_j``."""
    e = np.zeros(q)
    e[j - 1] = 1.0
    return UnitVector(e)


def _check_dims(a, b):
    if a.shape[-1] != b.shape[-1]:
        raise DimMismatch(f"dimension {a.shape[-1]} != {b.shape[-1]}")


def inner(u, v):
    """Inner product of two unit vectors, clamped to [-1, 1]."""
    a, b = as_unit(u).coords, as_unit(v).coords
    _check_dims(a, b)
    return float(np.clip(a @ b, -1.0, 1.0))


# --- distance kernels -----------------------------------------------------

def _arc(t):
    return np.arccos(np.clip(t, -1.0, 1.0))


def _arc_deriv(t):
    return -1.0 / np.sqrt(1.0 - t * t)


def _cos(t):
    return 1.0 - np.asarray(t, dtype=np.float64)


def _cos_deriv(t):
    return -np.ones_like(np.asarray(t, dtype=np.float64))


def _chord(t):
    return np.sqrt(np.maximum(2.0 * (1.0 - np.asarray(t, dtype=np.float64)), 0.0))


def _chord_deriv(t):
    return -1.0 / np.sqrt(2.0 * (1.0 - t))


_MONOTONE_GRID = np.linspace(-1.0, 1.0, 1001)


@dataclass(frozen=True)
class DeltaSpec:
    """A rotation-invariant distance ``d(u, v) = delta(u'v)``.

    ``delta`` must vanish at 1 and be non-increasing on [-1, 1]; ``d_sup`` is
    ``delta(-1)``.  Built-in kernels are :data:`ARC`, :data:`COS` and
    :data:`CHORD`; :meth:`custom` wraps any vectorized callable.
    """

    kind: str
    eval: Callable = field(repr=False)
    d_sup: float
    deriv: Optional[Callable] = field(default=None, repr=False, compare=False)
    # delta(-t) + delta(t) == delta(-1); holds for arc and cos only
    antisymmetric: bool = False

    def __call__(self, t):
        return self.eval(t)

    def derivative(self, t):
        """delta'(t), by central differences when no derivative was given."""
        t = np.asarray(t, dtype=np.float64)
        if self.deriv is not None:
            return self.deriv(t)
        h = 1e-6
        lo = np.clip(t - h, -1.0, 1.0)
        hi = np.clip(t + h, -1.0, 1.0)
        return (self.eval(hi) - self.eval(lo)) / (hi - lo)

    @classmethod
    def custom(cls, func, deriv=None, name="custom"):
        """Validate and wrap a user-supplied ``delta``."""
        grid = np.asarray(func(_MONOTONE_GRID), dtype=np.float64)
        if grid.shape != _MONOTONE_GRID.shape or not np.all(np.isfinite(grid)):
            raise InvalidKernel("delta must map [-1, 1] to finite reals elementwise")
        if np.any(grid < 0):
            raise InvalidKernel("delta must be nonnegative")
        if abs(float(func(np.array([1.0]))[0])) > 1e-12:
            raise InvalidKernel("delta(1) must be 0")
        if np.any(np.diff(grid) > 1e-12):
            raise InvalidKernel("delta must be non-increasing on [-1, 1]")
        d_sup = float(func(np.array([-1.0]))[0])
        anti = bool(np.max(np.abs(grid + grid[::-1] - d_sup)) <= 1e-12)
        return cls(name, func, d_sup, deriv, anti)


ARC = DeltaSpec("arc", _arc, float(np.pi), _arc_deriv, True)
COS = DeltaSpec("cos", _cos, 2.0, _cos_deriv, True)
CHORD = DeltaSpec("chord", _chord, 2.0, _chord_deriv, False)
KERNELS = {"arc": ARC, "cos": COS, "chord": CHORD}


def get_kernel(spec):
    """Resolve a kernel name (``arc``, ``cos``, ``chord``) or pass a DeltaSpec through."""
    if isinstance(spec, DeltaSpec):
        return spec
    try:
        return KERNELS[spec]
    except KeyError:
        raise InvalidKernel(f"unknown distance kernel {spec!r}") from None


def distance(spec, u, v):
    """``delta(u'v)`` for the given kernel."""
    return float(get_kernel(spec)(inner(u, v)))


def squared_error(a, b):
    """``||a - b||^2 = 2 (1 - a'b)``."""
    return 2.0 * (1.0 - inner(a, b))


# --- rotations -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Rotation:
    """An orthogonal q x q matrix acting on points and samples."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimMismatch("rotation matrix must be square")
        if np.max(np.abs(m.T @ m - np.eye(m.shape[0]))) > 1e-10:
            raise ValueError("matrix is not orthogonal to 1e-10")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self):
        return self.matrix.shape[0]

    def apply(self, x):
        if isinstance(x, DirectionalSample):
            _check_dims(x.points, self.matrix)
            return DirectionalSample(x.points @ self.matrix.T)
        if isinstance(x, UnitVector):
            _check_dims(x.coords, self.matrix)
            return UnitVector(self.matrix @ x.coords)
        a = np.asarray(x, dtype=np.float64)
        _check_dims(a, self.matrix)
        return a @ self.matrix.T

    __call__ = apply


def random_rotation(q, seed):
    """Haar-distributed orthogonal matrix from the QR factorization of a Gaussian draw."""
    if q < 2:
        raise DimensionTooSmall(f"need q >= 2, got {q}")
    g = Stream(seed).normal(q * q).reshape(q, q)
    Q, R = np.linalg.qr(g)
    signs = np.where(np.diag(R) < 0, -1.0, 1.0)
    return Rotation(Q * signs)
