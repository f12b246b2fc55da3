"""Directional distance-based depth.

The depth of ``theta`` with respect to ``H`` is ``d_sup - E_H[delta(theta'W)]``.
Sample depths use the plug-in empirical measure.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, NotCircle, NullResultant
from .quadrature import DEFAULT_QUAD, rotsym_expectation
from .sphere import UnitVector, as_sample, as_unit, get_kernel

# rows of theta evaluated per block; bounds the (block, n) work array
_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True)
class DepthValue:
    value: float
    theta: UnitVector
    spec_kind: str

    def __float__(self):
        return self.value


def mean_distances(spec, thetas, points):
    """Mean kernel distance from each row of ``thetas`` to the rows of ``points``.

    Plain arrays in, array of shape ``(m,)`` out.  Inner products are clamped
    to [-1, 1] before the kernel is applied.
    """
    spec = get_kernel(spec)
    thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
    points = np.asarray(points, dtype=np.float64)
    if thetas.shape[1] != points.shape[1]:
        raise DimMismatch(f"dimension {thetas.shape[1]} != {points.shape[1]}")
    n = points.shape[0]
    block = max(1, _BLOCK_ELEMS // max(n, 1))
    out = np.empty(thetas.shape[0])
    for start in range(0, thetas.shape[0], block):
        t = np.clip(thetas[start:start + block] @ points.T, -1.0, 1.0)
        out[start:start + block] = spec(t).mean(axis=1)
    return out


def depth_values(spec, thetas, sample):
    """Vectorized depth at every row of ``thetas``."""
    spec = get_kernel(spec)
    pts = as_sample(sample).points
    return spec.d_sup - mean_distances(spec, thetas, pts)


def depth(spec, theta, sample):
    """Sample depth of ``theta``.

    >>> from dirdepth import ARC, circle_point
    >>> round(depth(ARC, circle_point(0), [[1, 0], [0, 1]]).value, 6)
    2.356194
    """
    spec = get_kernel(spec)
    theta = as_unit(theta)
    sample = as_sample(sample)
    value = float(depth_values(spec, theta.coords[None, :], sample)[0])
    # guard the documented range against last-bit rounding
    value = min(max(value, 0.0), spec.d_sup)
    return DepthValue(value, theta, spec.kind)


def _resultant(sample):
    return as_sample(sample).points.mean(axis=0)


def depth_cos_closed(theta, sample):
    """Cosine-distance depth through ``1 + theta' mean(W)``."""
    theta = as_unit(theta)
    wbar = _resultant(sample)
    if wbar.size != theta.dim:
        raise DimMismatch(f"dimension {theta.dim} != {wbar.size}")
    return DepthValue(float(1.0 + theta.coords @ wbar), theta, "cos")


def spherical_mean(sample):
    """Normalized sample mean vector.

    Raises :class:`NullResultant` when the mean vector has norm below 1e-12.
    """
    wbar = _resultant(sample)
    r = np.linalg.norm(wbar)
    if r < 1e-12:
        raise NullResultant(f"resultant length {r:.3g} is numerically zero")
    return UnitVector(wbar / r)


def circle_grid(grid):
    angles = 2.0 * np.pi * np.arange(grid) / grid
    return angles, np.column_stack([np.cos(angles), np.sin(angles)])


def depth_profile_circle(spec, sample, grid=720):
    """Depth at the angles ``2 pi k / grid`` for a sample on the circle.

    Returns an array of shape ``(grid, 2)`` holding (angle, depth) rows.
    ``spec`` may also be ``"atd"`` or ``"asd"`` for the combinatorial depths.
    """
    sample = as_sample(sample)
    if sample.dim != 2:
        raise NotCircle(f"profile needs q = 2, got q = {sample.dim}")
    if grid < 4:
        raise ValueError("grid must be at least 4")
    angles, pts = circle_grid(grid)
    if isinstance(spec, str) and spec in ("atd", "asd"):
        from .baseline import asd_circle_many, atd_circle_many

        fn = atd_circle_many if spec == "atd" else asd_circle_many
        values = fn(angles, sample)
    else:
        values = depth_values(spec, pts, sample)
    return np.column_stack([angles, values])


def vmf_population_depth(spec, q, kappa, at_mode=1, quad=DEFAULT_QUAD):
    """Population depth of ``+theta_0`` (``at_mode=1``) or ``-theta_0`` (``-1``)
    under vMF(theta_0, kappa) on S^{q-1}."""
    spec = get_kernel(spec)
    if at_mode not in (1, -1):
        raise ValueError("at_mode must be +1 or -1")
    mean_dist = rotsym_expectation(lambda v: spec(at_mode * v), q, kappa, quad)
    return spec.d_sup - mean_dist
