"""Deepest points: maximizers of the sample depth over the sphere.

For the cosine kernel the deepest point is the spherical mean.  Other
kernels minimize the mean distance ``f(theta) = mean_i delta(theta'W_i)`` by
projected gradient descent from many starts (every sample point, the
spherical mean, and on the circle a regular grid of angles), since depth
surfaces may be multimodal.
"""

from dataclasses import dataclass

import numpy as np

from .depth import circle_grid, depth_values, mean_distances, spherical_mean
from .errors import ConstantDepth, NotCircle, NullResultant
from .sphere import UnitVector, as_sample, get_kernel

# gradient clamp and exclusion radius around data points
_CLAMP = 1.0 - 1e-12
_DROP = 1.0 - 1e-9


@dataclass(frozen=True)
class DeepestOptions:
    max_iter: int = 200
    grad_tol: float = 1e-8
    circle_starts: int = 360
    armijo: float = 1e-4
    max_halvings: int = 60
    # a start stops once its step moves it less than this (radians)
    min_move: float = 1e-13
    # starts closer than this (coordinatewise) are merged
    merge_tol: float = 1e-10
    # depths this close count as tied
    tie_tol: float = 1e-12


@dataclass(frozen=True)
class DeepestResult:
    point: UnitVector
    depth: float
    iterations: int
    candidates_evaluated: int


def _gradient(spec, thetas, points):
    t = thetas @ points.T
    keep = t <= _DROP
    t = np.clip(t, -_CLAMP, _CLAMP)
    coef = np.where(keep, spec.derivative(t), 0.0) / points.shape[0]
    g = coef @ points
    return g - np.sum(g * thetas, axis=1, keepdims=True) * thetas


def _normalize_rows(x):
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def _merge(thetas, tol):
    keys = np.round(thetas / tol).astype(np.int64)
    _, first = np.unique(keys, axis=0, return_index=True)
    return np.sort(first)


def _lexmin(rows):
    order = np.lexsort(rows.T[::-1])
    return order[0]


def _descend(spec, points, starts, opts):
    """Projected gradient descent from every start; returns final points, values, counters."""
    theta = starts.copy()
    f = mean_distances(spec, theta, points)
    evaluated = theta.shape[0]
    active = _merge(theta, opts.merge_tol)
    iters = 0
    while active.size and iters < opts.max_iter:
        iters += 1
        th = theta[active]
        gt = _gradient(spec, th, points)
        gn2 = np.sum(gt * gt, axis=1)
        moving = gn2 > opts.grad_tol ** 2
        idx = active[moving]
        gt, gn2 = gt[moving], gn2[moving]
        step = np.ones(idx.size)
        pending = np.arange(idx.size)
        accepted = np.zeros(idx.size, dtype=bool)
        gn = np.sqrt(gn2)
        for _ in range(opts.max_halvings):
            pending = pending[step[pending] * gn[pending] >= opts.min_move]
            if not pending.size:
                break
            p = idx[pending]
            cand = _normalize_rows(theta[p] - step[pending, None] * gt[pending])
            fc = mean_distances(spec, cand, points)
            evaluated += pending.size
            ok = fc <= f[p] - opts.armijo * step[pending] * gn2[pending]
            theta[p[ok]] = cand[ok]
            f[p[ok]] = fc[ok]
            accepted[pending[ok]] = True
            pending = pending[~ok]
            step[pending] *= 0.5
        # starts that could not decrease are at a (possibly nonsmooth) stationary point
        idx = idx[accepted & (step * gn >= 2 * opts.min_move)]
        active = idx[_merge(theta[idx], opts.merge_tol)] if idx.size else idx
    return theta, f, iters, evaluated


def deepest(spec, sample, opts=None):
    """A deepest point of ``sample`` under the given kernel.

    Raises :class:`ConstantDepth` for the cosine kernel when the sample mean
    vanishes (every point is then deepest).
    """
    spec = get_kernel(spec)
    sample = as_sample(sample)
    opts = opts or DeepestOptions()
    points = sample.points
    if spec.kind == "cos":
        try:
            mu = spherical_mean(sample)
        except NullResultant as exc:
            raise ConstantDepth("zero resultant: cosine depth is constant") from exc
        d = float(depth_values(spec, mu.coords[None, :], sample)[0])
        return DeepestResult(mu, d, 0, 1)

    starts = [points]
    try:
        starts.append(spherical_mean(sample).coords[None, :])
    except NullResultant:
        pass
    if sample.dim == 2 and opts.circle_starts:
        starts.append(circle_grid(opts.circle_starts)[1])
    theta, f, iters, evaluated = _descend(spec, points, np.vstack(starts), opts)

    best = f.min()
    tied = np.flatnonzero(f <= best + opts.tie_tol)
    win = tied[_lexmin(theta[tied])]
    point = UnitVector(theta[win])
    d = float(depth_values(spec, point.coords[None, :], sample)[0])
    return DeepestResult(point, d, iters, evaluated)


def deepest_circle_grid(spec, sample, resolution=3600):
    """Exhaustive maximization over the angles ``2 pi k / resolution``; first index wins ties.

    ``spec`` may be a distance kernel or ``"atd"`` / ``"asd"``.
    """
    sample = as_sample(sample)
    if sample.dim != 2:
        raise NotCircle(f"need q = 2, got q = {sample.dim}")
    if resolution < 360:
        raise ValueError("resolution must be at least 360")
    angles, pts = circle_grid(resolution)
    if isinstance(spec, str) and spec in ("atd", "asd"):
        from .baseline import asd_circle_many, atd_circle_many

        values = (atd_circle_many if spec == "atd" else asd_circle_many)(angles, sample)
    else:
        values = depth_values(spec, pts, sample)
    k = int(np.argmax(values))
    return DeepestResult(UnitVector(pts[k]), float(values[k]), 1, resolution)
