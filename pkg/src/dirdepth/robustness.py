"""Population depth under vMF laws: breakdown bounds, concentration, variance.

Everything here reduces to one-dimensional expectations of the cosine with
the modal direction, computed by :func:`rotsym_expectation`.
"""

import numpy as np

from .depth import depth_values, vmf_population_depth
from .errors import NotCircle, QuadratureFailure
from .quadrature import DEFAULT_QUAD, QuadratureSpec, legendre_rule, rotsym_expectation
from .sphere import as_sample, as_unit, get_kernel

__all__ = [
    "QuadratureSpec",
    "rotsym_expectation",
    "bdp_lower_bound_vmf",
    "bdp_lower_bound_empirical",
    "max_depth_curve",
    "depth_variance",
    "constancy_diagnostic",
    "circle_vmf_depth",
]


def bdp_lower_bound_vmf(spec, q, kappa, quad=DEFAULT_QUAD):
    """Lower bound on the breakdown point of the deepest point of vMF(q, kappa).

    ``(D(theta_0) - D(-theta_0)) / (2 d_sup)``, evaluated as a single
    expectation of ``delta(-V) - delta(V)``.
    """
    spec = get_kernel(spec)
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    gap = rotsym_expectation(lambda v: spec(-v) - spec(v), q, kappa, quad)
    return gap / (2.0 * spec.d_sup)


def bdp_lower_bound_empirical(spec, sample, theta_hat):
    """The same bound for an empirical distribution and its deepest point."""
    spec = get_kernel(spec)
    theta = as_unit(theta_hat).coords
    d_plus, d_minus = depth_values(spec, np.stack([theta, -theta]), sample)
    return float((d_plus - d_minus) / (2.0 * spec.d_sup))


def max_depth_curve(spec, q, kappa_grid, quad=DEFAULT_QUAD):
    """Rows of (kappa, depth of the mode) over ``kappa_grid``."""
    kappas = np.asarray(kappa_grid, dtype=np.float64)
    if np.any(kappas <= 0) or np.any(np.diff(kappas) <= 0):
        raise ValueError("kappa grid must be positive and increasing")
    depths = [vmf_population_depth(spec, q, k, 1, quad) for k in kappas]
    return np.column_stack([kappas, depths])


def depth_variance(spec, q, kappa, at_mode=1, quad=DEFAULT_QUAD):
    """``Var[delta(+-theta_0'W)]`` under vMF(q, kappa); the limiting variance of the
    root-n scaled sample depth."""
    spec = get_kernel(spec)
    if at_mode not in (1, -1):
        raise ValueError("at_mode must be +1 or -1")
    m1 = rotsym_expectation(lambda v: spec(at_mode * v), q, kappa, quad)
    m2 = rotsym_expectation(lambda v: spec(at_mode * v) ** 2, q, kappa, quad)
    return max(m2 - m1 * m1, 0.0)


def constancy_diagnostic(spec, sample, grid=360, points=None):
    """Range (max - min) of the sample depth over a probe set.

    On the circle the probe set is the regular ``grid``; for ``q >= 3`` pass
    ``points`` explicitly.  Values near zero indicate a constant depth.
    """
    sample = as_sample(sample)
    if points is None:
        if sample.dim != 2:
            raise NotCircle("supply probe points for q >= 3")
        a = 2.0 * np.pi * np.arange(grid) / grid
        points = np.column_stack([np.cos(a), np.sin(a)])
    values = depth_values(spec, points, sample)
    return float(values.max() - values.min())


def circle_vmf_depth(spec, kappa, alphas, quad=DEFAULT_QUAD):
    """Population depth on the circle at angles ``alphas`` from the vMF mode.

    Integrates over the offset ``s`` from the query, split at ``s = 0`` where
    the arc and chord kernels have a kink, with the same order-doubling rule
    as :func:`rotsym_expectation`.
    """
    spec = get_kernel(spec)
    alphas = np.atleast_1d(np.asarray(alphas, dtype=np.float64))

    def estimate(order):
        s, w = legendre_rule(order, 0.0, np.pi)
        s = np.concatenate([-s[::-1], s])
        w = np.concatenate([w[::-1], w])
        dist = spec(np.cos(s))
        # data angle is alpha + s relative to the mode
        dens = np.exp(kappa * (np.cos(alphas[:, None] + s[None, :]) - 1.0))
        num = (dens * dist) @ w
        den = dens @ w
        return num / den

    order = 64
    prev = estimate(order)
    while order < quad.max_order:
        order *= 2
        cur = estimate(order)
        if np.max(np.abs(cur - prev)) <= quad.rel_tol * spec.d_sup:
            return spec.d_sup - cur
        prev = cur
    raise QuadratureFailure(f"circle depth did not converge (kappa={kappa})")
