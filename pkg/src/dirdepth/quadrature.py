"""Gauss-Legendre integration against the rotationally symmetric vMF weight.

For a vMF law on S^{q-1} the cosine ``V = W'theta_0`` has density proportional
to ``(1 - v^2)^{(q-3)/2} exp(kappa v)`` on [-1, 1].  All integrals are done in
the angle ``u = arccos v``, where the weight becomes
``sin(u)^{q-2} exp(kappa (cos u - 1))`` on [0, pi]: smooth for every ``q >= 2``
and free of overflow for large ``kappa`` (the ``exp(-kappa)`` factor cancels in
every ratio).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .errors import QuadratureFailure

BASE_ORDER = 64


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    max_order: int = 4096

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_order < BASE_ORDER:
            raise ValueError(f"max_order must be at least {BASE_ORDER}")


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=None)
def legendre_rule(order, a=0.0, b=np.pi):
    """Nodes and weights of the ``order``-point rule on [a, b] (cached, read-only)."""
    x, w = roots_legendre(order)
    half = 0.5 * (b - a)
    nodes = a + half * (x + 1.0)
    weights = half * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def vmf_angle_weight(u, q, kappa):
    """``sin(u)^{q-2} exp(kappa (cos u - 1))``; the scaled vMF angular weight."""
    w = np.exp(kappa * (np.cos(u) - 1.0))
    if q > 2:
        w = w * np.sin(u) ** (q - 2)
    return w


def _ratio(f, q, kappa, order):
    u, wq = legendre_rule(order)
    w = wq * vmf_angle_weight(u, q, kappa)
    fv = np.asarray(f(np.cos(u)), dtype=np.float64)
    if fv.ndim == 0:
        fv = np.full_like(u, float(fv))
    return float(fv @ w / w.sum()), float(np.max(np.abs(fv)))


def rotsym_expectation(f, q, kappa, quad=DEFAULT_QUAD):
    """``E[f(V)]`` for the cosine ``V`` of a vMF(q, kappa) draw with its mode.

    The rule order doubles from 64 until two successive estimates differ by
    less than ``quad.rel_tol`` relative to ``max |f|`` on the nodes (a pure
    relative test is meaningless when the expectation itself is zero).

    Raises
    ------
    QuadratureFailure
        If ``quad.max_order`` is reached first.
    """
    if q < 2:
        raise ValueError("q must be at least 2")
    if not kappa >= 0:
        raise ValueError("kappa must be nonnegative")
    order = BASE_ORDER
    prev, _ = _ratio(f, q, kappa, order)
    while order < quad.max_order:
        order *= 2
        cur, scale = _ratio(f, q, kappa, order)
        if abs(cur - prev) <= quad.rel_tol * max(scale, abs(cur), 1e-300):
            return cur
        prev = cur
    raise QuadratureFailure(
        f"no convergence to rel_tol={quad.rel_tol} by order {quad.max_order} "
        f"(q={q}, kappa={kappa})"
    )


def log_vmf_angle_integral(q, kappa, quad=DEFAULT_QUAD):
    """``log of int_{-1}^{1} (1-v^2)^{(q-3)/2} exp(kappa v) dv``."""
    order = BASE_ORDER
    u, w = legendre_rule(order)
    prev = float(w @ vmf_angle_weight(u, q, kappa))
    while order < quad.max_order:
        order *= 2
        u, w = legendre_rule(order)
        cur = float(w @ vmf_angle_weight(u, q, kappa))
        if abs(cur - prev) <= quad.rel_tol * cur:
            return np.log(cur) + kappa
        prev = cur
    raise QuadratureFailure(f"normalizing integral did not converge (q={q}, kappa={kappa})")
