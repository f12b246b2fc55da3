"""Angular Tukey and angular simplicial depth on the circle.

Both work on angles relative to the query, wrapped into (-pi, pi].  Arcs and
half-circles are closed; two points count as coincident (or antipodal) when
their angular gap is within ``ANGLE_TOL`` of 0 (or pi).
"""

import numpy as np

from .errors import EmptySample, NotCircle, SampleTooSmall
from .sphere import as_sample, as_unit

ANGLE_TOL = 1e-12


def _sample_angles(sample):
    sample = as_sample(sample)
    if sample.dim != 2:
        raise NotCircle(f"need q = 2, got q = {sample.dim}")
    return np.arctan2(sample.points[:, 1], sample.points[:, 0])


def _query_angle(theta):
    theta = as_unit(theta)
    if theta.dim != 2:
        raise NotCircle(f"need q = 2, got q = {theta.dim}")
    return float(np.arctan2(theta.coords[1], theta.coords[0]))


def _relative(angles, alpha):
    """Angles relative to ``alpha`` in (-pi, pi]; near-boundary values snap to pi."""
    phi = np.pi - np.mod(np.pi - (angles - alpha), 2.0 * np.pi)
    phi[phi <= -np.pi + ANGLE_TOL] = np.pi
    phi[np.abs(phi) <= ANGLE_TOL] = 0.0
    return phi


def _atd_from_angles(phi_sorted_ext, n, betas):
    lo = np.searchsorted(phi_sorted_ext, betas - ANGLE_TOL, side="left")
    hi = np.searchsorted(phi_sorted_ext, betas + np.pi + ANGLE_TOL, side="right")
    return (hi - lo) / n


def _atd_single(angles, alpha):
    n = angles.size
    phi = _relative(angles, alpha)
    # closed half-circles [beta, beta + pi] containing the query: beta in [-pi, 0];
    # copies shifted by -2 pi catch data at angle pi when beta = -pi
    ext = np.sort(np.concatenate([phi, phi - 2.0 * np.pi]))
    cuts = np.concatenate([phi, phi - np.pi, [-np.pi, 0.0]])
    cuts = np.unique(cuts[(cuts >= -np.pi) & (cuts <= 0.0)])
    mids = 0.5 * (cuts[1:] + cuts[:-1])
    betas = np.concatenate([cuts, mids])
    return float(np.min(_atd_from_angles(ext, n, betas)))


def atd_circle(theta, sample):
    """Angular Tukey depth: least sample mass of a closed half-circle containing ``theta``.

    Exact; sorts the relative angles once and scans all combinatorially distinct
    half-circle positions with binary search, O(n log n).
    """
    angles = _sample_angles(sample)
    if angles.size == 0:
        raise EmptySample("sample has no points")
    return _atd_single(angles, _query_angle(theta))


def atd_circle_many(alphas, sample):
    angles = _sample_angles(sample)
    return np.array([_atd_single(angles, a) for a in np.asarray(alphas, dtype=float)])


def _asd_single(angles, alpha):
    n = angles.size
    phi = _relative(angles, alpha)
    at_query = phi == 0.0
    opposite = phi == np.pi
    z = int(at_query.sum())
    a = int(opposite.sum())
    pos = np.sort(phi[(phi > 0.0) & ~opposite])
    neg = np.sort(phi[phi < 0.0])
    # pairs with an endpoint at the query contain it unless the other end is antipodal
    count = z * (z - 1) // 2 + z * (n - z - a)
    # a pair (p, m) straddling the query contains it iff p - m < pi
    if pos.size and neg.size:
        idx = np.searchsorted(neg, pos - np.pi + ANGLE_TOL, side="right")
        count += int(np.sum(neg.size - idx))
    return count / (n * (n - 1) / 2)


def asd_circle(theta, sample):
    """Angular simplicial depth: share of sample pairs whose closed shorter arc holds ``theta``.

    Antipodal pairs have no shorter arc and never count.
    """
    angles = _sample_angles(sample)
    if angles.size < 2:
        raise SampleTooSmall("angular simplicial depth needs at least 2 points")
    return _asd_single(angles, _query_angle(theta))


def asd_circle_many(alphas, sample):
    angles = _sample_angles(sample)
    if angles.size < 2:
        raise SampleTooSmall("angular simplicial depth needs at least 2 points")
    return np.array([_asd_single(angles, a) for a in np.asarray(alphas, dtype=float)])
