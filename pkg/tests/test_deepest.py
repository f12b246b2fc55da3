import numpy as np
import pytest

from dirdepth import (
    ARC, CHORD, COS, DirectionalSample, UnitVector, VmfModel, basis_vector, deepest,
    deepest_circle_grid, depth, random_rotation, sample_model, sample_vmf, vmf_circle,
)
from dirdepth.depth import depth_values
from dirdepth.errors import ConstantDepth, NotCircle
from dirdepth.experiments import curve_distributions

from conftest import random_units

KERNELS = [ARC, COS, CHORD]


def geo(a, b):
    return float(np.arccos(np.clip(np.dot(a, b), -1, 1)))


def circ(angles):
    a = np.asarray(angles, dtype=float)
    return np.column_stack([np.cos(a), np.sin(a)])


def near_max_set(spec, sample, resolution, extra=None, tol=1e-12):
    """Grid points (plus ``extra`` candidates) whose depth is within ``tol`` of the best."""
    pts = circ(2 * np.pi * np.arange(resolution) / resolution)
    if extra is not None:
        pts = np.vstack([pts, extra])
    v = depth_values(spec, pts, sample)
    return pts[v >= v.max() - tol], v.max()


@pytest.mark.parametrize("spec", KERNELS, ids=lambda k: k.kind)
def test_point_mass(spec):
    w = UnitVector([0.0, 0.6, 0.8])
    r = deepest(spec, [w.coords])
    assert geo(r.point.coords, w.coords) < 1e-7
    assert r.depth == pytest.approx(spec.d_sup, abs=1e-12)


def test_cos_two_points():
    r = deepest(COS, [[1, 0], [0, 1]])
    np.testing.assert_allclose(r.point.coords, [2 ** -0.5] * 2, atol=1e-15)
    assert r.depth == pytest.approx(1 + 2 ** -0.5, abs=1e-15)


def test_cos_constant_depth_raises():
    with pytest.raises(ConstantDepth):
        deepest(COS, [[1, 0], [-1, 0]])


def test_arc_antipodal_plateau():
    w = np.array([0.28, 0.96])
    r = deepest(ARC, [w, -w])
    assert r.depth == pytest.approx(np.pi / 2, abs=1e-12)


@pytest.mark.parametrize("spec", KERNELS, ids=lambda k: k.kind)
def test_result_depth_is_consistent(spec, rng):
    s = random_units(rng, 40, 4)
    r = deepest(spec, s)
    assert r.depth == pytest.approx(depth(spec, r.point, s).value, abs=1e-12)
    # every sample point is a start, so the result dominates them
    assert r.depth >= depth_values(spec, s, s).max() - 1e-15


def test_arc_circle_matches_fine_grid():
    s = sample_vmf(vmf_circle(np.pi, 2.0), 500, 1)
    r = deepest(ARC, s)
    best, vmax = near_max_set(ARC, s, 10 ** 6)
    assert r.depth >= vmax - 1e-12
    assert min(geo(r.point.coords, b) for b in best[:: max(1, len(best) // 2000)]) < 1e-3


@pytest.mark.parametrize("spec", KERNELS, ids=lambda k: k.kind)
def test_agrees_with_grid(spec, rng):
    for _ in range(5):
        s = circ(rng.vonmises(rng.uniform(-np.pi, np.pi), 3.0, int(rng.integers(5, 40))))
        g = deepest_circle_grid(spec, s, 3600)
        r = deepest(spec, s)
        assert r.depth >= g.depth - 1e-12
        best, _ = near_max_set(spec, s, 3600, tol=1e-12 + (r.depth - g.depth))
        # the optimum lies within one grid cell of the grid's near-max set
        assert min(geo(r.point.coords, b) for b in best) <= 2 * np.pi / 3600 + 1e-9


@pytest.mark.parametrize("spec", KERNELS, ids=lambda k: k.kind)
def test_rotation_equivariance(spec, rng):
    for trial in range(4):
        s = random_units(rng, 31, 3) + np.array([0, 0, 2.0])
        s /= np.linalg.norm(s, axis=1, keepdims=True)
        O = random_rotation(3, 500 + trial)
        a = deepest(spec, s).point
        b = deepest(spec, O.apply(DirectionalSample(s))).point
        assert geo(O.apply(a).coords, b.coords) < 1e-6


@pytest.mark.parametrize("spec", [ARC, COS], ids=lambda k: k.kind)
def test_antipode_of_deepest_is_shallowest(spec, rng):
    for _ in range(5):
        s = circ(rng.vonmises(0.5, 2.0, 41))
        r = deepest(spec, s)
        # for the arc kernel the minimum sits at a kink (antipode of a data point)
        probes = np.vstack([circ(2 * np.pi * np.arange(10 ** 5) / 10 ** 5), s, -s])
        vmin = depth_values(spec, probes, s).min()
        assert depth(spec, -r.point.coords, s).value == pytest.approx(vmin, abs=1e-9)


def test_consistency_along_nested_samples():
    m = VmfModel(basis_vector(3, 3), 3.0)
    big = sample_vmf(m, 4000, 21).points
    for spec in KERNELS:
        errs = [geo(deepest(spec, big[:n]).point.coords, m.mode.coords) for n in (40, 400, 4000)]
        assert errs[0] > errs[1] > errs[2], (spec.kind, errs)


def test_grid_point_mass_and_ties():
    r = deepest_circle_grid(ARC, [[1.0, 0.0]], 360)
    np.testing.assert_allclose(r.point.coords, [1, 0], atol=1e-15)
    # constant depth: first index wins
    r = deepest_circle_grid(ARC, [[0.0, 1.0], [0.0, -1.0]], 360)
    np.testing.assert_allclose(r.point.coords, [1, 0], atol=1e-15)
    with pytest.raises(NotCircle):
        deepest_circle_grid(ARC, [[1, 0, 0]], 360)
    with pytest.raises(ValueError):
        deepest_circle_grid(ARC, [[1, 0]], 100)


def test_grid_baselines():
    s = circ([0.1, 0.2, 0.3, 2.0, 4.0])
    for tag in ("atd", "asd"):
        r = deepest_circle_grid(tag, s, 3600)
        assert 0 < r.depth <= 1


def test_arc_grid_finds_circular_median_of_h3():
    s = sample_model(curve_distributions()["H3"], 500, 3)
    ang = np.arctan2(s.points[:, 1], s.points[:, 0])

    def mean_dev(a):
        d = np.abs(np.angle(np.exp(1j * (ang[None, :] - np.atleast_1d(a)[:, None]))))
        return d.mean(axis=1)

    # a minimizer of mean angular deviation lies at a data angle
    dev = mean_dev(ang)
    medians = ang[dev <= dev.min() + 1e-12]
    g = deepest_circle_grid(ARC, s, 3600)
    ga = np.arctan2(g.point.coords[1], g.point.coords[0])
    gap = np.min(np.abs(np.angle(np.exp(1j * (medians - ga)))))
    assert gap <= 2 * np.pi / 3600
