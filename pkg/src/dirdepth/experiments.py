"""Monte Carlo harness for the depth-curve, breakdown, efficiency,
robustness and classification studies.

Replication ``m`` of any study draws its data with seed
``derive_seed(config.seed, m)``, independently of the cell (q, n, kappa, ...)
and of how many replications run.  Cells therefore share common random
numbers, and an uncontaminated robustness cell reproduces the matching
efficiency cell exactly.
"""

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from . import __version__
from .classify import BASELINES, fit, misclassification_rate
from .deepest import deepest, deepest_circle_grid
from .depth import depth_profile_circle
from .errors import ConfigError, ConstantDepth, DepthError
from .io import ResultTable
from .rng import Stream, derive_seed
from .robustness import bdp_lower_bound_vmf
from .sampling import (
    ContaminatedModel,
    MixtureModel,
    VmfModel,
    sample_model,
    vmf_circle,
    vmf_density,
)
from .sphere import KERNELS, DirectionalSample, UnitVector, basis_vector, squared_error

log = logging.getLogger(__name__)

EXPERIMENTS = ("curves", "bdp", "efficiency", "robustness", "classification")
ALL_KERNELS = ("arc", "cos", "chord", "asd", "atd")
CONTAMINATION = ("orthogonal", "antipodal")
SETUPS = ("A", "B", "C", "null")
# display factors used for the depth-curve figure; stored as metadata only
CURVE_DISPLAY_SCALE = {"arc": 1.5, "cos": 1.5, "chord": 1.5, "asd": 1.0, "atd": 0.5}
BASELINE_RESOLUTION = 3600


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int = 1
    M: int = 50
    q: tuple = ()
    n: tuple = ()
    kappa: tuple = ()
    eps: tuple = ()
    contamination: tuple = CONTAMINATION
    kernels: tuple = ("arc", "cos", "chord")
    grid: int = 720
    n_train: int = 200
    n_test: int = 100
    setups: tuple = ("A", "B", "C")
    output_path: Optional[str] = None

    def __post_init__(self):
        for name in ("q", "n", "kappa", "eps", "contamination", "kernels", "setups"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        self.validate()

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not self.kernels:
            raise ConfigError("kernels must be nonempty")
        bad = [k for k in self.kernels if k not in ALL_KERNELS]
        if bad:
            raise ConfigError(f"unknown kernels {bad}")
        if self.experiment == "bdp" and any(k in BASELINES for k in self.kernels):
            raise ConfigError("the breakdown bound is defined for distance kernels only")
        if any(k in BASELINES for k in self.kernels) and any(q != 2 for q in self.q):
            if self.experiment != "classification":
                raise ConfigError("asd/atd are only implemented for q = 2")
        if self.M < 1 or self.grid < 4 or self.n_train < 2 or self.n_test < 1:
            raise ConfigError("counts must be positive")
        if any(q < 2 for q in self.q) or any(n < 1 for n in self.n):
            raise ConfigError("need q >= 2 and n >= 1")
        if any(k < 0 for k in self.kappa):
            raise ConfigError("kappa must be nonnegative")
        if self.experiment == "bdp" and any(k <= 0 for k in self.kappa):
            raise ConfigError("breakdown bound needs kappa > 0")
        if any(not 0 <= e <= 1 for e in self.eps):
            raise ConfigError("eps must lie in [0, 1]")
        if any(c not in CONTAMINATION for c in self.contamination):
            raise ConfigError(f"contamination must be among {CONTAMINATION}")
        if any(s not in SETUPS for s in self.setups):
            raise ConfigError(f"setups must be among {SETUPS}")
        if self.experiment == "curves" and self.q != (2,):
            raise ConfigError("depth curves are drawn on the circle (q = 2)")

    def to_metadata(self):
        # the output path does not affect results, so it is not echoed
        return {f"config.{k}": (list(v) if isinstance(v, tuple) else v)
                for k, v in dataclasses.asdict(self).items() if k != "output_path"}

    @classmethod
    def from_metadata(cls, meta):
        prefix = "config."
        fields = {k[len(prefix):]: v for k, v in meta.items() if k.startswith(prefix)}
        return cls(**fields)


def default_config(experiment, paper_scale=False, **overrides):
    """Desk-scale defaults; ``paper_scale`` switches to the published replication counts."""
    base = {
        "curves": dict(q=(2,), n=(500,), kernels=ALL_KERNELS, grid=720),
        "bdp": dict(q=(2, 3, 5, 10), kappa=(0.1, 0.2, 0.5, 1, 2, 5, 10, 20, 50, 100)),
        "efficiency": dict(q=(3, 5), n=(25, 50, 100), kappa=(5, 10), M=500 if paper_scale else 50),
        "robustness": dict(q=(3,), n=(100,), kappa=(5, 10), eps=(0.0, 0.05, 0.10),
                           M=500 if paper_scale else 50),
        "classification": dict(q=(2, 10), kernels=ALL_KERNELS, M=250 if paper_scale else 50),
    }
    if experiment not in base:
        raise ConfigError(f"unknown experiment {experiment!r}")
    cfg = dict(base[experiment])
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(experiment=experiment, **cfg)


def _metadata(config, **extra):
    meta = {"toolkit": "dirdepth", "version": __version__, "seed": config.seed}
    meta.update(extra)
    meta.update(config.to_metadata())
    return meta


def _map(func, items, jobs):
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, items))
    return [func(i) for i in items]


# --- depth curves ------------------------------------------------------------

def curve_distributions():
    """The three circle laws of the depth-curve illustration."""
    return {
        "H1": vmf_circle(np.pi, 2.0),
        "H2": MixtureModel([vmf_circle(3 * np.pi / 4, 5.0), vmf_circle(5 * np.pi / 4, 5.0)], [0.5, 0.5]),
        "H3": MixtureModel([vmf_circle(5 * np.pi / 9, 7.0), vmf_circle(13 * np.pi / 9, 17.0)], [0.5, 0.5]),
    }


def mixture_density(model, x):
    if isinstance(model, VmfModel):
        return vmf_density(model, x)
    return sum(w * vmf_density(c, x) for c, w in zip(model.components, model.weights))


def run_curves(config):
    """Depth profiles on the circle for the three illustration samples.

    Columns: dist, kernel, angle, depth, is_max.  ``kernel == "density"``
    rows carry the parent density; ``is_max`` flags the first grid maximum.
    """
    rows = []
    n = config.n[0] if config.n else 500
    for ell, (name, model) in enumerate(curve_distributions().items(), start=1):
        sample = sample_model(model, n, derive_seed(config.seed, ell))
        for kernel in config.kernels:
            spec = kernel if kernel in BASELINES else KERNELS[kernel]
            prof = depth_profile_circle(spec, sample, config.grid)
            top = int(np.argmax(prof[:, 1]))
            for k, (a, d) in enumerate(prof):
                rows.append((name, kernel, float(a), float(d), int(k == top)))
        angles = 2.0 * np.pi * np.arange(config.grid) / config.grid
        for a in angles:
            x = UnitVector(np.array([np.cos(a), np.sin(a)]))
            rows.append((name, "density", float(a), float(mixture_density(model, x)), 0))
    meta = _metadata(config, display_scale=CURVE_DISPLAY_SCALE)
    return ResultTable(("dist", "kernel", "angle", "depth", "is_max"), rows, meta,
                       chart={"x": "angle", "y": "depth", "group": ["dist", "kernel"]})


# --- breakdown bound -----------------------------------------------------------

def run_bdp(config):
    """Lower bound on the breakdown point for vMF laws over (q, kernel, kappa)."""
    rows = []
    for q in config.q:
        for kernel in config.kernels:
            for kappa in config.kappa:
                try:
                    bound = bdp_lower_bound_vmf(KERNELS[kernel], q, kappa)
                except DepthError as exc:
                    raise type(exc)(f"q={q}, kappa={kappa}: {exc}") from exc
                rows.append((q, kernel, float(kappa), float(bound)))
    return ResultTable(("q", "kernel", "kappa", "bound"), rows, _metadata(config),
                       chart={"x": "kappa", "y": "bound", "group": ["q", "kernel"]})


# --- location estimation ---------------------------------------------------------

def estimate_location(kernel, sample):
    """Deepest point of ``sample`` for a kernel name."""
    if kernel in BASELINES:
        return deepest_circle_grid(kernel, sample, BASELINE_RESOLUTION).point
    try:
        return deepest(KERNELS[kernel], sample).point
    except ConstantDepth:
        log.warning("zero resultant: cosine depth constant, using the first sample point")
        return sample[0]


def _location_replication(cells, kernels, seed, m):
    rep_seed = derive_seed(seed, m)
    rows = []
    for key, model, truth in cells:
        sample = sample_model(model, key[1], rep_seed)
        for kernel in kernels:
            se = squared_error(estimate_location(kernel, sample), truth)
            rows.append(key + (kernel, "SE", m, se))
    return rows


def _with_mse(rows, M):
    out = sorted(rows, key=lambda r: r[-2])
    sums = {}
    for r in out:
        k = r[:-3]
        sums[k] = sums.get(k, 0.0) + r[-1]
    for k, total in sums.items():
        out.append(k + ("MSE", "", total / M))
    return out


def run_efficiency(config):
    """Squared errors of deepest points for vMF samples with mode ``e_q``.

    Columns: q, n, kappa, kernel, stat, replication, value.  ``stat`` is
    ``SE`` for per-replication rows and ``MSE`` for the summary rows.
    """
    return _run_location(config, contaminated=False)


def run_robustness(config):
    """Like :func:`run_efficiency` but under point-mass contamination at
    ``e_{q-1}`` (orthogonal) or ``-e_q`` (antipodal).

    Columns: q, n, kappa, eps, contamination, kernel, stat, replication, value.
    """
    return _run_location(config, contaminated=True)


def _run_location(config, contaminated, jobs=1):
    cells = []
    for q in config.q:
        truth = basis_vector(q, q)
        for n in config.n:
            for kappa in config.kappa:
                base = VmfModel(truth, kappa)
                if not contaminated:
                    cells.append(((q, n, float(kappa)), base, truth))
                    continue
                for eps in config.eps:
                    kinds = ("none",) if eps == 0 else config.contamination
                    for kind in kinds:
                        atom = basis_vector(q, q - 1) if kind == "orthogonal" else -truth
                        cells.append(((q, n, float(kappa), float(eps), kind),
                                      ContaminatedModel(base, eps, atom), truth))
    work = partial(_location_replication, cells, config.kernels, config.seed)
    rows = [r for block in _map(work, range(config.M), jobs) for r in block]
    columns = ("q", "n", "kappa") + (("eps", "contamination") if contaminated else ()) + (
        "kernel", "stat", "replication", "value")
    x = "eps" if contaminated else "n"
    return ResultTable(columns, _with_mse(rows, config.M), _metadata(config),
                       chart={"x": x, "y": "value", "where": {"stat": "MSE"},
                              "group": [c for c in columns[:-3] if c != x]})


# --- classification --------------------------------------------------------------

def _vmf_plane(q, angle, kappa):
    """vMF with mode cos(angle) e_{q-1} + sin(angle) e_q."""
    mode = np.zeros(q)
    mode[q - 2] = np.cos(angle)
    mode[q - 1] = np.sin(angle)
    return VmfModel(UnitVector(mode), kappa)


def classification_setup(name, q):
    """The two populations of a classification setup in dimension ``q``."""
    if q == 2:
        table = {
            "A": (vmf_circle(np.pi / 4, 5.0), vmf_circle(3 * np.pi / 4, 5.0)),
            "B": (vmf_circle(np.pi / 3, 2.0), vmf_circle(2 * np.pi / 3, 5.0)),
            "C": (vmf_circle(3 * np.pi / 4, 4.0),
                  MixtureModel([vmf_circle(0.0, 4.0), vmf_circle(np.pi / 2, 4.0)], [0.5, 0.5])),
        }
    else:
        table = {
            "A": (VmfModel(basis_vector(q, 1), 5.0), VmfModel(basis_vector(q, q), 5.0)),
            "B": (VmfModel(basis_vector(q, q), 2.0), _vmf_plane(q, np.pi / 6, 5.0)),
            "C": (_vmf_plane(q, 7 * np.pi / 4, 4.0),
                  MixtureModel([VmfModel(basis_vector(q, q - 1), 4.0),
                                VmfModel(basis_vector(q, q), 4.0)], [0.5, 0.5])),
        }
    if name == "null":
        return table["A"][0], table["A"][0]
    try:
        return table[name]
    except KeyError:
        raise ConfigError(f"unknown setup {name!r}") from None


def sample_labeled(pop1, pop2, n, seed):
    """``n`` draws from the half-half mixture of two populations, with labels 1/2."""
    labels = np.where(Stream(derive_seed(seed, 0)).uniform(n) < 0.5, 1, 2)
    pts = np.empty((n, pop1.q))
    for lab, pop in ((1, pop1), (2, pop2)):
        idx = np.flatnonzero(labels == lab)
        if idx.size:
            pts[idx] = sample_model(pop, idx.size, derive_seed(seed, lab)).points
    return DirectionalSample._trusted(pts), labels


def _classification_replication(cells, config_kernels, n_train, n_test, seed, m):
    rep_seed = derive_seed(seed, m)
    rows = []
    for setup, q in cells:
        pop1, pop2 = classification_setup(setup, q)
        train, ytrain = sample_labeled(pop1, pop2, n_train, derive_seed(rep_seed, 0))
        test, ytest = sample_labeled(pop1, pop2, n_test, derive_seed(rep_seed, 1))
        s1 = DirectionalSample._trusted(train.points[ytrain == 1])
        s2 = DirectionalSample._trusted(train.points[ytrain == 2])
        for kernel in config_kernels:
            if kernel in BASELINES and q != 2:
                continue
            spec = kernel if kernel in BASELINES else KERNELS[kernel]
            model = fit(spec, s1, s2, derive_seed(rep_seed, 2))
            rows.append((setup, q, kernel, "rate", m, misclassification_rate(model, test, ytest)))
    return rows


def run_classification(config, jobs=1):
    """Misclassification rates of max-depth classifiers.

    Columns: setup, q, kernel, stat, replication, value; ``stat`` is ``rate``
    per replication and ``mean`` for the summary rows.  ``asd``/``atd`` are
    skipped when ``q != 2``.
    """
    cells = [(s, q) for s in config.setups for q in config.q]
    work = partial(_classification_replication, cells, config.kernels,
                   config.n_train, config.n_test, config.seed)
    rows = [r for block in _map(work, range(config.M), jobs) for r in block]
    rows = [r[:3] + ("mean" if r[3] == "MSE" else r[3],) + r[4:] for r in _with_mse(rows, config.M)]
    return ResultTable(("setup", "q", "kernel", "stat", "replication", "value"), rows,
                       _metadata(config),
                       chart={"x": "replication", "y": "value", "where": {"stat": "rate"},
                              "group": ["setup", "q", "kernel"]})


def run(config, jobs=1):
    """Run the experiment named in ``config``; ``jobs > 1`` uses worker processes."""
    if config.experiment == "curves":
        return run_curves(config)
    if config.experiment == "bdp":
        return run_bdp(config)
    if config.experiment == "efficiency":
        return _run_location(config, False, jobs)
    if config.experiment == "robustness":
        return _run_location(config, True, jobs)
    return run_classification(config, jobs)


def summary(table, stat):
    """Summary values keyed by the columns that precede ``stat``."""
    j = table.columns.index("stat")
    return {r[:j]: r[-1] for r in table.rows if r[j] == stat}
