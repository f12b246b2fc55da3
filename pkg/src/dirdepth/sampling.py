"""Reproducible draws from vMF laws, their mixtures and contaminated versions.

vMF draws use the tangent-normal decomposition ``x = t theta_0 + sqrt(1-t^2) xi``.
The cosine ``t`` comes from Wood's (1994) beta-envelope rejection sampler; the
tangent direction ``xi`` is uniform on the unit sphere of the tangent space,
which is spanned by the first q-1 columns of a Householder reflection taking
``e_q`` to ``theta_0``.

Each sampler is a pure function of ``(model, n, seed)``.  Draws are prefix
stable: the first ``m`` points of an ``n``-point sample equal the ``m``-point
sample for the same seed.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.special import gammaln

from .errors import DimMismatch
from .quadrature import DEFAULT_QUAD, log_vmf_angle_integral, rotsym_expectation
from .rng import Stream, derive_seed
from .sphere import DirectionalSample, UnitVector, as_unit

log = logging.getLogger(__name__)

# stream indices under a sampler seed
_COSINE_STREAM = 0
_TANGENT_STREAM = 1
_LABEL_STREAM = 2
_ATOM_STREAM = 3


@dataclass(frozen=True)
class VmfModel:
    mode: UnitVector
    kappa: float

    def __post_init__(self):
        object.__setattr__(self, "mode", as_unit(self.mode))
        if not self.kappa >= 0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")

    @property
    def q(self):
        return self.mode.dim


@dataclass(frozen=True)
class MixtureModel:
    components: Sequence[VmfModel]
    weights: Sequence[float]

    def __post_init__(self):
        comps = tuple(self.components)
        w = np.asarray(self.weights, dtype=np.float64)
        if not comps or len(comps) != w.size:
            raise ValueError("need one weight per component")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be nonnegative and sum to 1")
        if len({c.q for c in comps}) != 1:
            raise DimMismatch("mixture components must share q")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "weights", tuple(float(x) for x in w))

    @property
    def q(self):
        return self.components[0].q


@dataclass(frozen=True)
class ContaminatedModel:
    base: Union[VmfModel, MixtureModel]
    eps: float
    atom: UnitVector

    def __post_init__(self):
        object.__setattr__(self, "atom", as_unit(self.atom))
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError("eps must lie in [0, 1]")
        if self.atom.dim != self.base.q:
            raise DimMismatch("atom and base model differ in dimension")

    @property
    def q(self):
        return self.base.q


def vmf_circle(alpha, kappa):
    """vMF model on the circle with modal angle ``alpha``."""
    return VmfModel(UnitVector(np.array([np.cos(alpha), np.sin(alpha)])), kappa)


# --- samplers ---------------------------------------------------------------

def _beta_sym(stream, q, count):
    # first coordinate of a uniform point on S^{q-1}, mapped to [0, 1], is
    # Beta((q-1)/2, (q-1)/2)
    g = stream.normal(count * q).reshape(count, q)
    return 0.5 * (1.0 + g[:, 0] / np.linalg.norm(g, axis=1))


def sample_vmf_cosines(q, kappa, n, seed):
    """``n`` draws of ``t = x'theta_0``, density proportional to (1-t^2)^{(q-3)/2} e^{kappa t}."""
    stream = Stream(derive_seed(seed, _COSINE_STREAM))
    d = q - 1.0
    b = d / (np.sqrt(4.0 * kappa * kappa + d * d) + 2.0 * kappa)
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + d * np.log1p(-x0 * x0)
    out = np.empty(n)
    filled = proposed = 0
    while filled < n:
        batch = (n - filled) + (n - filled) // 4 + 16
        z = _beta_sym(stream, q, batch)
        u = stream.uniform(batch)
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
        ok = kappa * w + d * np.log1p(-x0 * w) - c >= np.log1p(-u)
        hits = np.flatnonzero(ok)[: n - filled]
        out[filled:filled + hits.size] = w[hits]
        filled += hits.size
        proposed += batch if filled < n else int(hits[-1]) + 1
    log.debug("vMF cosine sampler q=%d kappa=%g: acceptance %.3f", q, kappa, n / proposed)
    return np.clip(out, -1.0, 1.0)


def householder_frame(mode):
    """Orthogonal matrix whose last column is ``mode``.

    Reflects ``e_q`` onto ``-mode`` along ``e_q + mode`` when the last
    coordinate of ``mode`` is positive (and negates), otherwise onto ``mode``
    along ``e_q - mode``; the reflection vector never cancels.
    """
    m = as_unit(mode).coords
    q = m.size
    e = np.zeros(q)
    e[-1] = 1.0
    if m[-1] > 0:
        v = e + m
        sign = -1.0
    else:
        v = e - m
        sign = 1.0
    vv = v @ v
    if vv == 0.0:
        return np.eye(q)
    H = np.eye(q) - 2.0 * np.outer(v, v) / vv
    return sign * H


def _tangent_directions(q, n, seed):
    g = Stream(derive_seed(seed, _TANGENT_STREAM)).normal(n * (q - 1)).reshape(n, q - 1)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def sample_uniform(q, n, seed):
    """``n`` uniform points on S^{q-1} (normalized Gaussian vectors)."""
    g = Stream(derive_seed(seed, _COSINE_STREAM)).normal(n * q).reshape(n, q)
    return DirectionalSample._trusted(g / np.linalg.norm(g, axis=1, keepdims=True))


def sample_vmf(model, n, seed):
    """``n`` i.i.d. draws from a vMF model; ``kappa == 0`` is exact uniform."""
    if n < 1:
        raise ValueError("n must be positive")
    q = model.q
    if model.kappa == 0:
        return sample_uniform(q, n, seed)
    t = sample_vmf_cosines(q, model.kappa, n, seed)
    xi = _tangent_directions(q, n, seed)
    local = np.empty((n, q))
    local[:, :-1] = np.sqrt(1.0 - t * t)[:, None] * xi
    local[:, -1] = t
    pts = local @ householder_frame(model.mode).T
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return DirectionalSample._trusted(pts)


def _component_labels(weights, n, seed):
    u = Stream(derive_seed(seed, _LABEL_STREAM)).uniform(n)
    cdf = np.cumsum(weights)
    cdf[-1] = 1.0
    return np.searchsorted(cdf, u, side="right")


def sample_mixture(model, n, seed):
    """Draw a component per point by weight, then sample it.

    Component ``k`` reads its points, in order, from the vMF sampler seeded
    with ``derive_seed(seed, 16 + k)``.
    """
    if isinstance(model, VmfModel):
        return sample_vmf(model, n, seed)
    labels = _component_labels(model.weights, n, seed)
    pts = np.empty((n, model.q))
    for k, comp in enumerate(model.components):
        idx = np.flatnonzero(labels == k)
        if idx.size:
            pts[idx] = sample_vmf(comp, idx.size, derive_seed(seed, 16 + k)).points
    return DirectionalSample._trusted(pts)


def sample_model(model, n, seed):
    """Dispatch on model type."""
    if isinstance(model, ContaminatedModel):
        return sample_contaminated(model, n, seed)
    return sample_mixture(model, n, seed)


def sample_contaminated(model, n, seed):
    """Each point is the atom with probability ``eps``, else a base draw.

    The base draws are exactly ``sample_model(model.base, n, seed)``; the atom
    indicators come from a separate stream, so ``eps = 0`` returns the base
    sample unchanged.
    """
    base = sample_model(model.base, n, seed)
    if model.eps == 0:
        return base
    u = Stream(derive_seed(seed, _ATOM_STREAM)).uniform(n)
    hit = u < model.eps
    pts = base.points.copy()
    pts[hit] = model.atom.coords
    return DirectionalSample._trusted(pts)


# --- densities and moments -------------------------------------------------

def log_sphere_area(q):
    """Log surface area of S^{q-1} in R^q."""
    return np.log(2.0) + 0.5 * q * np.log(np.pi) - gammaln(0.5 * q)


def vmf_log_normalizer(q, kappa, quad=DEFAULT_QUAD):
    """``log c`` with ``c exp(kappa x'theta_0)`` a probability density on S^{q-1}."""
    if kappa == 0:
        return -log_sphere_area(q)
    return -(log_sphere_area(q - 1) + log_vmf_angle_integral(q, kappa, quad))


def vmf_density(model, x, quad=DEFAULT_QUAD):
    """Density of ``model`` at ``x`` with respect to surface measure."""
    x = as_unit(x)
    if x.dim != model.q:
        raise DimMismatch(f"dimension {x.dim} != {model.q}")
    logc = vmf_log_normalizer(model.q, model.kappa, quad)
    return float(np.exp(logc + model.kappa * (x.coords @ model.mode.coords)))


def mean_resultant_length(q, kappa, quad=DEFAULT_QUAD):
    """``||E[W]||`` under vMF(q, kappa), i.e. ``E[t]``."""
    if not kappa >= 0:
        raise ValueError("kappa must be nonnegative")
    if kappa == 0:
        return 0.0
    return rotsym_expectation(lambda v: v, q, kappa, quad)
