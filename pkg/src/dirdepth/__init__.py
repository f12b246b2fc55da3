"""Distance-based depth functions for directional data on S^{q-1}."""

__version__ = "0.1.0"

from .baseline import asd_circle, atd_circle
from .classify import DepthClassifier, classify, fit, misclassification_rate
from .deepest import DeepestOptions, DeepestResult, deepest, deepest_circle_grid
from .depth import (
    DepthValue,
    depth,
    depth_cos_closed,
    depth_profile_circle,
    depth_values,
    spherical_mean,
    vmf_population_depth,
)
from .errors import *  # noqa: F401,F403
from .quadrature import QuadratureSpec, rotsym_expectation
from .robustness import (
    bdp_lower_bound_empirical,
    bdp_lower_bound_vmf,
    circle_vmf_depth,
    constancy_diagnostic,
    depth_variance,
    max_depth_curve,
)
from .sampling import (
    ContaminatedModel,
    MixtureModel,
    VmfModel,
    mean_resultant_length,
    sample_contaminated,
    sample_mixture,
    sample_model,
    sample_uniform,
    sample_vmf,
    vmf_circle,
    vmf_density,
)
from .sphere import (
    ARC,
    CHORD,
    COS,
    DeltaSpec,
    DirectionalSample,
    Rotation,
    UnitVector,
    basis_vector,
    circle_point,
    distance,
    inner,
    random_rotation,
    squared_error,
    unit_from_components,
)
