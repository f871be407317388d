"""Conformally flat Lorentzian slices of the null cone of R^{2,n}.

Build a slice X_f of the cone, deform it by y -> exp(l(y)) y into X_k with
k = exp(-l) f, and check numerically that the induced metrics differ by the
Weyl factor exp(2l) and that SO(2,n) acts conformally on both.
"""

from .ambient import Signature, as_vector, cone_constraint, dilation_at, inner, lower_index, raise_index
from .embedding import (
    Deformation,
    deformation_campaign,
    deformed_chart,
    lambda_map,
    lambda_pushforward,
    transported_pushforward,
    weyl_residual,
)
from .errors import *  # noqa: F401,F403
from .flrw import (
    FlrwSpace,
    OsculatingResult,
    SliceKind,
    StandardSlice,
    build_flrw,
    flrw_metric_residual,
    osculating_slice,
    standard_slice,
)
from .group import (
    AlgebraElement,
    GroupElement,
    act_on_slice,
    algebra_basis,
    conformal_factor_residual,
    exponential,
    group_campaign,
    random_group_element,
    tangent_action,
    transported_tangent_action,
)
from .homogeneous import (
    HomogeneousFn,
    ScaleFactor,
    check_homogeneity,
    compose_k,
    euler_residual,
    extend_scale_factor,
    linear_form,
    parse_scale_factor,
)
from .reports import VerificationReport
from .slices import (
    MetricSample,
    SliceChart,
    SlicePoint,
    ds_graph_chart,
    induced_metric,
    minkowski_null_chart,
    ray_project,
    scalar_curvature,
    slice_residuals,
    tangent_basis,
)

__version__ = "0.1.0"
