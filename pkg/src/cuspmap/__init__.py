"""Conformal maps of the upper half-plane onto domains whose boundary has a cusp.

Maps of the form ``f(z) = -2 pi / (a log z) * (1 + sum_n Phi_n(z) / (log z)**n)``
are handled as truncated coefficient arrays (:mod:`cuspmap.logpow`). The
explicit circular-arc slit map (:mod:`cuspmap.slitmap`) supplies a reference
case, :mod:`cuspmap.cuspgeom` inspects the boundary curve near the cusp,
:mod:`cuspmap.asymptote` checks the limiting behaviour at the cusp and
:mod:`cuspmap.oracle` builds an independent numerical map by the geodesic
zipper algorithm.
"""
from .asymptote import (
    ApproachPath,
    LimitEstimate,
    extrapolate,
    kaiser_ratio,
    power_map,
    ratio_theorem1,
    ratio_theorem2,
)
from .cuspgeom import (
    CuspCurve,
    Side,
    curvature_estimate,
    is_simple_polyline,
    log_window,
    monotonicity_check,
    power_curve,
    tangency_order_estimate,
    trace_boundary,
)
from .errors import *  # noqa: F401,F403
from .logpow import (
    AdmissibilityReport,
    Grid,
    LogSeriesCoefficients,
    branch_log,
    check_admissibility,
    f_eval,
    f_real_deriv,
    phi_deriv_eval,
    phi_eval,
)
from .oracle import (
    GeodesicMap,
    SlitPolyline,
    arc_tip_prevertex,
    circular_arc_polyline,
    compare_with_explicit,
    eval_geodesic,
    explicit_oracle,
    fit_geodesic,
    oracle_from_curve,
)
from .slitmap import CircularArcParams, chr_eval, chr_eval_log, chr_expand, chr_series_consistency

__version__ = "0.1.0"
