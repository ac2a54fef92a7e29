"""Explicit half-plane map onto the upper half-plane minus a circular slit.

The map is given in closed form by

    1/f(z) = (1/(2 pi)) * [log((z + alpha)/z) + (2 pi - alpha)/(z + alpha)],

with ``f(0) = 0`` and ``f(z) ~ z`` at infinity. On ``-alpha < x < 0`` the
boundary values lie on the unit circle centred at ``i``; they form the arc
that is tangent to the real axis at the origin (curvature 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import powerseries as ps
from .errors import NonFiniteValue, OutOfDomain, PoleArgument
from .logpow import (
    DEFAULT_K_MAX,
    DEFAULT_N_MAX,
    TAU,
    LogSeriesCoefficients,
    _as_halfplane,
    _scalar_or_array,
    branch_log,
    f_eval,
)


@dataclass(frozen=True)
class CircularArcParams:
    """Prevertex parameter ``alpha`` of the slit map.

    ``phi0_note`` records the arc endpoint angle when known from elsewhere;
    it is never derived from ``alpha``.
    """

    alpha: float
    phi0_note: float | None = None

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be a positive finite real, got {self.alpha!r}")


def _params(p) -> CircularArcParams:
    return p if isinstance(p, CircularArcParams) else CircularArcParams(float(p))


def chr_eval(p, z):
    """Closed-form value of the slit map at ``z`` (scalar or array)."""
    p = _params(p)
    zz = _as_halfplane(z)
    shifted = zz + p.alpha
    if np.any(shifted == 0):
        raise PoleArgument(f"z = -alpha = {-p.alpha!r} is a logarithmic pole")
    denom = branch_log(shifted) - branch_log(zz) + (TAU - p.alpha) / shifted
    with np.errstate(divide="ignore", invalid="ignore"):
        out = TAU / denom
    if not np.all(np.isfinite(out)):
        raise NonFiniteValue("slit map evaluation is not finite")
    return _scalar_or_array(out, z)


def chr_eval_log(p, log_z):
    """Slit map at ``z = exp(log_z)``, for points too close to 0 for a double.

    ``log_z`` must have imaginary part in ``[0, pi]``. The value is computed
    from ``log_z`` directly, so ``log_z = -1e6`` works although ``z``
    underflows to 0.
    """
    p = _params(p)
    lz = np.asarray(log_z, dtype=complex)
    if np.any(~np.isfinite(lz)) or np.any(lz.imag < 0) or np.any(lz.imag > math.pi):
        raise OutOfDomain("log_z must be finite with imaginary part in [0, pi]")
    shifted = np.exp(lz) + p.alpha
    if np.any(shifted == 0):
        raise PoleArgument(f"z = -alpha = {-p.alpha!r} is a logarithmic pole")
    denom = branch_log(shifted) - lz + (TAU - p.alpha) / shifted
    with np.errstate(divide="ignore", invalid="ignore"):
        out = TAU / denom
    if not np.all(np.isfinite(out)):
        raise NonFiniteValue("slit map evaluation is not finite")
    return _scalar_or_array(out, log_z)


def h_coefficients(p, k_max: int = DEFAULT_K_MAX) -> np.ndarray:
    """Taylor coefficients of ``log(z + alpha) + (2 pi - alpha)/(z + alpha)``."""
    p = _params(p)
    return ps.log_shifted(p.alpha, k_max) + (TAU - p.alpha) * ps.reciprocal_shifted(p.alpha, k_max)


def chr_expand(p, n_max: int = DEFAULT_N_MAX, k_max: int = DEFAULT_K_MAX) -> LogSeriesCoefficients:
    """Expand the slit map as a log-power series with ``a = 1``.

    Row ``n`` holds the Taylor coefficients of ``h(z)**n``, since
    ``f = -2 pi / log z * sum_n (h / log z)**n``.
    """
    if n_max < 1 or k_max < 0:
        raise ValueError("need n_max >= 1 and k_max >= 0")
    h = h_coefficients(p, k_max)
    rows = ps.powers(h, n_max)
    return LogSeriesCoefficients(a=1.0, c=np.array(rows))


def chr_series_consistency(p, z_samples, n_max: int = DEFAULT_N_MAX,
                           k_max: int = DEFAULT_K_MAX) -> float:
    """Largest relative gap between the expanded series and the closed form."""
    z = np.asarray(z_samples, dtype=complex)
    series = chr_expand(p, n_max, k_max)
    exact = chr_eval(p, z)
    approx = f_eval(series, z)
    return float(np.max(np.abs(approx - exact) / np.abs(exact)))

