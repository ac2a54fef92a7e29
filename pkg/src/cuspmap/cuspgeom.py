"""Boundary traces of cusp curves and their local geometry at the origin."""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BranchAmbiguity,
    InsufficientSamples,
    MixedSigns,
    NonpositiveCoordinates,
)
from .logpow import TAU, LogSeriesCoefficients, branch_log, f_eval, f_real_deriv

# Default sampling window in |x| for traces and curvature fits.
DEFAULT_WINDOW = (1e-12, 1e-4)
DEFAULT_SAMPLES = 64
# Window used for log-log tangency fits. The power law v ~ C u**(1+d) carries a
# relative O(u) correction and u ~ 2 pi/|log x|, so the fit is taken as deep
# as double precision allows.
TANGENCY_WINDOW = (1e-300, 1e-30)
MIN_FIT_SAMPLES = 8
MIN_FIT_DECADES = 4.0
REAL_AXIS_TOL = 1e-12


class Side(str, enum.Enum):
    NEGATIVE_AXIS = "neg"
    POSITIVE_AXIS = "pos"


@dataclass(frozen=True, eq=False)
class CuspCurve:
    """Ordered samples ``(x, u(x), v(x))`` of a boundary trace."""

    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    side: Side

    def __len__(self) -> int:
        return len(self.x)

    @property
    def w(self) -> np.ndarray:
        return self.u + 1j * self.v

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "u", "v"])
        for row in zip(self.x, self.u, self.v):
            writer.writerow([repr(float(t)) for t in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CuspCurve":
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != ["x", "u", "v"]:
            raise ValueError("curve CSV must have header x,u,v")
        rows = [(float(r["x"]), float(r["u"]), float(r["v"])) for r in reader]
        if not rows:
            raise InsufficientSamples("curve CSV has no samples")
        x, u, v = (np.array(col) for col in zip(*rows))
        side = Side.NEGATIVE_AXIS if x[0] < 0 else Side.POSITIVE_AXIS
        return cls(x, u, v, side)


def log_window(lo: float, hi: float, n: int = DEFAULT_SAMPLES, side: Side = Side.NEGATIVE_AXIS) -> np.ndarray:
    """Log-spaced parameters with ``|x|`` descending from ``hi`` to ``lo``."""
    mags = np.logspace(math.log10(hi), math.log10(lo), n)
    return -mags if Side(side) is Side.NEGATIVE_AXIS else mags


def _side_of(xs: np.ndarray) -> Side:
    if np.all(xs < 0):
        return Side.NEGATIVE_AXIS
    if np.all(xs > 0):
        return Side.POSITIVE_AXIS
    raise MixedSigns("parameters must all lie on one side of 0")


def trace_boundary(s: LogSeriesCoefficients, xs) -> CuspCurve:
    """Sample the boundary image of the real parameters ``xs``.

    Negative parameters trace the curved side (log x = log|x| + i pi),
    positive ones the real interval.
    """
    xs = np.asarray(xs, dtype=float)
    side = _side_of(xs)
    if np.any(np.diff(np.abs(xs)) >= 0):
        raise ValueError("xs must be sorted by |x| strictly descending")
    w = f_eval(s, xs.astype(complex))
    return CuspCurve(xs, w.real.copy(), w.imag.copy(), side)


@dataclass(frozen=True)
class MonotonicityReport:
    passed: bool
    side: Side
    worst_margin: float
    worst_x: float
    worst_quantity: str


def monotonicity_check(s: LogSeriesCoefficients, window: tuple[float, float],
                       n_samples: int = 200) -> MonotonicityReport:
    """Check the one-to-one conditions on a window of real parameters.

    Positive windows need ``f'(x) > 0``; negative windows need ``v(x) > 0``
    and ``u'(x) < 0``. Margins are the quantities rescaled by their leading
    asymptotic size, so a margin near 1 means the leading term dominates.
    """
    x_lo, x_hi = sorted(window)
    side = _side_of(np.array([x_lo, x_hi]))
    mags = np.logspace(math.log10(abs(x_lo)), math.log10(abs(x_hi)), n_samples)
    xs = mags if side is Side.POSITIVE_AXIS else -mags
    L = np.log(mags)
    dfx = f_real_deriv(s, xs)
    margins = {}
    if side is Side.POSITIVE_AXIS:
        margins["f'"] = dfx.real * s.a * mags * L**2 / TAU
    else:
        v = f_eval(s, xs.astype(complex)).imag
        margins["v"] = v * s.a * (L**2 + math.pi**2) / (TAU * math.pi)
        margins["-u'"] = -dfx.real * s.a * mags * L**2 / TAU
    worst_name, worst_idx, worst = None, 0, math.inf
    for name, m in margins.items():
        i = int(np.argmin(m))
        if m[i] < worst:
            worst_name, worst_idx, worst = name, i, float(m[i])
    return MonotonicityReport(worst > 0, side, worst, float(xs[worst_idx]), worst_name)


def _fit_abscissa(curve: CuspCurve) -> np.ndarray:
    return 1.0 / np.log(np.abs(curve.x))


def _require_fit_samples(curve: CuspCurve) -> None:
    if len(curve) < MIN_FIT_SAMPLES:
        raise InsufficientSamples(f"need at least {MIN_FIT_SAMPLES} samples, got {len(curve)}")
    mags = np.abs(curve.x)
    if math.log10(mags.max() / mags.min()) < MIN_FIT_DECADES:
        raise InsufficientSamples(f"samples must span at least {MIN_FIT_DECADES:g} decades of |x|")


def curvature_estimate(curve: CuspCurve, degree: int = 2) -> float:
    """Curvature at the cusp from ``2 v / u**2`` extrapolated to ``1/log|x| = 0``."""
    if curve.side is not Side.NEGATIVE_AXIS:
        raise ValueError("curvature is estimated on the curved (negative-axis) side")
    _require_fit_samples(curve)
    ratio = 2.0 * curve.v / curve.u**2
    coef = np.polynomial.polynomial.polyfit(_fit_abscissa(curve), ratio, degree)
    return float(coef[0])


def power_curve(s: LogSeriesCoefficients, d: float, xs) -> CuspCurve:
    """Trace of the curve raised to the power ``1/d`` (principal branch, 1**(1/d) = 1)."""
    if not d > 0:
        raise ValueError("d must be positive")
    base = trace_boundary(s, xs)
    if d == 1:
        return base
    w = base.w
    if np.any(w == 0):
        raise BranchAmbiguity("w = 0 has no well-defined root")
    g = np.exp(branch_log(w) / d)
    return CuspCurve(base.x, g.real.copy(), g.imag.copy(), base.side)


@dataclass(frozen=True)
class TangencyEstimate:
    order_d: float
    coefficient: float
    fit_window: tuple[float, float]
    residual: float


def tangency_order_estimate(curve: CuspCurve) -> TangencyEstimate:
    """Fit ``log v = (1 + d) log u + log C`` with weights ``log(|x|)**2``."""
    if curve.side is not Side.NEGATIVE_AXIS:
        raise ValueError("tangency is estimated on the curved (negative-axis) side")
    _require_fit_samples(curve)
    if np.any(curve.u <= 0) or np.any(curve.v <= 0):
        raise NonpositiveCoordinates("u and v must be positive on the whole fit window")
    lu, lv = np.log(curve.u), np.log(curve.v)
    sw = np.abs(np.log(np.abs(curve.x)))  # sqrt of the weight 1/s**2
    A = np.column_stack([lu, np.ones_like(lu)])
    coef, *_ = np.linalg.lstsq(A * sw[:, None], lv * sw, rcond=None)
    slope, intercept = coef
    resid = lv - A @ coef
    mags = np.abs(curve.x)
    return TangencyEstimate(
        order_d=float(slope - 1.0),
        coefficient=float(math.exp(intercept)),
        fit_window=(float(mags.min()), float(mags.max())),
        residual=float(np.sqrt(np.mean(resid**2))),
    )


def is_simple_polyline(points) -> bool:
    """True when consecutive points are distinct and the polyline never crosses itself."""
    from shapely.geometry import LineString

    pts = np.asarray(points, dtype=complex)
    if len(pts) < 2:
        return True
    if np.any(np.diff(pts) == 0):
        return False
    return bool(LineString(np.column_stack([pts.real, pts.imag])).is_simple)
