"""Ratio sampling along paths into the cusp and extrapolation in ``1/log t``.

Corrections to the limits decay only like ``1/log|z|``, so raw ratios at
``|z| = 1e-12`` still miss the limit by several percent. Every limit is
therefore read off as the intercept of a polynomial fit in ``s = 1/log t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluatorFailure, PathOutsideSector, SingularFit
from .logpow import TAU, branch_log

DEFAULT_T = np.logspace(-4, -16, 48)
DEFAULT_DEGREE = 3
# Rows of the least-squares system are scaled by |log t|**WEIGHT_POWER, which
# concentrates the fit on the deepest samples. With weaker weighting the RMS
# residual understates the extrapolation bias of the intercept.
WEIGHT_POWER = 6

MapEvaluator = Callable[[complex], complex]


@dataclass(frozen=True, eq=False)
class ApproachPath:
    kind: str
    t_values: np.ndarray
    theta: float | None = None
    points: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.t_values, dtype=float)
        if t.ndim != 1 or len(t) < 2 or np.any(t <= 0) or np.any(np.diff(t) >= 0):
            raise ValueError("t_values must be positive and strictly decreasing")
        object.__setattr__(self, "t_values", t)
        if np.any(self.z.imag <= 0):
            raise ValueError("path must stay in the open upper half-plane")

    @classmethod
    def vertical(cls, t=None) -> "ApproachPath":
        return cls("vertical", DEFAULT_T if t is None else t, theta=math.pi / 2)

    @classmethod
    def ray(cls, theta: float, t=None) -> "ApproachPath":
        if not 0 < theta < math.pi:
            raise ValueError("ray angle must lie in (0, pi)")
        return cls("ray", DEFAULT_T if t is None else t, theta=float(theta))

    @classmethod
    def custom(cls, points) -> "ApproachPath":
        pts = np.asarray(points, dtype=complex)
        return cls("custom", np.abs(pts), points=pts)

    @classmethod
    def parse(cls, spec: str, t=None) -> "ApproachPath":
        """Build a path from ``"vertical"`` or ``"ray:<theta>"``."""
        if spec == "vertical":
            return cls.vertical(t)
        if spec.startswith("ray:"):
            return cls.ray(float(spec[4:]), t)
        raise ValueError(f"unknown path spec {spec!r}")

    @property
    def z(self) -> np.ndarray:
        if self.points is not None:
            return self.points
        if self.kind == "vertical":
            return 1j * self.t_values
        return self.t_values * np.exp(1j * self.theta)

    @property
    def max_arg(self) -> float:
        return float(np.max(np.angle(self.z)))


@dataclass(frozen=True, eq=False)
class LimitEstimate:
    t: np.ndarray
    ratios: np.ndarray
    extrapolated: complex
    order_estimate: float
    fit_residual: float
    degree: int = DEFAULT_DEGREE

    def to_dict(self) -> dict:
        return {
            "ratios": [[float(t), float(r.real), float(r.imag)] for t, r in zip(self.t, self.ratios)],
            "extrapolated": [float(self.extrapolated.real), float(self.extrapolated.imag)],
            "residual": float(self.fit_residual),
        }


def _design(t: np.ndarray, degree: int) -> np.ndarray:
    s = 1.0 / np.log(t)
    return np.vander(s, degree + 1, increasing=True)


def extrapolate(t, values, degree: int = DEFAULT_DEGREE,
                weight_power: float = WEIGHT_POWER) -> tuple[complex, float]:
    """Weighted least-squares fit of ``values`` in powers of ``1/log t``.

    Returns the constant term and the unweighted RMS residual of the fit.
    """
    t = np.asarray(t, dtype=float)
    vals = np.asarray(values, dtype=complex)
    if len(t) < degree + 2:
        raise SingularFit(f"need at least {degree + 2} samples for degree {degree}")
    if len(np.unique(t)) != len(t) or np.any(t == 1) or np.any(t <= 0):
        raise SingularFit("t values must be distinct, positive and different from 1")
    A = _design(t, degree)
    w = np.abs(np.log(t)) ** weight_power
    Aw = A * w[:, None]
    if np.linalg.matrix_rank(Aw) < degree + 1:
        raise SingularFit("design matrix is rank deficient")
    coef, *_ = np.linalg.lstsq(Aw, vals * w, rcond=None)
    resid = vals - A @ coef
    return complex(coef[0]), float(np.sqrt(np.mean(np.abs(resid) ** 2)))


def _order_estimate(t: np.ndarray, ratios: np.ndarray, limit: complex) -> float:
    dev = np.abs(ratios - limit)
    keep = dev > 0
    if keep.sum() < 2:
        return math.nan
    s = np.abs(1.0 / np.log(t[keep]))
    return float(np.polyfit(np.log(s), np.log(dev[keep]), 1)[0])


def _evaluate(map_eval: MapEvaluator, z: np.ndarray) -> np.ndarray:
    out = np.empty(len(z), dtype=complex)
    for i, zi in enumerate(z):
        try:
            val = complex(map_eval(complex(zi)))
        except Exception as exc:  # noqa: BLE001 - reported with the point
            raise EvaluatorFailure(complex(zi), exc) from exc
        if not (math.isfinite(val.real) and math.isfinite(val.imag)):
            raise EvaluatorFailure(complex(zi), "non-finite value")
        out[i] = val
    return out


def _estimate(map_eval, path: ApproachPath, normalizer, exponent: float, degree: int) -> LimitEstimate:
    t = path.t_values
    vals = _evaluate(map_eval, path.z)
    norm = normalizer(t) ** exponent
    ratios = vals / norm
    limit, resid = extrapolate(t, ratios, degree)
    return LimitEstimate(t, ratios, limit, _order_estimate(t, ratios, limit), resid, degree)


def _check_positive(**kw):
    for name, val in kw.items():
        if not (math.isfinite(val) and val > 0):
            raise ValueError(f"{name} must be positive, got {val!r}")


def ratio_theorem1(map_eval: MapEvaluator, a: float, path: ApproachPath,
                   degree: int = DEFAULT_DEGREE) -> LimitEstimate:
    """Limit of ``g(z) / (-2 pi / (a log|z|))`` as ``z -> 0`` along ``path``."""
    _check_positive(a=a)
    return _estimate(map_eval, path, lambda t: -TAU / (a * np.log(t)), 1.0, degree)


def _check_sector(path: ApproachPath, d: float) -> None:
    if d > 1 and path.max_arg >= math.pi / d:
        raise PathOutsideSector(f"arg z must stay below pi/d = {math.pi / d:.6g}")


def ratio_theorem2(map_eval: MapEvaluator, a: float, d: float, path: ApproachPath,
                   degree: int = DEFAULT_DEGREE) -> LimitEstimate:
    """Limit of ``g(z) * (-2 pi / (d a log|z|))**(-1/d)``; equals ratio_theorem1 at d = 1."""
    _check_positive(a=a, d=d)
    _check_sector(path, d)
    return _estimate(map_eval, path, lambda t: -TAU / (d * a * np.log(t)), 1.0 / d, degree)


def kaiser_ratio(map_eval: MapEvaluator, a_kaiser: float, d: float, path: ApproachPath,
                 degree: int = DEFAULT_DEGREE) -> LimitEstimate:
    """Limit of ``f(z) * (-pi / (d a log|z|))**(-1/d)`` with Kaiser's angle coefficient.

    Kaiser's coefficient describes the opening angle ``~ a t**d``; for a curve
    with ``v = (a_curv/2) u**2`` it equals ``a_curv / 2``, which is the value
    that makes this ratio tend to 1.
    """
    _check_positive(a_kaiser=a_kaiser, d=d)
    _check_sector(path, d)
    return _estimate(map_eval, path, lambda t: -math.pi / (d * a_kaiser * np.log(t)), 1.0 / d, degree)


def power_map(map_eval: MapEvaluator, d: float) -> MapEvaluator:
    """``z -> f(z**d)**(1/d)`` with principal branches (``1**(1/d) = 1``)."""
    _check_positive(d=d)
    if d == 1:
        return map_eval

    def g(z):
        zd = np.exp(d * branch_log(z))
        return np.exp(branch_log(map_eval(zd)) / d)

    return g
