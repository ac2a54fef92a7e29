"""Generalized power series in ``1/log z`` and their evaluation.

The central object is the truncated representation

    f(z) = -2*pi / (a log z) * (1 + sum_{n=1}^{N} Phi_n(z) / log(z)**n),
    Phi_n(z) = sum_{k=0}^{K} c[n, k] z**k,

on the closed upper half-plane, with the branch of ``log`` fixed by
``log(i) = i*pi/2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from . import powerseries as ps
from .errors import (
    EmptyGrid,
    IndexOutOfRange,
    NonFiniteValue,
    NonpositiveRadius,
    OutOfDomain,
    OutsideTrustRadius,
    ZeroArgument,
)

TAU = 2.0 * math.pi

# Relative slack for points that sit on the real axis up to rounding.
IM_TOL = 1e-12
C10_TOL = 1e-10
DEFAULT_N_MAX = 8
DEFAULT_K_MAX = 16
DEFAULT_RADIUS = 0.1
# Largest ratio bound/|log z| accepted when picking the convergence radius.
CONV_SAFETY = 0.5
# Growth of the running maximum of the n-th (or k-th) roots across the upper
# half of the rows above which a row is flagged. Only a diagnostic: on eight
# or sixteen terms, saturating admissible sequences and factorial growth
# overlap, so the verdict rests on finiteness of the sampled sup.
GROWTH_FLAG = 1.5


def _scalar_or_array(out: np.ndarray, like):
    return out[()] if np.ndim(like) == 0 else out


def _as_halfplane(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise NonFiniteValue("argument contains NaN or infinity")
    if np.any(z == 0):
        raise ZeroArgument("log is singular at z = 0")
    if np.any(z.imag < -IM_TOL * np.abs(z)):
        raise OutOfDomain("argument lies in the lower half-plane")
    return z


def branch_log(z):
    """Logarithm on the closed upper half-plane with ``arg z`` in ``[0, pi]``.

    Points with a tiny negative imaginary part (rounding noise, including
    ``-0.0``) are treated as lying on the real axis, so ``branch_log(-1)``
    is ``i*pi`` regardless of the sign of the zero.
    """
    zz = _as_halfplane(z)
    im = np.where(zz.imag > 0, zz.imag, 0.0)
    out = np.log(np.abs(zz)) + 1j * np.arctan2(im, zz.real)
    return _scalar_or_array(out, z)


@dataclass(frozen=True, eq=False)
class LogSeriesCoefficients:
    """Scale ``a`` and the real coefficient matrix ``c`` (row ``n-1`` holds Phi_n).

    ``trust_radius`` overrides the convergence radius that would otherwise be
    estimated by :func:`check_admissibility` on first use.
    """

    a: float
    c: np.ndarray
    trust_radius: float | None = field(default=None)

    def __post_init__(self):
        a = float(self.a)
        if not (math.isfinite(a) and a > 0):
            raise ValueError(f"scale a must be a positive finite real, got {self.a!r}")
        c = np.array(self.c, dtype=float, copy=True)
        if c.ndim != 2 or c.shape[0] < 1 or c.shape[1] < 1:
            raise ValueError("c must be a matrix with n_max >= 1 rows and k_max + 1 >= 1 columns")
        if not np.all(np.isfinite(c)):
            raise NonFiniteValue("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)
        if self.trust_radius is not None and not self.trust_radius > 0:
            raise NonpositiveRadius("trust_radius must be positive")

    @property
    def n_max(self) -> int:
        return self.c.shape[0]

    @property
    def k_max(self) -> int:
        return self.c.shape[1] - 1

    @classmethod
    def zeros(cls, n_max: int = DEFAULT_N_MAX, k_max: int = DEFAULT_K_MAX, a: float = 1.0):
        return cls(a=a, c=np.zeros((n_max, k_max + 1)))

    def with_coefficients(self, updates: dict[tuple[int, int], float]) -> "LogSeriesCoefficients":
        """Copy with ``c[n, k]`` replaced for each ``(n, k)`` key (n is 1-based)."""
        c = np.array(self.c)
        for (n, k), value in updates.items():
            c[n - 1, k] = value
        return replace(self, c=c, trust_radius=None)

    def scaled(self, factor: float) -> "LogSeriesCoefficients":
        """Same coefficients with ``a`` multiplied by ``factor``."""
        return replace(self, a=self.a * factor, trust_radius=None)

    def truncated(self, n_max: int, k_max: int) -> "LogSeriesCoefficients":
        return replace(self, c=self.c[:n_max, : k_max + 1], trust_radius=None)

    @cached_property
    def conv_radius(self) -> float:
        if self.trust_radius is not None:
            return self.trust_radius
        return check_admissibility(self).conv_radius

    @cached_property
    def _row_growth(self) -> np.ndarray:
        """Per-row geometric growth rate from the upper half of the k-range."""
        k = np.arange(self.k_max + 1)
        lo = max(1, self.k_max // 2)
        rates = np.zeros(self.n_max)
        if self.k_max >= 1:
            roots = np.abs(self.c[:, lo:]) ** (1.0 / k[lo:])
            rates = roots.max(axis=1)
        return rates

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "n_max": self.n_max,
            "k_max": self.k_max,
            "c": self.c.tolist(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, doc: dict) -> "LogSeriesCoefficients":
        try:
            a = doc["a"]
            n_max = int(doc["n_max"])
            k_max = int(doc["k_max"])
            rows = doc["c"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed series document: {exc}") from None
        if len(rows) != n_max or any(len(r) != k_max + 1 for r in rows):
            raise ValueError("coefficient matrix shape disagrees with n_max/k_max")
        return cls(a=a, c=np.array(rows, dtype=float))

    @classmethod
    def from_json(cls, text: str) -> "LogSeriesCoefficients":
        return cls.from_dict(json.loads(text))


def _check_row(s: LogSeriesCoefficients, n: int) -> None:
    if not 1 <= n <= s.n_max:
        raise IndexOutOfRange(f"n={n} outside [1, {s.n_max}]")


def phi_eval(s: LogSeriesCoefficients, n: int, z):
    """Phi_n(z) = sum_k c[n, k] z**k."""
    _check_row(s, n)
    out = ps.horner(s.c[n - 1], np.asarray(z, dtype=complex))
    return _scalar_or_array(out, z)


def phi_deriv_eval(s: LogSeriesCoefficients, n: int, z):
    """Phi_n'(z) = sum_{k>=1} k c[n, k] z**(k-1)."""
    _check_row(s, n)
    out = ps.horner(ps.derivative(s.c[n - 1]), np.asarray(z, dtype=complex))
    return _scalar_or_array(out, z)


def _phi_all(s: LogSeriesCoefficients, z: np.ndarray) -> np.ndarray:
    return np.stack([ps.horner(row, z) for row in s.c])


def _phi_deriv_all(s: LogSeriesCoefficients, z: np.ndarray) -> np.ndarray:
    return np.stack([ps.horner(ps.derivative(row), z) for row in s.c])


def _check_radius(s: LogSeriesCoefficients, z: np.ndarray) -> None:
    r = s.conv_radius
    if np.any(np.abs(z) >= r):
        worst = np.max(np.abs(z))
        raise OutsideTrustRadius(f"|z|={worst:.3g} is not below the trust radius {r:.3g}")


def f_eval(s: LogSeriesCoefficients, z, *, with_tail: bool = False):
    """Evaluate the truncated representation at ``z`` in the closed upper half-plane.

    With ``with_tail=True`` the return value is ``(value, tail)`` where ``tail``
    bounds the absolute contribution of the discarded terms (rows beyond
    ``n_max`` and powers beyond ``k_max``), assuming the geometric growth
    seen in the retained coefficients persists.
    """
    zz = _as_halfplane(z)
    _check_radius(s, zz)
    L = branch_log(zz)
    y = 1.0 / L
    phis = _phi_all(s, zz)
    acc = phis[-1]
    for n in range(s.n_max - 2, -1, -1):
        acc = acc * y + phis[n]
    acc = acc * y + 1.0
    pref = -TAU / (s.a * L)
    value = pref * acc
    if not np.all(np.isfinite(value)):
        raise NonFiniteValue("series evaluation overflowed")
    if not with_tail:
        return _scalar_or_array(value, z)
    tail = _truncation_tail(s, zz, L, phis, np.abs(pref))
    return _scalar_or_array(value, z), _scalar_or_array(tail, z)


def _truncation_tail(s, z, L, phis, abs_pref):
    absL = np.abs(L)
    n = np.arange(1, s.n_max + 1).reshape((-1,) + (1,) * z.ndim)
    q = (np.abs(phis) ** (1.0 / n)).max(axis=0) / absL
    with np.errstate(divide="ignore", over="ignore"):
        n_tail = np.where(q < 1, q ** (s.n_max + 1) / (1 - q), np.inf)
        rho = np.abs(z)[None] * s._row_growth.reshape(n.shape)
        k_tail = np.where(rho < 1, rho ** (s.k_max + 1) / (1 - rho), np.inf)
        k_tail = (k_tail / absL[None] ** n).sum(axis=0)
    return abs_pref * (n_tail + k_tail)


def f_real_deriv(s: LogSeriesCoefficients, x):
    """Derivative of the representation along the real axis.

    Uses the term-wise formula

        f'(x) = 2 pi / (a log^2 x) * [ sum_{n>=0} (n+1) Phi_n(x) / (x log^n x)
                                       - sum_{n>=1} Phi_n'(x) / log^(n-1) x ]

    with ``Phi_0 = 1``. For ``x > 0`` the result is real (returned with zero
    imaginary part); for ``x < 0`` the logarithm is ``log|x| + i pi`` and the
    result is ``u'(x) + i v'(x)``.
    """
    xr = np.asarray(x, dtype=float)
    zz = _as_halfplane(xr.astype(complex))
    _check_radius(s, zz)
    L = branch_log(zz)
    y = 1.0 / L
    phis = _phi_all(s, zz)
    dphis = _phi_deriv_all(s, zz)
    # sum_{n>=0} (n+1) Phi_n y^n and sum_{n>=1} Phi_n' y^(n-1), nested in y
    first = (s.n_max + 1) * phis[-1]
    for n in range(s.n_max - 1, 0, -1):
        first = first * y + (n + 1) * phis[n - 1]
    first = first * y + 1.0
    second = dphis[-1]
    for n in range(s.n_max - 1, 0, -1):
        second = second * y + dphis[n - 1]
    out = TAU / (s.a * L * L) * (first / zz - second)
    if not np.all(np.isfinite(out)):
        raise NonFiniteValue("derivative evaluation overflowed")
    return _scalar_or_array(out, x)


# -- admissibility -----------------------------------------------------


@dataclass(frozen=True)
class Grid:
    """Polar sampling of the closed half-disk ``{|z| <= r, Im z >= 0}``.

    Angles include 0 and pi, so both real segments are covered; the origin is
    always included.
    """

    n_radial: int = 8
    n_angular: int = 17

    def points(self, radius: float) -> np.ndarray:
        if self.n_radial < 1 or self.n_angular < 2:
            raise EmptyGrid("grid needs at least one radius and two angles")
        r = np.linspace(radius / self.n_radial, radius, self.n_radial)
        th = np.linspace(0.0, math.pi, self.n_angular)
        pts = (r[:, None] * np.exp(1j * th[None, :])).ravel()
        return np.concatenate([[0.0 + 0.0j], pts])


@dataclass(frozen=True)
class CoefficientGrowth:
    passed: bool
    bound_M: float
    growth: float
    flagged_rows: tuple[int, ...] = ()


@dataclass(frozen=True)
class UniformBound:
    passed: bool
    bound: float
    radius: float
    growth: float = 1.0
    row_bounds: tuple[float, ...] = ()


@dataclass(frozen=True)
class LeadingTerm:
    passed: bool
    c10: float


@dataclass(frozen=True)
class AdmissibilityReport:
    cond_i: CoefficientGrowth
    cond_ii: UniformBound
    cond_iii: UniformBound
    cond_iv: LeadingTerm
    conv_radius: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in (self.cond_i, self.cond_ii, self.cond_iii, self.cond_iv))

    def failed_conditions(self) -> list[str]:
        names = ("cond_i", "cond_ii", "cond_iii", "cond_iv")
        return [name for name in names if not getattr(self, name).passed]

    def to_dict(self) -> dict:
        def enc(x):
            return x if math.isfinite(x) else str(x)

        return {
            "passed": bool(self.passed),
            "cond_i": {"pass": bool(self.cond_i.passed), "bound_M": self.cond_i.bound_M,
                       "growth": self.cond_i.growth, "flagged_rows": [int(n) for n in self.cond_i.flagged_rows]},
            "cond_ii": {"pass": bool(self.cond_ii.passed), "bound": self.cond_ii.bound,
                        "radius": self.cond_ii.radius, "growth": self.cond_ii.growth},
            "cond_iii": {"pass": bool(self.cond_iii.passed), "bound": self.cond_iii.bound,
                         "radius": self.cond_iii.radius, "growth": self.cond_iii.growth},
            "cond_iv": {"pass": bool(self.cond_iv.passed), "c10": self.cond_iv.c10},
            "conv_radius": enc(self.conv_radius),
        }


def _envelope_growth(values: np.ndarray) -> float:
    """Ratio of the running maximum at the last entry to that at the midpoint."""
    env = np.maximum.accumulate(values)
    mid = env[max(len(env) // 2 - 1, 0)]
    return float(env[-1] / mid) if mid > 0 else (1.0 if env[-1] == 0 else math.inf)


def _coefficient_growth(c: np.ndarray) -> CoefficientGrowth:
    k_max = c.shape[1] - 1
    if k_max < 1:
        return CoefficientGrowth(True, 0.0, 1.0)
    k = np.arange(1, k_max + 1)
    roots = np.abs(c[:, 1:]) ** (1.0 / k)
    bound = float(roots.max())
    growth = [_envelope_growth(row) for row in roots]
    flagged = tuple(n for n, g in enumerate(growth, start=1) if g > GROWTH_FLAG)
    return CoefficientGrowth(math.isfinite(bound), bound, max(growth), flagged)


def _uniform(values: np.ndarray, radius: float) -> UniformBound:
    bound = float(values.max())
    return UniformBound(math.isfinite(bound), bound, radius, _envelope_growth(values),
                        tuple(float(v) for v in values))


def check_admissibility(s: LogSeriesCoefficients, radius: float = DEFAULT_RADIUS,
                        grid: Grid | None = None) -> AdmissibilityReport:
    """Numerical check of the four admissibility conditions on a truncation.

    Conditions (ii) and (iii) are sampled on ``grid`` over the half-disk of
    the given radius. The returned ``conv_radius`` is the largest radius at
    which the sampled bound ``B`` satisfies ``B / |log r| <= 1/2``, capped by
    ``radius`` whenever the Phi_n actually depend on z.
    """
    if not (math.isfinite(radius) and radius > 0):
        raise NonpositiveRadius(f"radius must be positive, got {radius!r}")
    grid = grid or Grid()
    z = grid.points(radius)
    n = np.arange(1, s.n_max + 1)[:, None]
    phi_roots = (np.abs(_phi_all(s, z)) ** (1.0 / n)).max(axis=1)
    dphi_roots = (np.abs(_phi_deriv_all(s, z)) ** (1.0 / n)).max(axis=1)

    cond_i = _coefficient_growth(s.c)
    cond_ii = _uniform(phi_roots, radius)
    cond_iii = _uniform(dphi_roots, radius)
    c10 = float(s.c[0, 0])
    cond_iv = LeadingTerm(abs(c10) > C10_TOL, c10)

    B = cond_ii.bound
    r_series = math.exp(-B / CONV_SAFETY) if B > 0 else math.inf
    depends_on_z = s.k_max >= 1 and bool(np.any(s.c[:, 1:] != 0))
    conv = min(radius, r_series) if depends_on_z else r_series
    return AdmissibilityReport(cond_i, cond_ii, cond_iii, cond_iv, conv)
