"""Independent numerical conformal map onto the half-plane minus a slit.

The slit is given as a polyline starting at the origin. It is "unzipped" by
the geodesic algorithm: each stage maps the upper half-plane minus the
hyperbolic geodesic from 0 to the current image of the next vertex back onto
the upper half-plane, sending that vertex to 0. A stage is

    T(z) = b z / (b - z),  b = |a|**2 / Re a     (geodesic -> [0, i c])
    S(T) = sqrt(T**2 + c**2),  c = |a|**2 / Im a (remove the segment)
    M(w) = w / (1 - w / S(T(inf))) / kappa       (hydrodynamic renormalization)

so every stage fixes infinity with unit derivative there, which keeps the
prevertices bounded over hundreds of stages. The conformal map onto the slit
domain is the inverse composition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize_scalar

from .cuspgeom import CuspCurve, is_simple_polyline
from .errors import (
    CuspMapError,
    DegenerateSegment,
    NonFiniteValue,
    SelfIntersectingInput,
    SingularPoint,
)
from .logpow import TAU
from .slitmap import CircularArcParams, chr_eval

DEFAULT_VERTICES = 400
# Relative distance from -alpha at which a closed circular boundary is cut open.
CLOSURE_GAP = 1e-4


@dataclass(frozen=True)
class SlitPolyline:
    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex)
        if v.ndim != 1 or len(v) < 2:
            raise ValueError("a slit needs at least two vertices")
        if v[0] != 0:
            raise ValueError("the slit must start at the origin")
        if np.any(v[1:].imag <= 0):
            raise ValueError("vertices after the first must have positive imaginary part")
        if np.any(np.diff(v) == 0):
            raise DegenerateSegment("consecutive vertices coincide")
        if not is_simple_polyline(v):
            raise SelfIntersectingInput("slit polyline crosses itself")
        object.__setattr__(self, "vertices", v)

    @property
    def h(self) -> float:
        return float(np.abs(np.diff(self.vertices)).max())

    @classmethod
    def from_curve(cls, curve: CuspCurve) -> "SlitPolyline":
        """Polyline from the origin outwards through the traced samples."""
        order = np.argsort(np.abs(curve.x))
        return cls(np.concatenate([[0.0], curve.w[order]]))


@dataclass(frozen=True)
class Stage:
    b: float
    c: float
    s_inf: float
    kappa: float

    @classmethod
    def opening(cls, a: complex) -> "Stage":
        b = math.inf if a.real == 0 else abs(a) ** 2 / a.real
        c = abs(a) ** 2 / a.imag
        if math.isinf(b):
            return cls(b, c, math.inf, 1.0)
        r = math.hypot(b, c)
        return cls(b, c, -math.copysign(r, b), (r / abs(b)) ** 3)

    def _renormalize(self, w):
        if math.isinf(self.s_inf):
            return w
        return w / (1.0 - w / self.s_inf) / self.kappa

    def forward(self, z):
        """Slit domain of this stage -> upper half-plane."""
        z = np.asarray(z, dtype=complex)
        T = z if math.isinf(self.b) else self.b * z / (self.b - z)
        w = np.sqrt(T * T + self.c * self.c)
        flip = (w.imag < 0) | ((w.imag == 0) & (np.sign(w.real) != np.sign(T.real)))
        return self._renormalize(np.where(flip, -w, w))

    def inverse(self, zeta):
        """Upper half-plane -> slit domain of this stage."""
        w = np.asarray(zeta, dtype=complex) * self.kappa
        if not math.isinf(self.s_inf):
            w = w / (1.0 + w / self.s_inf)
        w = w + 0j  # turn -0.0 imaginary parts into +0.0 before the square roots
        w = np.sqrt(w - self.c) * np.sqrt(w + self.c)
        return w if math.isinf(self.b) else self.b * w / (self.b + w)


@dataclass(frozen=True)
class GeodesicMap:
    """Composition of unzipping stages plus the point normalization.

    ``eval_geodesic`` returns ``F(base_right + scale * z)`` where ``F`` is the
    raw inverse composition (hydrodynamic at infinity). This sends 0 to the
    base of the slit on its right-hand side (the cusp side) and infinity to
    infinity; ``scale`` is the remaining real freedom.
    """

    stages: tuple[Stage, ...]
    base_right: float = 0.0
    base_left: float = 0.0
    scale: float = 1.0
    normalized: bool = field(default=True)

    @classmethod
    def identity(cls) -> "GeodesicMap":
        return cls((), 0.0, 0.0, 1.0, normalized=False)

    def raw(self) -> "GeodesicMap":
        return replace(self, normalized=False)


def fit_geodesic(slit: SlitPolyline) -> GeodesicMap:
    pts = np.array(slit.vertices[1:], dtype=complex)
    stages = []
    base = None
    for j in range(len(pts)):
        a = complex(pts[j])
        if not (a.imag > 0 and math.isfinite(a.real) and math.isfinite(a.imag)):
            raise CuspMapError(f"vertex {j + 1} left the upper half-plane during unzipping")
        st = Stage.opening(a)
        stages.append(st)
        if base is None:
            base = st._renormalize(np.array([st.c, -st.c], dtype=complex))
        else:
            base = st.forward(base)
        pts[j + 1:] = st.forward(pts[j + 1:])
    base = base.real
    return GeodesicMap(tuple(stages), float(base[0]), float(base[1]))


def eval_geodesic(m: GeodesicMap, z):
    """Evaluate the fitted conformal map from the upper half-plane onto the slit domain."""
    zeta = np.asarray(z, dtype=complex)
    if m.normalized:
        zeta = m.base_right + m.scale * zeta
    w = zeta
    with np.errstate(divide="ignore", invalid="ignore"):
        for st in reversed(m.stages):
            w = st.inverse(w)
    if not np.all(np.isfinite(w)):
        raise SingularPoint("evaluation hit a stage singularity")
    return w[()] if np.ndim(z) == 0 else w


def unzip(m: GeodesicMap, w):
    """Inverse of :func:`eval_geodesic`: slit domain -> upper half-plane."""
    zeta = np.asarray(w, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for st in m.stages:
            zeta = st.forward(zeta)
    if not np.all(np.isfinite(zeta)):
        raise NonFiniteValue("unzipping produced non-finite values")
    if m.normalized:
        zeta = (zeta - m.base_right) / m.scale
    return zeta[()] if np.ndim(w) == 0 else zeta


def match_reference(m: GeodesicMap, z_ref: complex, w_ref: complex) -> GeodesicMap:
    """Fix the scale so that the normalized map sends ``z_ref`` close to ``w_ref``."""
    base = replace(m, scale=1.0, normalized=True)
    zeta = complex(unzip(base, w_ref))
    return replace(base, scale=abs(zeta) / abs(z_ref))


def oracle_from_curve(curve: CuspCurve) -> GeodesicMap:
    """Geodesic map for a slit given only as traced boundary samples.

    The samples carry their real parameters, so the scale is fixed by sending
    the outermost parameter ``x_tip`` to the tip of the slit. The polyline
    closes the gap between the origin and the innermost sample with a straight
    segment, so only the part of the cusp actually sampled is resolved.
    """
    m = fit_geodesic(SlitPolyline.from_curve(curve))
    x_tip = float(np.abs(curve.x).max())
    return replace(m, scale=m.base_right / x_tip)


# -- circular-arc test slits --------------------------------------------


def _boundary_X(alpha: float, logm: float) -> float:
    x = -math.exp(logm)
    return (math.log(x + alpha) + (TAU - alpha) / (x + alpha) - logm) / TAU


def _boundary_end(alpha: float) -> tuple[float, float, bool]:
    """Prevertex and value of X at the far end of the slit, and whether the slit is closed.

    On ``(-alpha, 0)`` the explicit map takes the values ``1/(X - i/2)`` with
    ``X = (h(x) - log|x|)/(2 pi)``, which lie on ``|w - i| = 1``. X starts at
    +inf at ``x = 0``; the tip of the arc is the interior minimum of X if there
    is one. Otherwise X decreases to -inf and the slit is the whole circle,
    cut at ``x = -alpha (1 - CLOSURE_GAP)``.
    """
    hi = math.log(alpha) + math.log1p(-1e-12)
    res = minimize_scalar(lambda m: _boundary_X(alpha, m), bounds=(-700.0, hi),
                          method="bounded", options={"xatol": 1e-12})
    if res.x < hi - 1e-6 and res.fun < _boundary_X(alpha, hi - 1e-6):
        return -math.exp(res.x), float(res.fun), False
    m_end = math.log(alpha) + math.log1p(-CLOSURE_GAP)
    return -math.exp(m_end), _boundary_X(alpha, m_end), True


def arc_tip_prevertex(alpha: float) -> float | None:
    """Real prevertex of the slit tip, or None if the slit is a full circle."""
    x, _, closed = _boundary_end(CircularArcParams(alpha).alpha)
    return None if closed else x


def circular_arc_polyline(alpha: float, n_vertices: int = DEFAULT_VERTICES) -> SlitPolyline:
    """Polyline with ``n_vertices`` points (origin included) on the circular slit.

    Boundary values ``1/(X - i/2)`` move along the circle at angle
    ``2 atan(2X)``, so equal steps in that angle give equal arc-length spacing.
    """
    CircularArcParams(alpha)
    _, X_end, _ = _boundary_end(alpha)
    theta = np.linspace(math.pi, 2 * math.atan(2 * X_end), n_vertices)[1:]
    X = 0.5 * np.tan(theta / 2)
    return SlitPolyline(np.concatenate([[0.0], 1.0 / (X - 0.5j)]))


def explicit_oracle(alpha: float, n_vertices: int = DEFAULT_VERTICES) -> GeodesicMap:
    """Geodesic map for the circular slit, scaled to agree with the explicit map at ``i``."""
    m = fit_geodesic(circular_arc_polyline(alpha, n_vertices))
    return match_reference(m, 1j, complex(chr_eval(alpha, 1j)))


def default_test_points() -> np.ndarray:
    radii = np.logspace(-6, -1, 6)
    angles = np.linspace(0.1, math.pi - 0.1, 7)
    return (radii[:, None] * np.exp(1j * angles[None, :])).ravel()


def compare_with_explicit(alpha: float, n_vertices: int = DEFAULT_VERTICES, test_points=None) -> float:
    """Largest relative deviation between the oracle and the explicit slit map."""
    z = default_test_points() if test_points is None else np.asarray(test_points, dtype=complex)
    m = explicit_oracle(alpha, n_vertices)
    exact = chr_eval(alpha, z)
    return float(np.max(np.abs(eval_geodesic(m, z) - exact) / np.abs(exact)))
