# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Kinematic 3-surface of a first-order equiform motion and its intrinsic
geometry: surface map, tangents, induced metric (computed and closed form),
Christoffel symbols and the scalar curvature quotient at the zero position.

Coordinates are x1 = t, x2 = theta, x3 = phi, with phi the latitude of the
unit sphere x = (cos theta cos phi, sin theta cos phi, sin phi, 0, 0, 0, 0).
phi ranges over (-pi/2, pi/2); the range [0, pi] sometimes quoted for this
chart covers one hemisphere twice.

WARNING: This code is under development and may undergo changes in future releases.
Backwards compatibility is not guaranteed at this time.
"""

import logging
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from equiform_core.config import CONFIG
from equiform_core.curvature import (
    AXES, christoffel_numerators, cofactor_matrix, curvature_parts, determinant,
)
from equiform_core.motion import (
    DIMENSION, MotionParams, PreconditionError, derived_quantities,
    sphere_condition_residuals, sphere_conditions_hold, velocity_column,
)
from equiform_core.spectral import MIN_GRID, grid_to_trigpoly, sample_fields
from equiform_core.trigpoly import RationalTrig, ScalarMode, TPoly, TrigPoly, make_term

logger = logging.getLogger(__name__)

METHODS = ("symbolic", "spectral")


class DegenerateMetricError(ArithmeticError):
    """Raised when det(g) vanishes identically, e.g. for the all-zero motion."""
    pass


class ChartPoleError(ArithmeticError):
    """Raised when evaluating at a pole of the chart or at a zero of Q."""
    pass


# ---------------------------------------------------------------------------
# Surface and tangents
# ---------------------------------------------------------------------------

def _half(mode: ScalarMode):
    return Fraction(1, 2) if mode is ScalarMode.EXACT else 0.5


def sphere_coordinates(mode: ScalarMode = ScalarMode.EXACT) -> Tuple[TrigPoly, TrigPoly, TrigPoly]:
    """cos(theta)cos(phi), sin(theta)cos(phi), sin(phi)."""
    h = _half(mode)
    x1 = make_term((1, 1), "cos", h, mode) + make_term((1, -1), "cos", h, mode)
    x2 = make_term((1, 1), "sin", h, mode) + make_term((1, -1), "sin", h, mode)
    x3 = make_term((0, 1), "sin", 1, mode)
    return x1, x2, x3


@dataclass(frozen=True)
class SurfaceMap:
    """Seven components X_1..X_7, each affine in t."""
    components: Tuple[TrigPoly, ...]

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, r: int) -> TrigPoly:
        return self.components[r]

    def substitute_t(self, t0) -> "SurfaceMap":
        return SurfaceMap(tuple(x.substitute_t(t0) for x in self.components))

    def differentiate(self, var: str) -> "SurfaceMap":
        return SurfaceMap(tuple(x.differentiate(var) for x in self.components))

    def evaluate(self, t, theta, phi) -> np.ndarray:
        return np.array([x.evaluate(t, theta, phi) for x in self.components])

    def dot(self, other: "SurfaceMap") -> TrigPoly:
        total = self.components[0] * other.components[0]
        for a, b in zip(self.components[1:], other.components[1:]):
            total = total + a * b
        return total


def surface(p: MotionParams) -> SurfaceMap:
    """
    X = t b' + cos(theta)cos(phi) a_0 + sin(theta)cos(phi) a_1 + sin(phi) a_2
    with a_k = e_k + t (s' e_k + Omega e_k).
    """
    mode = p.mode
    x = sphere_coordinates(mode)
    columns = [velocity_column(p, k) for k in (1, 2, 3)]
    components = []
    for r in range(DIMENSION):
        comp = TrigPoly.constant(TPoly((0, p.d_prime[r])), mode)
        for k in range(3):
            a = TPoly((1 if r == k else 0, columns[k][r]))
            comp = comp + x[k].scale(a)
        components.append(comp)
    return SurfaceMap(tuple(components))


def tangents(p: MotionParams) -> Tuple[SurfaceMap, SurfaceMap, SurfaceMap]:
    """(X_t, X_theta, X_phi)."""
    X = surface(p)
    return X.differentiate("t"), X.differentiate("theta"), X.differentiate("phi")


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------

_ENTRY_NAMES = {(0, 0): "g11", (0, 1): "g12", (0, 2): "g13",
                (1, 1): "g22", (1, 2): "g23", (2, 2): "g33"}


@dataclass(frozen=True)
class MetricTensor:
    g11: TrigPoly
    g12: TrigPoly
    g13: TrigPoly
    g22: TrigPoly
    g23: TrigPoly
    g33: TrigPoly

    __hash__ = None

    def entry(self, i: int, j: int) -> TrigPoly:
        """0-based, symmetric."""
        key = (i, j) if i <= j else (j, i)
        return getattr(self, _ENTRY_NAMES[key])

    def matrix(self) -> List[List[TrigPoly]]:
        return [[self.entry(i, j) for j in range(3)] for i in range(3)]

    def entries(self) -> Dict[str, TrigPoly]:
        return {name: getattr(self, name) for name in _ENTRY_NAMES.values()}

    def map(self, fn) -> "MetricTensor":
        return MetricTensor(**{name: fn(tp) for name, tp in self.entries().items()})

    def substitute_t(self, t0) -> "MetricTensor":
        return self.map(lambda tp: tp.substitute_t(t0))

    def differentiate(self, var: str) -> "MetricTensor":
        return self.map(lambda tp: tp.differentiate(var))

    def evaluate(self, t, theta, phi) -> np.ndarray:
        return np.array([[self.entry(i, j).evaluate(t, theta, phi) for j in range(3)]
                         for i in range(3)])

    def max_abs(self) -> float:
        return max(tp.max_abs() for tp in self.entries().values())


def metric(p: MotionParams) -> MetricTensor:
    """g_ij = X_i . X_j, exact TrigPoly arithmetic."""
    Xt, Xa, Xb = tangents(p)
    return MetricTensor(g11=Xt.dot(Xt), g12=Xt.dot(Xa), g13=Xt.dot(Xb),
                        g22=Xa.dot(Xa), g23=Xa.dot(Xb), g33=Xb.dot(Xb))


def _closed_form_basis(mode: ScalarMode) -> Dict[str, TrigPoly]:
    return {
        "ct": make_term((1, 0), "cos", 1, mode), "st": make_term((1, 0), "sin", 1, mode),
        "cp": make_term((0, 1), "cos", 1, mode), "sp": make_term((0, 1), "sin", 1, mode),
        "c2t": make_term((2, 0), "cos", 1, mode), "s2t": make_term((2, 0), "sin", 1, mode),
        "c2p": make_term((0, 2), "cos", 1, mode), "s2p": make_term((0, 2), "sin", 1, mode),
        "t": TrigPoly.constant(TPoly((0, 1)), mode),
    }


def metric_closed_form(p: MotionParams, tol: Optional[float] = None) -> MetricTensor:
    """
    The metric written through alpha_1..alpha_8, beta, gamma, delta. Valid
    under the sphere conditions only; raises PreconditionError otherwise.

    Compared with the printed display this carries the corrected terms:
    alpha_1 in g22, the -w2 cos(theta) - w7 sin(theta) + b'3 cos(phi)
    + (t/2) alpha_8 cos(phi) part of g13 and consistent alpha_2/alpha_3 factors.
    """
    if not sphere_conditions_hold(p, tol):
        residuals = sphere_condition_residuals(p)
        raise PreconditionError(f"Closed-form metric needs the sphere conditions; residuals {list(residuals)}",
                                residuals)
    mode = p.mode
    q = derived_quantities(p)
    B = _closed_form_basis(mode)
    ct, st, cp, sp = B["ct"], B["st"], B["cp"], B["sp"]
    c2t, s2t, c2p, s2p, t = B["c2t"], B["s2t"], B["c2p"], B["s2p"], B["t"]
    a1, a2, a3, a4, a5 = q.alpha1, q.alpha2, q.alpha3, q.alpha4, q.alpha5
    a6, a7, a8 = q.alpha6, q.alpha7, q.alpha8
    w1, w2, w7 = p.w(1), p.w(2), p.w(7)
    b1, b2, b3 = p.b(1), p.b(2), p.b(3)
    s = p.s_prime
    one = TrigPoly.constant(1, mode)
    sheet = a4 * c2t + a1 * s2t

    g11 = (q.gamma + a5 * c2p + a8 * sp
           + 2 * cp * (cp * sheet + st * (a7 + a2 * sp) + ct * (a6 - 2 * a3 * sp)))
    g12 = cp * (2 * t * cp * (a1 * c2t - a4 * s2t) - w1 * cp
                - st * (t * (a6 - 2 * a3 * sp) + b1 + w2 * sp)
                + ct * (t * (a7 + 2 * a2 * sp) + b2 + w7 * sp))
    g13 = (2 * t * c2p * (a2 * st - a3 * ct) - t * s2p * (a5 + sheet)
           - sp * ((b1 + a6 * t) * ct + (b2 + a7 * t) * st)
           - w2 * ct - w7 * st + b3 * cp + (a8 * _half(mode)) * t * cp)
    g22 = cp * cp * (one + 2 * s * t + 2 * t * t * (q.delta - sheet))
    g23 = t * t * (2 * cp * cp * (a2 * ct + a3 * st) + s2p * (a4 * s2t - a1 * c2t))
    g33 = (one + 2 * s * t
           + t * t * (q.gamma - q.beta - a5 * c2p + 2 * sp * sp * sheet + 2 * s2p * (a3 * ct - a2 * st)))
    return MetricTensor(g11=g11, g12=g12, g13=g13, g22=g22, g23=g23, g33=g33)


# ---------------------------------------------------------------------------
# Christoffel symbols
# ---------------------------------------------------------------------------

def _is_null(tp: TrigPoly, scale: float) -> bool:
    if tp.exact:
        return not tp
    return tp.is_zero(max(scale, 1.0))


@dataclass(frozen=True)
class ChristoffelSet:
    """Gamma^l_ij = numerators[(l, i, j)] / denominator for i <= j, indices 0-based."""
    numerators: Dict[Tuple[int, int, int], TrigPoly]
    denominator: TrigPoly

    __hash__ = None

    def numerator(self, l: int, i: int, j: int) -> TrigPoly:
        return self.numerators[(l, min(i, j), max(i, j))]

    def symbol(self, l: int, i: int, j: int) -> RationalTrig:
        return RationalTrig(self.numerator(l, i, j), self.denominator)

    def evaluate(self, l: int, i: int, j: int, t, theta, phi) -> float:
        return self.symbol(l, i, j).evaluate(t, theta, phi)


def christoffel(p: MotionParams) -> ChristoffelSet:
    """Second-kind symbols over the shared denominator det(g), full t dependence."""
    g = metric(p)
    gm = g.matrix()
    dg = [g.differentiate(axis).matrix() for axis in AXES]
    cof = cofactor_matrix(gm, operator.mul)
    det = determinant(gm, cof, operator.mul)
    if _is_null(det, g.max_abs() ** 3):
        raise DegenerateMetricError(f"det(g) vanishes identically for {p!r}")
    half = _half(p.mode)
    numerators = {key: value.scale(half)
                  for key, value in christoffel_numerators(cof, dg, operator.mul).items()}
    return ChristoffelSet(numerators=numerators, denominator=det)


# ---------------------------------------------------------------------------
# Scalar curvature at t = 0
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvatureQuotient:
    """
    K(0, theta, phi) = P / Q. P and Q are normalised so that Q = det(g)^3 at
    t = 0 for the motion as given, which makes their coefficients comparable
    across strategies and instances.
    """
    P: TrigPoly
    Q: TrigPoly
    method: str

    __hash__ = None

    @property
    def exact(self) -> bool:
        return self.P.exact

    def scale(self) -> float:
        return max(self.P.max_abs(), self.Q.max_abs())

    def residual(self, k) -> TrigPoly:
        """P - k Q."""
        return self.P - self.Q.scale(k)

    def spectrum_bound(self) -> Dict[str, Tuple[int, int]]:
        return {"P": self.P.spectrum_bound(), "Q": self.Q.spectrum_bound()}

    def evaluate(self, theta, phi) -> float:
        pole = CONFIG.numerics.pole_tolerance
        if abs(math.cos(float(phi))) <= pole:
            raise ChartPoleError(f"phi = {phi} is a pole of the chart (cos phi = 0)")
        q = self.Q.evaluate(0, theta, phi)
        if abs(q) <= pole * max(self.Q.max_abs(), 1e-300):
            raise ChartPoleError(f"Q vanishes at (theta, phi) = ({theta}, {phi})")
        return self.P.evaluate(0, theta, phi) / q


def _jets(g: MetricTensor):
    """g, dg and ddg at t = 0 as nested lists of TrigPoly."""
    dt = g.differentiate("t")
    dtt = dt.differentiate("t")
    g0, dt0, dtt0 = g.substitute_t(0), dt.substitute_t(0), dtt.substitute_t(0)
    base = {"t": dt0, "theta": g0.differentiate("theta"), "phi": g0.differentiate("phi")}
    second = {}
    for a in AXES:
        for b in AXES:
            if a == "t" and b == "t":
                second[(a, b)] = dtt0
            elif a == "t":
                second[(a, b)] = dt0.differentiate(b)
            elif b == "t":
                second[(a, b)] = dt0.differentiate(a)
            else:
                second[(a, b)] = base[a].differentiate(b)
    jet_g = g0.matrix()
    jet_dg = [base[a].matrix() for a in AXES]
    jet_ddg = [[second[(a, b)].matrix() for b in AXES] for a in AXES]
    return jet_g, jet_dg, jet_ddg


def _map_nested(fn, value):
    if isinstance(value, list):
        return [_map_nested(fn, v) for v in value]
    return fn(value)


def _flatten(value) -> List[TrigPoly]:
    if isinstance(value, list):
        return [x for v in value for x in _flatten(v)]
    return [value]


def _require_nondegenerate(jet_g, p: MotionParams) -> None:
    cof = cofactor_matrix(jet_g, operator.mul)
    det = determinant(jet_g, cof, operator.mul)
    scale = max(tp.max_abs() for tp in _flatten(jet_g))
    if _is_null(det, scale ** 3):
        raise DegenerateMetricError(f"det(g) vanishes identically at t = 0 for {p!r}")


def _symbolic_exact(p: MotionParams) -> CurvatureQuotient:
    q, lcd = p.integer_scaled()
    jets = _jets(metric(q))
    _require_nondegenerate(jets[0], p)
    c = 1
    for tp in _flatten(list(jets)):
        d = tp.common_denominator()
        c = c * d // math.gcd(c, d)
    g, dg, ddg = (_map_nested(lambda tp: tp.integral(c), part) for part in jets)
    parts = curvature_parts(g, dg, ddg, lambda a, b: a.mul(b, doubled=True))
    # doubled products carry 2 per product; undo that, the metric factor c and the time scale lcd
    lam = 2
    p_norm = Fraction(1, 4 * lam ** 7 * c ** 8 * lcd ** 6)
    q_norm = Fraction(1, lam ** 8 * c ** 9 * lcd ** 6)
    return CurvatureQuotient(P=parts.numerator.scale(p_norm), Q=parts.cube.scale(q_norm),
                             method="symbolic")


def _symbolic_float(p: MotionParams) -> CurvatureQuotient:
    jets = _jets(metric(p))
    _require_nondegenerate(jets[0], p)
    parts = curvature_parts(*jets, operator.mul)
    return CurvatureQuotient(P=parts.numerator.scale(0.25), Q=parts.cube, method="symbolic")


def _spectral(p: MotionParams, grid_size: Optional[int] = None) -> CurvatureQuotient:
    n = grid_size or CONFIG.numerics.grid_size
    if n < MIN_GRID:
        logger.warning("Grid size %d aliases the curvature harmonics, using %d", n, MIN_GRID)
        n = MIN_GRID
    g, dg, ddg = sample_fields(*_jets(metric(p.to_float())), n)
    parts = curvature_parts(g, dg, ddg, np.multiply)
    scale = max(float(np.max(np.abs(x))) for row in g for x in row)
    if float(np.max(np.abs(parts.determinant))) <= CONFIG.numerics.tolerance * max(scale, 1.0) ** 3:
        raise DegenerateMetricError(f"det(g) vanishes on the whole grid for {p!r}")
    return CurvatureQuotient(P=grid_to_trigpoly(parts.numerator * 0.25),
                             Q=grid_to_trigpoly(parts.cube), method="spectral")


def resolve_method(p: MotionParams, method: Optional[str] = None) -> str:
    method = method or CONFIG.numerics.method
    if method == "auto":
        return "symbolic" if p.exact else "spectral"
    if method not in METHODS:
        raise ValueError(f"Unknown curvature method {method!r}; expected auto, symbolic or spectral")
    return method


def scalar_curvature(p: MotionParams, method: Optional[str] = None) -> CurvatureQuotient:
    """
    Curvature quotient at t = 0. 'symbolic' keeps the arithmetic of the
    instance (exact stays exact); 'spectral' samples on a grid in double
    precision. 'auto' picks symbolic for exact instances.
    """
    method = resolve_method(p, method)
    logger.debug("scalar_curvature(%r) via %s", p, method)
    if method == "spectral":
        return _spectral(p)
    if p.exact:
        return _symbolic_exact(p)
    return _symbolic_float(p)


def curvature_at(p: MotionParams, theta, phi, quotient: Optional[CurvatureQuotient] = None) -> float:
    quotient = quotient or scalar_curvature(p)
    return quotient.evaluate(theta, phi)
