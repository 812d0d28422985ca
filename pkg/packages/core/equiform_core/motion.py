# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
First-order equiform motions of the unit sphere in E^7.

A motion is described at the zero position by its scaling rate s', the 21
upper-triangle rates of the skew matrix Omega and the translation rate d'.
This module holds the parameter value type, the conditions keeping the moving
sphere a sphere, the derived scalars alpha_1..alpha_8, beta, gamma, delta and
the constraint sets attached to each constant-curvature family.

WARNING: This code is under development and may undergo changes in future releases.
Backwards compatibility is not guaranteed at this time.
"""

import enum
import logging
import math
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from equiform_core.trigpoly import ScalarMode, ScalarModeError, scalar_mode
from equiform_core.utils import Scalar, is_negligible

logger = logging.getLogger(__name__)

OMEGA_COUNT = 21
D_PRIME_COUNT = 7
DIMENSION = 7

# Row-by-row layout of the upper triangle: ω1..ω6 fill row 1, ω7..ω11 row 2, ...
_UPPER_INDEX: Dict[Tuple[int, int], int] = {}
_n = 1
for _row in range(1, DIMENSION + 1):
    for _col in range(_row + 1, DIMENSION + 1):
        _UPPER_INDEX[(_row, _col)] = _n
        _n += 1
del _n, _row, _col

INERT_OMEGAS = tuple(range(16, 22))


class PreconditionError(ValueError):
    """Raised when an operation needs the sphere conditions or the assumption and they fail."""

    def __init__(self, message: str, residuals: Optional[Sequence[Scalar]] = None):
        super().__init__(message)
        self.residuals = list(residuals or [])


class FamilyKind(str, enum.Enum):
    ZERO_K = "ZeroK"
    K_NEG32_A = "KNeg32A"
    K_NEG32_B = "KNeg32B"
    GENERAL34 = "General34"
    UNCONSTRAINED = "Unconstrained"

    @classmethod
    def parse(cls, value: str) -> "FamilyKind":
        for member in cls:
            if value.lower() in (member.value.lower(), member.name.lower()):
                return member
        raise ValueError(f"Unknown family {value!r}; expected one of {[m.value for m in cls]}")


@dataclass(frozen=True)
class MotionParams:
    """
    s_prime, omega[0..20] = ω1..ω21 and d_prime[0..6] = b'1..b'7.

    Integers are mode-neutral. Fractions make the instance exact, floats make
    it float; both at once is rejected. Float instances store every entry as
    a float.
    """
    s_prime: Scalar
    omega: Tuple[Scalar, ...]
    d_prime: Tuple[Scalar, ...]

    def __post_init__(self):
        omega = tuple(self.omega)
        d_prime = tuple(self.d_prime)
        if len(omega) != OMEGA_COUNT:
            raise ValueError(f"omega must have {OMEGA_COUNT} entries, got {len(omega)}")
        if len(d_prime) != D_PRIME_COUNT:
            raise ValueError(f"d_prime must have {D_PRIME_COUNT} entries, got {len(d_prime)}")
        mode = _common_mode((self.s_prime,) + omega + d_prime)
        if mode is ScalarMode.FLOAT:
            conv = float
        else:
            conv = _normalize_exact
        object.__setattr__(self, "s_prime", conv(self.s_prime))
        object.__setattr__(self, "omega", tuple(conv(x) for x in omega))
        object.__setattr__(self, "d_prime", tuple(conv(x) for x in d_prime))
        object.__setattr__(self, "_mode", mode)

    @classmethod
    def zero(cls) -> "MotionParams":
        return cls(0, (0,) * OMEGA_COUNT, (0,) * D_PRIME_COUNT)

    @classmethod
    def build(cls, s_prime: Scalar = 0, omega: Optional[Dict[int, Scalar]] = None,
              d_prime: Optional[Dict[int, Scalar]] = None) -> "MotionParams":
        """Build from sparse 1-based maps, e.g. build(1, {3: 2, 9: 2, 15: 2}, {6: 1})."""
        w = [0] * OMEGA_COUNT
        b = [0] * D_PRIME_COUNT
        for i, v in (omega or {}).items():
            w[i - 1] = v
        for i, v in (d_prime or {}).items():
            b[i - 1] = v
        return cls(s_prime, tuple(w), tuple(b))

    @property
    def mode(self) -> ScalarMode:
        return self._mode

    @property
    def exact(self) -> bool:
        return self._mode is ScalarMode.EXACT

    def w(self, i: int) -> Scalar:
        """ω_i, 1-based."""
        return self.omega[i - 1]

    def b(self, i: int) -> Scalar:
        """b'_i, 1-based."""
        return self.d_prime[i - 1]

    def values(self) -> Tuple[Scalar, ...]:
        return (self.s_prime,) + self.omega + self.d_prime

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.values())

    def scale_hint(self) -> float:
        """Largest parameter magnitude, used to scale float tolerances."""
        return max((abs(float(x)) for x in self.values()), default=0.0)

    def scaled(self, factor: Scalar) -> "MotionParams":
        """Every rate multiplied by factor (the reparametrisation t -> factor*t)."""
        return MotionParams(self.s_prime * factor,
                            tuple(x * factor for x in self.omega),
                            tuple(x * factor for x in self.d_prime))

    def to_float(self) -> "MotionParams":
        if not self.exact:
            return self
        return MotionParams(float(self.s_prime),
                            tuple(float(x) for x in self.omega),
                            tuple(float(x) for x in self.d_prime))

    def integer_scaled(self) -> Tuple["MotionParams", int]:
        """
        (q, L) with q = self.scaled(L) all-integer and L the least common
        denominator. Exact instances only.
        """
        if not self.exact:
            raise ScalarModeError("integer_scaled needs an exact instance")
        lcd = 1
        for x in self.values():
            if isinstance(x, Fraction):
                lcd = lcd * x.denominator // math.gcd(lcd, x.denominator)
        return self.scaled(lcd), lcd

    def __repr__(self) -> str:
        from equiform_core.utils import format_scalar

        w = {i + 1: format_scalar(x) for i, x in enumerate(self.omega) if x != 0}
        b = {i + 1: format_scalar(x) for i, x in enumerate(self.d_prime) if x != 0}
        return f"MotionParams({self._mode.value}, s'={format_scalar(self.s_prime)}, omega={w}, d'={b})"


def _normalize_exact(x: Any) -> Scalar:
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if isinstance(x, (int, Fraction)):
        return x
    return Fraction(x)


def _common_mode(values: Iterable[Any]) -> ScalarMode:
    found: Optional[ScalarMode] = None
    for x in values:
        mode = scalar_mode(x)
        if mode is None:
            continue
        if found is not None and mode is not found:
            raise ScalarModeError("Motion parameters mix exact rationals with floats")
        found = mode
    return found or ScalarMode.EXACT


def omega_entry(p: MotionParams, row: int, col: int) -> Scalar:
    """Entry (row, col) of Omega, 1-based, lower triangle by skew-symmetry."""
    if row == col:
        return 0
    if row < col:
        return p.w(_UPPER_INDEX[(row, col)])
    return -p.w(_UPPER_INDEX[(col, row)])


def omega_matrix(p: MotionParams):
    """The 7x7 skew matrix: nested tuples for exact instances, an ndarray for float ones."""
    rows = tuple(tuple(omega_entry(p, r, c) for c in range(1, DIMENSION + 1))
                 for r in range(1, DIMENSION + 1))
    if p.exact:
        return rows
    return np.array(rows, dtype=float)


def velocity_column(p: MotionParams, k: int) -> Tuple[Scalar, ...]:
    """Column k (1..3) of s'I + Omega, the only columns acting on the sphere."""
    m = omega_matrix(p)
    column = tuple(m[r][k - 1] + (p.s_prime if r == k - 1 else 0) for r in range(DIMENSION))
    if p.exact:
        return column
    return tuple(float(v) for v in column)


def inert_parameters(p: MotionParams) -> List[int]:
    """Indices of nonzero ω16..ω21; these never reach the metric."""
    return [i for i in INERT_OMEGAS if p.w(i) != 0]


def _sumsq(p: MotionParams, lo: int, hi: int) -> Scalar:
    return sum((p.w(i) * p.w(i) for i in range(lo, hi + 1)), 0)


def sphere_condition_residuals(p: MotionParams) -> Tuple[Scalar, ...]:
    """The five residuals whose vanishing keeps the image of the sphere a sphere."""
    w = p.w
    r1 = sum((w(i) * w(i + 5) for i in range(2, 7)), 0)
    r2 = w(1) * w(7) - sum((w(i) * w(i + 9) for i in range(3, 7)), 0)
    r3 = w(1) * w(2) + sum((w(i) * w(i + 4) for i in range(8, 12)), 0)
    r4 = _sumsq(p, 2, 6) - _sumsq(p, 7, 11)
    r5 = w(1) * w(1) + _sumsq(p, 3, 6) - w(7) * w(7) - _sumsq(p, 12, 15)
    return (r1, r2, r3, r4, r5)


def _residual_scale(p: MotionParams) -> float:
    return p.scale_hint() ** 2


def sphere_conditions_hold(p: MotionParams, tol: Optional[float] = None) -> bool:
    tol = _tolerance(tol)
    scale = _residual_scale(p)
    return all(is_negligible(r, tol, scale) for r in sphere_condition_residuals(p))


def check_assumption(p: MotionParams, tol: Optional[float] = None) -> bool:
    """No translation in the 3-plane of the starting sphere: b'1 = b'2 = b'3 = 0."""
    tol = _tolerance(tol)
    scale = p.scale_hint()
    return all(is_negligible(p.b(i), tol, scale) for i in (1, 2, 3))


def require_preconditions(p: MotionParams, tol: Optional[float] = None,
                          assumption: bool = True) -> None:
    residuals = sphere_condition_residuals(p)
    if not sphere_conditions_hold(p, tol):
        raise PreconditionError(f"Sphere conditions violated: residuals {list(residuals)}", residuals)
    if assumption and not check_assumption(p, tol):
        raise PreconditionError(
            f"Planar translation present: b'1..b'3 = {[p.b(1), p.b(2), p.b(3)]}",
            [p.b(1), p.b(2), p.b(3)])


def _tolerance(tol: Optional[float]) -> float:
    if tol is not None:
        return tol
    from equiform_core.config import CONFIG
    return CONFIG.numerics.tolerance


@dataclass(frozen=True)
class DerivedQuantities:
    alpha1: Scalar
    alpha2: Scalar
    alpha3: Scalar
    alpha4: Scalar
    alpha5: Scalar
    alpha6: Scalar
    alpha7: Scalar
    alpha8: Scalar
    beta: Scalar
    gamma: Scalar
    delta: Scalar

    def as_dict(self) -> Dict[str, Scalar]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def derived_quantities(p: MotionParams) -> DerivedQuantities:
    w, b, s = p.w, p.b, p.s_prime
    half = Fraction(1, 2) if p.exact else 0.5
    quarter = Fraction(1, 4) if p.exact else 0.25

    alpha1 = half * sum((w(i) * w(i + 5) for i in range(2, 7)), 0)
    alpha2 = half * (w(1) * w(2) + sum((w(i) * w(i + 4) for i in range(8, 12)), 0))
    alpha3 = half * (w(1) * w(7) - sum((w(i) * w(i + 9) for i in range(3, 7)), 0))
    alpha4 = quarter * sum((w(i) * w(i) - w(i + 5) * w(i + 5) for i in range(2, 7)), 0)
    alpha5 = quarter * (w(1) * w(1) - 2 * w(2) * w(2) - 2 * w(7) * w(7)
                        + _sumsq(p, 1, 11) - 2 * _sumsq(p, 12, 15))
    alpha6 = b(1) * s - sum((b(i) * w(i - 1) for i in range(2, 8)), 0)
    alpha7 = b(1) * w(1) + b(2) * s - sum((b(i) * w(i + 4) for i in range(3, 8)), 0)
    alpha8 = 2 * (b(1) * w(2) + b(2) * w(7) + b(3) * s
                  - sum((b(i) * w(i + 8) for i in range(4, 8)), 0))
    beta = sum((x * x for x in p.d_prime), 0)
    gamma = beta + s * s + quarter * (2 * (w(1) ** 2 + w(2) ** 2 + w(7) ** 2)
                                      + _sumsq(p, 2, 15) + _sumsq(p, 12, 15))
    delta = quarter * (2 * (s * s + w(1) ** 2) + _sumsq(p, 2, 11))
    return DerivedQuantities(alpha1, alpha2, alpha3, alpha4, alpha5, alpha6, alpha7, alpha8,
                             beta, gamma, delta)


def block_rotation_instance(a: Scalar, c: Scalar, s_prime: Scalar) -> MotionParams:
    """ω3 = ω9 = ω15 = a and b'6 = c: the rotation of the sphere's 3-space into coordinates 4..6."""
    return MotionParams.build(s_prime, {3: a, 9: a, 15: a}, {6: c})


# Sums Σ b'_i ω_{i-1} (i=4..7), Σ b'_i ω_{i+4} (i=4..7), Σ b'_i ω_{i+8} (i=4..7).
def orthogonality_sums(p: MotionParams) -> Tuple[Scalar, Scalar, Scalar]:
    b, w = p.b, p.w
    return (sum((b(i) * w(i - 1) for i in range(4, 8)), 0),
            sum((b(i) * w(i + 4) for i in range(4, 8)), 0),
            sum((b(i) * w(i + 8) for i in range(4, 8)), 0))


def rotation_norm_sq(p: MotionParams) -> Scalar:
    """Σ ω_i², i = 3..6."""
    return _sumsq(p, 3, 6)


def translation_norm_sq(p: MotionParams) -> Scalar:
    """Σ b'_i², i = 4..7."""
    return sum((p.b(i) * p.b(i) for i in range(4, 8)), 0)


CONSTRAINT_LABELS: Dict[FamilyKind, Tuple[str, ...]] = {
    FamilyKind.ZERO_K: ("omega_1", "omega_2", "omega_7", "sum_b_omega_im1", "sum_b_omega_ip4",
                        "sum_b_omega_ip8", "omega_sq_minus_b_sq"),
    FamilyKind.K_NEG32_A: ("omega_1", "omega_2", "omega_7", "s_sq_plus_3omega_sq_minus_b_sq",
                           "alpha_balance"),
    FamilyKind.K_NEG32_B: ("omega_1", "omega_2", "omega_7", "sum_b_omega_im1", "sum_b_omega_ip4",
                           "sum_b_omega_ip8", "3s_sq_plus_7omega_sq_minus_b_sq"),
    FamilyKind.GENERAL34: ("omega_1", "omega_2", "omega_7", "sum_b_omega_im1", "sum_b_omega_ip4",
                           "sum_b_omega_ip8"),
    FamilyKind.UNCONSTRAINED: (),
}


def theorem_constraint_residuals(p: MotionParams, family: FamilyKind, *,
                                 verbatim: bool = False, tol: Optional[float] = None) -> List[Scalar]:
    """
    Residuals whose simultaneous vanishing is the family's hypothesis set,
    ordered as CONSTRAINT_LABELS[family].

    For KNeg32A the last residual is 4(2β + s'²)² − 9(α8² + 4(α6² + α7²));
    verbatim=True substitutes the printed, non-homogeneous reading
    4(s'² + 2Σb'²) − 9(S8² + 4S0² + 4S4²) with the Σb'ω sums S.

    Raises PreconditionError when the sphere conditions or the assumption fail.
    """
    require_preconditions(p, tol)
    family = FamilyKind(family)
    if family is FamilyKind.UNCONSTRAINED:
        return []
    s = p.s_prime
    head = [p.w(1), p.w(2), p.w(7)]
    sums = list(orthogonality_sums(p))
    w2 = rotation_norm_sq(p)
    b2 = translation_norm_sq(p)
    if family is FamilyKind.ZERO_K:
        return head + sums + [w2 - b2]
    if family is FamilyKind.GENERAL34:
        return head + sums
    if family is FamilyKind.K_NEG32_B:
        return head + sums + [3 * s * s + 7 * w2 - b2]
    # KNeg32A
    if verbatim:
        s0, s4, s8 = sums
        balance = 4 * (s * s + 2 * b2) - 9 * (s8 * s8 + 4 * s0 * s0 + 4 * s4 * s4)
    else:
        q = derived_quantities(p)
        balance = (4 * (2 * q.beta + s * s) ** 2
                   - 9 * (q.alpha8 ** 2 + 4 * (q.alpha6 ** 2 + q.alpha7 ** 2)))
    return head + [s * s + 3 * w2 - b2, balance]


def constraints_hold(residuals: Sequence[Scalar], p: MotionParams, tol: Optional[float] = None) -> bool:
    tol = _tolerance(tol)
    scale = max(_residual_scale(p), 1.0) ** 2
    return all(is_negligible(r, tol, scale) for r in residuals)


def positivity_identity(p: MotionParams) -> Tuple[Scalar, Scalar]:
    """
    Both sides of
      β + s'² + 6δ − ω1² − ω2² − ω7²
        = Σ_{4..7} b'² + ω2² + Σ_{8..11} ω² + 2[2s'² + ω1² + Σ_{3..6} ω²],
    which holds whenever the sphere conditions and the assumption do.
    """
    q = derived_quantities(p)
    w, s = p.w, p.s_prime
    lhs = q.beta + s * s + 6 * q.delta - w(1) ** 2 - w(2) ** 2 - w(7) ** 2
    rhs = (translation_norm_sq(p) + w(2) ** 2 + _sumsq(p, 8, 11)
           + 2 * (2 * s * s + w(1) ** 2 + _sumsq(p, 3, 6)))
    return lhs, rhs
