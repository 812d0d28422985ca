# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Deterministic random instances of the constant-curvature families.

Instances are built from a closed family that satisfies the sphere conditions
by construction. With a rotation R of R^4 and a rotation vector
v = (v0, v1, v2), the columns 1..3 of Omega restricted to coordinates 4..7 are
u_k = m R e_k + v_k R e_4, and (ω7, ω2, ω1) = (-v0, v1, -v2). The norm and
cross conditions then cancel identically. Exact rotations come from rational
quaternions, R x = p x q / |p|^2 with q a signed permutation of p.

Each instance depends only on (seed, index), so batches can be drawn in any
order or in parallel.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from equiform_core.config import CONFIG
from equiform_core.motion import (
    FamilyKind, MotionParams, constraints_hold,
    theorem_constraint_residuals,
)
from equiform_core.trigpoly import ScalarMode
from equiform_core.utils import Scalar

logger = logging.getLogger(__name__)

Matrix4 = Tuple[Tuple[Scalar, ...], ...]
_IDENTITY4: Matrix4 = tuple(tuple(1 if r == c else 0 for c in range(4)) for r in range(4))


@dataclass(frozen=True)
class FamilyFrame:
    """Closed-family coordinates of one instance."""
    s_prime: Scalar
    m: Scalar
    v: Tuple[Scalar, Scalar, Scalar]
    rotation: Matrix4
    b: Tuple[Scalar, Scalar, Scalar, Scalar]

    def params(self) -> MotionParams:
        R = self.rotation
        u = [tuple(self.m * R[r][k] + self.v[k] * R[r][3] for r in range(4)) for k in range(3)]
        v0, v1, v2 = self.v
        omega = [0] * 21
        omega[0] = -v2
        omega[1] = v1
        omega[6] = -v0
        omega[2:6] = u[0]
        omega[7:11] = u[1]
        omega[11:15] = u[2]
        return MotionParams(self.s_prime, tuple(omega), (0, 0, 0) + tuple(self.b))

    def with_v(self, v: Sequence[Scalar]) -> "FamilyFrame":
        return replace(self, v=tuple(v))


@dataclass
class FamilySample:
    family: FamilyKind
    seed: int
    instances: List[MotionParams] = field(default_factory=list)
    frames: List[FamilyFrame] = field(default_factory=list)
    exhausted: bool = False
    message: str = ""
    best_residual: Optional[float] = None

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)


def _quaternion_product(a: Sequence[Scalar], b: Sequence[Scalar]) -> Tuple[Scalar, ...]:
    a1, b1, c1, d1 = a
    a2, b2, c2, d2 = b
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def quaternion_rotation(p: Sequence[Scalar], q: Sequence[Scalar], norm: Scalar) -> Matrix4:
    """Matrix of x -> p x q / norm; orthogonal when norm = |p||q|."""
    columns = []
    for j in range(4):
        e = [0, 0, 0, 0]
        e[j] = 1
        image = _quaternion_product(_quaternion_product(p, e), q)
        columns.append([x / norm for x in image])
    return tuple(tuple(columns[c][r] for c in range(4)) for r in range(4))


class _Draw:
    """Scalar draws for one (seed, index) stream."""

    def __init__(self, seed: int, index: int, mode: ScalarMode):
        self.rng = np.random.default_rng([seed, index])
        self.mode = mode
        self.cfg = CONFIG.sampling

    def scalar(self) -> Scalar:
        if self.mode is ScalarMode.EXACT:
            num = int(self.rng.integers(-self.cfg.numerator_bound, self.cfg.numerator_bound + 1))
            den = int(self.rng.integers(1, self.cfg.denominator_bound + 1))
            value = Fraction(num, den)
            return value.numerator if value.denominator == 1 else value
        return float(self.rng.uniform(-self.cfg.float_bound, self.cfg.float_bound))

    def vector(self, n: int) -> Tuple[Scalar, ...]:
        return tuple(self.scalar() for _ in range(n))

    def rotation(self) -> Matrix4:
        if self.mode is ScalarMode.EXACT:
            p = self.vector(4)
            while all(x == 0 for x in p):
                p = self.vector(4)
            perm = self.rng.permutation(4)
            signs = self.rng.choice([-1, 1], size=4)
            q = tuple(int(signs[k]) * p[int(perm[k])] for k in range(4))
            norm = sum(x * x for x in p)
            rot = quaternion_rotation(p, q, Fraction(norm))
            return tuple(tuple(x.numerator if x.denominator == 1 else x for x in row) for row in rot)
        p = self.rng.normal(size=4)
        q = self.rng.normal(size=4)
        p, q = p / np.linalg.norm(p), q / np.linalg.norm(q)
        rot = quaternion_rotation(tuple(float(x) for x in p), tuple(float(x) for x in q), 1.0)
        return tuple(tuple(float(x) for x in row) for row in rot)


def _column(R: Matrix4, k: int) -> Tuple[Scalar, ...]:
    return tuple(R[r][k] for r in range(4))


def sample_frame(family: FamilyKind, seed: int, index: int, mode: ScalarMode = ScalarMode.EXACT,
                 *, planar_rotation: bool = True) -> FamilyFrame:
    """
    The index-th frame of a family. planar_rotation=False keeps v = 0 for
    Unconstrained draws; the other families always have v = 0.
    """
    family = FamilyKind(family)
    if family is FamilyKind.K_NEG32_A:
        raise ValueError("KNeg32A instances come from the penalty search, not from a closed family")
    draw = _Draw(seed, index, ScalarMode(mode))
    s_prime = draw.scalar()
    m = draw.scalar()
    R = draw.rotation()
    zero3 = (0, 0, 0) if draw.mode is ScalarMode.EXACT else (0.0, 0.0, 0.0)

    if family is FamilyKind.UNCONSTRAINED:
        v = draw.vector(3) if planar_rotation else zero3
        return FamilyFrame(s_prime, m, v, R, draw.vector(4))

    axis = _column(R, 3)
    if family is FamilyKind.ZERO_K:
        c = m
    elif family is FamilyKind.GENERAL34:
        c = draw.scalar()
    else:
        if draw.mode is ScalarMode.EXACT:
            raise ValueError("KNeg32B has no rational members; sample it in float mode")
        c = math.sqrt(3.0 * s_prime * s_prime + 7.0 * m * m)
    return FamilyFrame(s_prime, m, zero3, R, tuple(c * x for x in axis))


def default_mode(family: FamilyKind) -> ScalarMode:
    if FamilyKind(family) in (FamilyKind.K_NEG32_A, FamilyKind.K_NEG32_B):
        return ScalarMode.FLOAT
    return ScalarMode.EXACT


def sample_family(family: FamilyKind, seed: int, count: int,
                  mode: Optional[ScalarMode] = None, *, planar_rotation: bool = True) -> FamilySample:
    """
    count instances of the family, deterministic in seed. KNeg32A goes through
    the penalty search and may come back exhausted.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    family = FamilyKind(family)
    mode = ScalarMode(mode) if mode is not None else default_mode(family)
    if family is FamilyKind.K_NEG32_A:
        return _search_kneg32a(seed, count)

    sample = FamilySample(family=family, seed=seed)
    for index in range(count):
        frame = sample_frame(family, seed, index, mode, planar_rotation=planar_rotation)
        sample.frames.append(frame)
        sample.instances.append(frame.params())
    logger.debug("Sampled %d %s instances (seed=%d, %s)", count, family.value, seed, mode.value)
    return sample


# --- penalty search ---------------------------------------------------------
#
# Within v = 0 the rotation can be absorbed into b (b.u_k = m (R^T b)_k), so the
# search runs over x = (s', m, b4..b7) with R = I, normalised to |x| = 1 since
# every residual is homogeneous.

def _frame_from_vector(x: np.ndarray) -> FamilyFrame:
    s_prime, m = float(x[0]), float(x[1])
    b = tuple(float(y) for y in x[2:6])
    identity = tuple(tuple(float(y) for y in row) for row in _IDENTITY4)
    return FamilyFrame(s_prime, m, (0.0, 0.0, 0.0), identity, b)


def _kneg32a_penalty(x: np.ndarray) -> float:
    norm = float(np.linalg.norm(x))
    if norm < 1e-12:
        return 1e6
    s, m, b = x[0] / norm, x[1] / norm, x[2:6] / norm
    b_sq = float(b @ b)
    norm_balance = s * s + 3.0 * m * m - b_sq
    # alpha_6, alpha_7, alpha_8 for R = I
    a6, a7, a8 = -m * b[0], -m * b[1], -2.0 * m * b[2]
    alpha_balance = 4.0 * (2.0 * b_sq + s * s) ** 2 - 9.0 * (a8 * a8 + 4.0 * (a6 * a6 + a7 * a7))
    return float(norm_balance ** 2 + alpha_balance ** 2)


def _search_kneg32a(seed: int, count: int) -> FamilySample:
    cfg = CONFIG.search
    sample = FamilySample(family=FamilyKind.K_NEG32_A, seed=seed)
    best = math.inf
    restarts = max(cfg.restarts, count)
    for restart in range(restarts):
        rng = np.random.default_rng([seed, restart])
        x0 = rng.normal(size=6)
        result = minimize(_kneg32a_penalty, x0, method=cfg.optimizer,
                          options={"maxiter": cfg.max_iterations})
        value = float(result.fun)
        best = min(best, value)
        logger.debug("KNeg32A restart %d: penalty %.3e", restart, value)
        if value > cfg.target:
            continue
        x = np.asarray(result.x) / np.linalg.norm(result.x)
        frame = _frame_from_vector(x)
        params = frame.params()
        if not constraints_hold(theorem_constraint_residuals(params, FamilyKind.K_NEG32_A), params):
            continue
        sample.frames.append(frame)
        sample.instances.append(params)
        if len(sample.instances) >= count:
            break

    sample.best_residual = best
    if not sample.instances:
        sample.exhausted = True
        sample.message = (f"search exhausted: no KNeg32A instance after {restarts} restarts "
                          f"(best penalty {best:.3e}, target {cfg.target:.1e})")
        logger.warning(sample.message)
    return sample

