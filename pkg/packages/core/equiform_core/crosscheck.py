# Copyright (c) 2025 Equiform Core Authors.
# Licensed under the MIT License

"""
Cross-check of the published closed forms for individual Fourier coefficients
of P - K Q against coefficients extracted from the exact pipeline.

Each row names a coefficient (A for cosine, B for sine), the candidate keys
(i, j) it may refer to and one or more readings of its printed formula. Over a
set of exact instances a reading is accepted when extraction and formula agree
on which instances vanish and their ratio is one instance-independent constant.
The remaining readings are reported as rejected.
"""

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from equiform_core.geometry import scalar_curvature
from equiform_core.motion import (
    DerivedQuantities, FamilyKind, MotionParams, derived_quantities, require_preconditions,
)
from equiform_core.sampling import sample_frame
from equiform_core.trigpoly import ScalarModeError, TrigPoly
from equiform_core.utils import Scalar

logger = logging.getLogger(__name__)

Key = Tuple[int, int]

MODES = ("K0", "general")


@dataclass(frozen=True)
class CoefficientContext:
    params: MotionParams
    q: DerivedQuantities
    k: Fraction

    @property
    def w1(self):
        return self.params.w(1)

    @property
    def w2(self):
        return self.params.w(2)

    @property
    def w7(self):
        return self.params.w(7)

    @property
    def n(self):
        """ω2² + ω7²."""
        return self.w2 ** 2 + self.w7 ** 2

    @property
    def s2(self):
        return self.params.s_prime ** 2

    @property
    def rotation_free(self) -> bool:
        return self.w1 == 0 and self.w2 == 0 and self.w7 == 0

    @property
    def alphas_vanish(self) -> bool:
        return self.q.alpha6 == 0 and self.q.alpha7 == 0 and self.q.alpha8 == 0

    @property
    def positivity_factor(self):
        q = self.q
        return q.beta + self.s2 + 6 * q.delta - self.w1 ** 2 - self.w2 ** 2 - self.w7 ** 2


Formula = Callable[[CoefficientContext], Scalar]


def _always(ctx: CoefficientContext) -> bool:
    return True


@dataclass(frozen=True)
class CoefficientRow:
    name: str
    kind: str                                   # cos | sin
    keys: Tuple[Key, ...]
    readings: Tuple[Tuple[str, Formula], ...]
    applies: Callable[[CoefficientContext], bool] = _always
    condition: str = "always"
    optional: bool = False


def _f(num: int, den: int) -> Fraction:
    return Fraction(num, den)


def _sextic(ctx, middle: int):
    w1, n = ctx.w1, ctx.n
    return 16 * w1 ** 6 - 120 * w1 ** 4 * n + middle * w1 ** 2 * n ** 2 - 5 * n ** 3


def _quartic_27(ctx):
    w2, w7 = ctx.w2, ctx.w7
    return w2 ** 4 - 6 * w2 ** 2 * w7 ** 2 + w7 ** 4


def _k_is(value: Fraction, extra: Callable[[CoefficientContext], bool] = _always):
    return lambda ctx: ctx.k == value and extra(ctx)


_MINUS_SIX = Fraction(-6)
_MINUS_THREE_HALVES = Fraction(-3, 2)

COEFFICIENT_TABLE: Tuple[CoefficientRow, ...] = (
    CoefficientRow(
        "A_0,12", "cos", ((0, 12),),
        (("90 w1^2 N^2", lambda c: (c.k + 6) * _f(1, 16384) * _sextic(c, 90)),
         ("9 w1^2 N^2", lambda c: (c.k + 6) * _f(1, 16384) * _sextic(c, 9)))),
    CoefficientRow(
        "A_6,12", "cos", ((6, 12), (6, -12), (12, 6)),
        (("printed", lambda c: (c.k + 6) * _f(1, 65536)
          * (c.w2 ** 6 - 15 * c.w2 ** 4 * c.w7 ** 2 + 15 * c.w2 ** 2 * c.w7 ** 4 - c.w7 ** 6)),)),
    CoefficientRow(
        "B_6,12", "sin", ((6, 12), (6, -12), (12, 6)),
        (("(3 w2^2 - w7^2)", lambda c: (c.k + 6) * _f(1, 32768) * c.w2 * c.w7
          * (3 * c.w2 ** 2 - c.w7 ** 2) * (c.w2 ** 2 - 3 * c.w7 ** 2)),
         ("(3 w2 - w7^2)", lambda c: (c.k + 6) * _f(1, 32768) * c.w2 * c.w7
          * (3 * c.w2 - c.w7 ** 2) * (c.w2 ** 2 - 3 * c.w7 ** 2)),
         ("(3 w2 - w2^2)", lambda c: (c.k + 6) * _f(1, 32768) * c.w2 * c.w7
          * (3 * c.w2 - c.w2 ** 2) * (c.w2 ** 2 - 3 * c.w7 ** 2)))),
    CoefficientRow(
        "B_0,9", "sin", ((0, 9),),
        (("printed", lambda c: (2 * c.k + 3) * _f(1, 256) * c.q.alpha8
          * (c.q.alpha8 ** 2 - 6 * (c.q.alpha6 ** 2 + c.q.alpha7 ** 2))),),
        applies=lambda c: c.rotation_free, condition="w1 = w2 = w7 = 0"),
    CoefficientRow(
        "A_3,9", "cos", ((3, 9), (3, -9)),
        (("printed", lambda c: (2 * c.k + 3) * _f(1, 256) * c.q.alpha6
          * (3 * c.q.alpha7 ** 2 - c.q.alpha6 ** 2)),),
        applies=lambda c: c.rotation_free, condition="w1 = w2 = w7 = 0"),
    CoefficientRow(
        "B_3,9", "sin", ((3, 9), (3, -9)),
        (("printed", lambda c: (2 * c.k + 3) * _f(1, 256) * c.q.alpha7
          * (c.q.alpha7 ** 2 - 3 * c.q.alpha6 ** 2)),),
        applies=lambda c: c.rotation_free, condition="w1 = w2 = w7 = 0"),
    CoefficientRow(
        "A_0,6", "cos", ((0, 6),),
        (("printed", lambda c: _f(1, 16) * (c.q.beta + 2 * c.q.delta) ** 2
          * (c.k * (c.q.beta + 2 * c.q.delta) - 2 * (2 * c.q.delta - c.q.beta - c.s2))),),
        applies=lambda c: c.rotation_free and c.alphas_vanish,
        condition="w1 = w2 = w7 = 0, alpha6 = alpha7 = alpha8 = 0"),
    # case-analysis rows, stated for particular K only
    CoefficientRow(
        "A_5,11", "cos", ((5, 11), (5, -11)),
        (("printed", lambda c: _f(1, 2048) * (c.q.alpha6 * _quartic_27(c)
                                              - 4 * c.q.alpha7 * c.w2 * c.w7 * (c.w2 ** 2 - c.w7 ** 2))),),
        applies=_k_is(_MINUS_SIX), condition="K = -6", optional=True),
    CoefficientRow(
        "B_5,11", "sin", ((5, 11), (5, -11)),
        (("printed", lambda c: _f(1, 2048) * (c.q.alpha7 * _quartic_27(c)
                                              + 4 * c.q.alpha6 * c.w2 * c.w7 * (c.w2 ** 2 - c.w7 ** 2))),),
        applies=_k_is(_MINUS_SIX), condition="K = -6", optional=True),
    CoefficientRow(
        "B_0,11", "sin", ((0, 11),),
        (("printed", lambda c: _f(1, 2048) * c.q.alpha8
          * (8 * c.w1 ** 4 - 24 * c.w1 ** 2 * c.n + 3 * c.n ** 2)),),
        applies=_k_is(_MINUS_SIX, lambda c: c.q.alpha6 == 0 and c.q.alpha7 == 0),
        condition="K = -6, alpha6 = alpha7 = 0", optional=True),
    CoefficientRow(
        "A_4,11", "cos", ((4, 11), (4, -11)),
        (("printed", lambda c: _f(1, 512) * c.q.alpha8 * c.w2 * c.w7 * (c.w7 ** 2 - c.w2 ** 2)),),
        applies=_k_is(_MINUS_SIX, lambda c: c.q.alpha6 == 0 and c.q.alpha7 == 0),
        condition="K = -6, alpha6 = alpha7 = 0", optional=True),
    CoefficientRow(
        "B_4,11", "sin", ((4, 11), (4, -11)),
        (("printed", lambda c: _f(1, 2048) * c.q.alpha8 * _quartic_27(c)),),
        applies=_k_is(_MINUS_SIX, lambda c: c.q.alpha6 == 0 and c.q.alpha7 == 0),
        condition="K = -6, alpha6 = alpha7 = 0", optional=True),
    CoefficientRow(
        "A_0,10", "cos", ((0, 10),),
        (("8 w1^4 - 24 w1^2 N + 3 N^2", lambda c: _f(1, 1024)
          * (8 * c.w1 ** 4 - 24 * c.w1 ** 2 * c.n + 3 * c.n ** 2) * c.positivity_factor),
         ("printed 8 w1^2 - w1^2 N + 3 N^2", lambda c: _f(1, 1024)
          * (8 * c.w1 ** 2 - c.w1 ** 2 * c.n + 3 * c.n ** 2) * c.positivity_factor)),
        applies=_k_is(_MINUS_SIX, lambda c: c.alphas_vanish),
        condition="K = -6, alpha6 = alpha7 = alpha8 = 0", optional=True),
    CoefficientRow(
        "A_4,10", "cos", ((4, 10), (4, -10)),
        (("printed", lambda c: _f(1, 2048) * c.w2 * c.w7 * _quartic_27(c) * c.positivity_factor),),
        applies=_k_is(_MINUS_SIX, lambda c: c.alphas_vanish),
        condition="K = -6, alpha6 = alpha7 = alpha8 = 0", optional=True),
    CoefficientRow(
        "B_4,10", "sin", ((4, 10), (4, -10)),
        (("printed", lambda c: _f(1, 512) * c.w2 * c.w7 * (c.w7 ** 2 - c.w2 ** 2) * c.positivity_factor),),
        applies=_k_is(_MINUS_SIX, lambda c: c.alphas_vanish),
        condition="K = -6, alpha6 = alpha7 = alpha8 = 0", optional=True),
    CoefficientRow(
        "A_0,8", "cos", ((0, 8),),
        (("printed", lambda c: _f(1, 64) * (c.q.alpha8 ** 2 - (c.q.alpha6 ** 2 - c.q.alpha7 ** 2))
          * (6 * c.q.delta - c.q.beta - 2 * c.s2)),),
        applies=_k_is(_MINUS_THREE_HALVES, lambda c: c.rotation_free),
        condition="K = -3/2, w1 = w2 = w7 = 0", optional=True),
    CoefficientRow(
        "A_2,8", "cos", ((2, 8), (2, -8)),
        (("printed", lambda c: _f(1, 64) * (c.q.alpha6 ** 2 - c.q.alpha7 ** 2)
          * (6 * c.q.delta - c.q.beta - 2 * c.s2)),),
        applies=_k_is(_MINUS_THREE_HALVES, lambda c: c.rotation_free),
        condition="K = -3/2, w1 = w2 = w7 = 0", optional=True),
    CoefficientRow(
        "B_2,8", "sin", ((2, 8), (2, -8)),
        (("printed", lambda c: _f(1, 32) * c.q.alpha7 * c.q.alpha6
          * (6 * c.q.delta - c.q.beta - 2 * c.s2)),),
        applies=_k_is(_MINUS_THREE_HALVES, lambda c: c.rotation_free),
        condition="K = -3/2, w1 = w2 = w7 = 0", optional=True),
    CoefficientRow(
        "A_0,4", "cos", ((0, 4),),
        (("printed", lambda c: _f(1, 72) * (2 * c.q.beta + c.s2)
          * (4 * (2 * c.q.beta + c.s2) ** 2
             - 9 * (c.q.alpha8 ** 2 + 4 * (c.q.alpha6 ** 2 + c.q.alpha7 ** 2)))),),
        applies=_k_is(_MINUS_THREE_HALVES,
                      lambda c: c.rotation_free and 6 * c.q.delta == c.q.beta + 2 * c.s2),
        condition="K = -3/2, w1 = w2 = w7 = 0, 6 delta = beta + 2 s'^2", optional=True),
    CoefficientRow(
        "A_0,6 (K=-3/2)", "cos", ((0, 6),),
        (("(beta + 2 delta)^2", lambda c: -_f(1, 32) * (c.q.beta + 2 * c.q.delta) ** 2
          * (14 * c.q.delta - c.q.beta - 4 * c.s2)),
         ("printed (beta + 2 delta)", lambda c: _f(1, 32) * (c.q.beta + 2 * c.q.delta)
          * (14 * c.q.delta - c.q.beta - 4 * c.s2))),
        applies=_k_is(_MINUS_THREE_HALVES, lambda c: c.rotation_free and c.alphas_vanish),
        condition="K = -3/2, w1 = w2 = w7 = 0, alpha6 = alpha7 = alpha8 = 0", optional=True),
)


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------

@dataclass
class InstanceCoefficients:
    """Extracted and predicted values of every applicable row for one instance."""
    params: MotionParams
    k: Fraction
    # row name -> {(key, reading): (extracted, predicted)}
    values: Dict[str, Dict[Tuple[Key, str], Tuple[Fraction, Fraction]]] = field(default_factory=dict)
    not_applicable: List[str] = field(default_factory=list)


def _extract(residual: TrigPoly, key: Key, kind: str) -> Fraction:
    c, s = residual.coefficient(*key)
    value = (c if kind == "cos" else s)(0)
    return Fraction(value)


def _mode_k(mode: str, k: Optional[Scalar]) -> Fraction:
    if mode == "K0":
        return Fraction(0)
    if mode != "general":
        raise ValueError(f"Unknown crosscheck mode {mode!r}; expected K0 or general")
    if k is None:
        raise ValueError("general mode needs a value for K")
    if isinstance(k, float):
        raise ScalarModeError("the coefficient cross-check needs an exact K")
    return Fraction(k)


def extract_coefficients(p: MotionParams, mode: str = "K0", k: Optional[Scalar] = None,
                         rows: Sequence[CoefficientRow] = COEFFICIENT_TABLE) -> InstanceCoefficients:
    """Coefficients of P (K0) or P - K Q (general) next to every reading of every row."""
    if not p.exact:
        raise ScalarModeError("the coefficient cross-check runs on exact instances only")
    require_preconditions(p)
    kval = _mode_k(mode, k)
    cq = scalar_curvature(p, "symbolic")
    residual = cq.P if kval == 0 else cq.residual(kval)
    ctx = CoefficientContext(params=p, q=derived_quantities(p), k=kval)
    out = InstanceCoefficients(params=p, k=kval)
    for row in rows:
        if not row.applies(ctx):
            out.not_applicable.append(row.name)
            continue
        cells = {}
        for key in row.keys:
            extracted = _extract(residual, key, row.kind)
            for label, formula in row.readings:
                cells[(key, label)] = (extracted, Fraction(formula(ctx)))
        out.values[row.name] = cells
    return out


# ---------------------------------------------------------------------------
# Adjudication
# ---------------------------------------------------------------------------

@dataclass
class RowOutcome:
    name: str
    kind: str
    condition: str
    optional: bool
    status: str = "not applicable"      # match | classification only | vacuous | mismatch | not applicable
    key: Optional[Key] = None
    reading: Optional[str] = None
    normalization: Optional[Fraction] = None
    agreement: Tuple[int, int] = (0, 0)
    applicable: int = 0
    rejected: List[str] = field(default_factory=list)


@dataclass
class CrosscheckReport:
    mode: str
    k: Fraction
    instances: int
    rows: List[RowOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Every required row was evaluated on at least one instance and holds."""
        return all(r.status in ("match", "classification only", "vacuous")
                   for r in self.rows if not r.optional)


def _judge(pairs: List[Tuple[Fraction, Fraction]]) -> Tuple[bool, bool, Optional[Fraction], int]:
    """(classification agrees, ratio constant, ratio, agreeing instances)."""
    agreeing = sum(1 for e, p in pairs if (e == 0) == (p == 0))
    ratios = {e / p for e, p in pairs if e != 0 and p != 0}
    classified = agreeing == len(pairs)
    return classified, classified and len(ratios) <= 1, (next(iter(ratios)) if len(ratios) == 1 else None), agreeing


def adjudicate(results: Sequence[InstanceCoefficients], mode: str, k: Fraction,
               rows: Sequence[CoefficientRow] = COEFFICIENT_TABLE) -> CrosscheckReport:
    report = CrosscheckReport(mode=mode, k=k, instances=len(results))
    for row in rows:
        outcome = RowOutcome(name=row.name, kind=row.kind, condition=row.condition, optional=row.optional)
        applicable = [r.values[row.name] for r in results if row.name in r.values]
        outcome.applicable = len(applicable)
        if not applicable:
            report.rows.append(outcome)
            continue

        candidates = []
        for key in row.keys:
            for label, _ in row.readings:
                pairs = [cells[(key, label)] for cells in applicable]
                classified, consistent, ratio, agreeing = _judge(pairs)
                support = sum(1 for e, p in pairs if e != 0 and p != 0)
                candidates.append((key, label, classified, consistent, ratio, agreeing, support, len(pairs)))

        def rank(c):
            key, label, classified, consistent, ratio, agreeing, support, total = c
            return (consistent, classified, support, agreeing)

        best = max(candidates, key=rank)
        key, label, classified, consistent, ratio, agreeing, support, total = best
        outcome.key, outcome.reading, outcome.agreement = key, label, (agreeing, total)
        if consistent and support == 0:
            outcome.status = "vacuous"
        elif consistent:
            outcome.status, outcome.normalization = "match", ratio
        elif classified:
            outcome.status = "classification only"
        else:
            outcome.status = "mismatch"
        outcome.rejected = sorted({lab for k_, lab, cl, co, *_ in candidates if lab != label})
        report.rows.append(outcome)
        logger.info("crosscheck %s: %s (key %s, reading %s)", row.name, outcome.status, key, label)
    return report


def crosscheck_instances(seed: int, n: int) -> List[MotionParams]:
    """
    Exact instances cycling through four shapes: full rotation vector, v = 0
    (so w1 = w2 = w7 = 0), no translation (alpha6..8 = 0), and a General34
    member (v = 0 with b' along R e4, so both hold at once).
    """
    out = []
    for index in range(n):
        shape = index % 4
        if shape == 3:
            out.append(sample_frame(FamilyKind.GENERAL34, seed, index).params())
            continue
        frame = sample_frame(FamilyKind.UNCONSTRAINED, seed, index, planar_rotation=(shape != 1))
        if shape == 2:
            frame = replace(frame, b=(0, 0, 0, 0))
        out.append(frame.params())
    return out


def coefficient_crosscheck(instances: Union[MotionParams, Sequence[MotionParams]], mode: str = "K0",
                           k: Optional[Scalar] = None,
                           rows: Sequence[CoefficientRow] = COEFFICIENT_TABLE) -> CrosscheckReport:
    """
    Extract, evaluate and adjudicate every row over the given exact instances.
    Float instances are refused.
    """
    if isinstance(instances, MotionParams):
        instances = [instances]
    kval = _mode_k(mode, k)
    results = [extract_coefficients(p, mode, kval, rows) for p in instances]
    return adjudicate(results, mode, kval, rows)
