# Equiform Core data contracts
# Parameter files consumed by the CLI and the JSON reports it emits.

from __future__ import annotations

from fractions import Fraction
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StrictFloat, StrictInt, StrictStr, field_validator, model_validator

from equiform_core.motion import D_PRIME_COUNT, OMEGA_COUNT, MotionParams
from equiform_core.utils import format_scalar, json_scalar, parse_scalar

JsonScalar = Union[StrictInt, StrictFloat, StrictStr]


def _dump(value) -> Optional[JsonScalar]:
    if value is None:
        return None
    return json_scalar(value)


# ============================================================================
# Input Models
# ============================================================================

class ParamsFile(BaseModel):
    """
    First-order motion parameters as written in a JSON file.

    - s_prime: scaling rate
    - omega: the 21 entries of the rotation rate, row by row above the diagonal
    - d_prime: the 7 entries of the translation rate

    Integers are mode-neutral. "p/q" strings force exact mode, JSON floats
    (1.0 included) force float mode, and mixing the two is rejected.
    """
    model_config = ConfigDict(extra='forbid')

    s_prime: JsonScalar = Field(..., description='Scaling rate s\' (required)')
    omega: List[JsonScalar] = Field(
        ..., min_length=OMEGA_COUNT, max_length=OMEGA_COUNT,
        description='Rotation rate entries omega_1..omega_21 (required)',
    )
    d_prime: List[JsonScalar] = Field(
        ..., min_length=D_PRIME_COUNT, max_length=D_PRIME_COUNT,
        description='Translation rate entries b\'_1..b\'_7 (required)',
    )

    @field_validator('s_prime')
    @classmethod
    def _check_scalar(cls, v):
        parse_scalar(v)
        return v

    @field_validator('omega', 'd_prime')
    @classmethod
    def _check_scalars(cls, v):
        for item in v:
            parse_scalar(item)
        return v

    def _entries(self) -> List[JsonScalar]:
        return [self.s_prime, *self.omega, *self.d_prime]

    @model_validator(mode='after')
    def _check_mode(self):
        has_text = any(isinstance(x, str) for x in self._entries())
        has_float = any(isinstance(x, float) for x in self._entries())
        if has_text and has_float:
            raise ValueError('mixes exact "p/q" strings with floating point numbers')
        return self

    @property
    def mode(self) -> str:
        """'float' when any entry is a JSON float, else 'exact'."""
        if any(isinstance(x, float) for x in self._entries()):
            return 'float'
        return 'exact'

    def to_params(self, mode: str = 'auto') -> MotionParams:
        """MotionParams in the file's own mode ('auto') or a forced one."""
        target = self.mode if mode == 'auto' else mode
        if target not in ('exact', 'float'):
            raise ValueError(f"Unknown mode {mode!r}; expected exact, float or auto")
        if target == 'exact' and any(isinstance(x, float) and not x.is_integer() for x in self._entries()):
            raise ValueError('exact mode requested but the file holds non-integer numbers')

        def convert(x):
            if target == 'float':
                return float(parse_scalar(x))
            value = parse_scalar(x)
            return int(value) if isinstance(value, float) else value

        return MotionParams(convert(self.s_prime), tuple(convert(x) for x in self.omega),
                            tuple(convert(x) for x in self.d_prime))

    @classmethod
    def from_params(cls, p: MotionParams) -> 'ParamsFile':
        return cls(s_prime=json_scalar(p.s_prime), omega=[json_scalar(x) for x in p.omega],
                   d_prime=[json_scalar(x) for x in p.d_prime])


class RunConfig(BaseModel):
    """One CLI invocation after argument parsing."""
    command: str = Field(..., description='Subcommand name (required)')
    inputs: List[str] = Field(default_factory=list, description='Parameter files (optional)')
    seed: int = Field(0, description='Sampling seed')
    count: int = Field(1, ge=1, description='Number of instances for sampling commands')
    tolerance: Optional[float] = Field(None, gt=0, description='Float zero-test tolerance (float mode only)')
    mode: Literal['exact', 'float', 'auto'] = Field('auto', description='Scalar mode for parameter files')
    method: Optional[Literal['auto', 'symbolic', 'spectral']] = Field(None, description='Curvature strategy')
    output: Optional[str] = Field(None, description='Output path (optional, stdout when omitted)')
    format: Literal['text', 'json', 'csv'] = Field('text', description='Report format')
    theorem: Optional[str] = Field(None, description='Theorem id for verify')
    family: Optional[str] = Field(None, description='Family name for sample')
    k: Optional[str] = Field(None, description='K value for the general crosscheck mode')
    reading: Literal['derived', 'printed'] = Field('derived', description='KNeg32A balance reading for check')


# ============================================================================
# Report Models
# ============================================================================

class TheoremReportModel(BaseModel):
    """Outcome of verify_theorem on one instance."""
    theorem: str
    family: str
    params: ParamsFile
    constraints: List[Tuple[str, JsonScalar]] = Field(default_factory=list)
    pipeline_k: Optional[JsonScalar] = None
    predicted_k: Optional[JsonScalar] = None
    verdict: Optional[str] = None
    passed: bool
    diagnostics: List[str] = Field(default_factory=list)

    @classmethod
    def from_report(cls, report) -> 'TheoremReportModel':
        return cls(
            theorem=report.theorem,
            family=report.family.value,
            params=ParamsFile.from_params(report.params),
            constraints=[(label, json_scalar(r)) for label, r in
                         zip(report.constraint_labels, report.constraint_residuals)],
            pipeline_k=_dump(report.pipeline_k),
            predicted_k=_dump(report.predicted_k),
            verdict=report.verdict.describe() if report.verdict is not None else None,
            passed=report.passed,
            diagnostics=list(report.diagnostics),
        )


class ScanRecordModel(BaseModel):
    index: int
    family: str
    s_prime: JsonScalar
    beta: JsonScalar
    delta: JsonScalar
    k: Optional[float] = None
    constant: bool
    status: str
    note: str = ''

    @classmethod
    def from_record(cls, rec) -> 'ScanRecordModel':
        return cls(index=rec.index, family=rec.family.value, s_prime=json_scalar(rec.params.s_prime),
                   beta=json_scalar(rec.beta), delta=json_scalar(rec.delta), k=rec.k,
                   constant=rec.constant, status=rec.status, note=rec.note)


class ScanStatsModel(BaseModel):
    """Summary of a sampled corollary check."""
    name: str
    seed: int
    requested: int
    count: int
    constant_count: int
    min_k: Optional[float] = None
    max_k: Optional[float] = None
    histogram_counts: List[int] = Field(default_factory=list)
    histogram_edges: List[float] = Field(default_factory=list)
    extremes: List[ScanRecordModel] = Field(default_factory=list)
    rejected: List[str] = Field(default_factory=list)
    failures: List[str] = Field(default_factory=list)
    observations: List[str] = Field(default_factory=list)
    passed: bool

    @classmethod
    def from_stats(cls, stats) -> 'ScanStatsModel':
        counts, edges = stats.histogram
        return cls(name=stats.name, seed=stats.seed, requested=stats.requested, count=stats.count,
                   constant_count=stats.constant_count, min_k=stats.min_k, max_k=stats.max_k,
                   histogram_counts=[int(c) for c in counts], histogram_edges=[float(e) for e in edges],
                   extremes=[ScanRecordModel.from_record(r) for r in stats.extremes],
                   rejected=list(stats.rejected), failures=list(stats.failures),
                   observations=list(stats.observations), passed=stats.passed)


class CoefficientRowModel(BaseModel):
    name: str
    kind: Literal['cos', 'sin']
    condition: str
    optional: bool
    status: str
    key: Optional[Tuple[int, int]] = None
    reading: Optional[str] = None
    normalization: Optional[str] = Field(None, description='Extracted / predicted, as "p/q"')
    agreement: Tuple[int, int]
    applicable: int
    rejected: List[str] = Field(default_factory=list)


class CrosscheckReportModel(BaseModel):
    """Coefficient cross-check over a set of exact instances."""
    mode: str
    k: str
    instances: int
    passed: bool
    rows: List[CoefficientRowModel] = Field(default_factory=list)

    @classmethod
    def from_report(cls, report) -> 'CrosscheckReportModel':
        rows = [
            CoefficientRowModel(
                name=r.name, kind=r.kind, condition=r.condition, optional=r.optional, status=r.status,
                key=r.key, reading=r.reading,
                normalization=format_scalar(r.normalization) if r.normalization is not None else None,
                agreement=r.agreement, applicable=r.applicable, rejected=list(r.rejected),
            )
            for r in report.rows
        ]
        return cls(mode=report.mode, k=format_scalar(Fraction(report.k)), instances=report.instances,
                   passed=report.passed, rows=rows)


class ProbeReportModel(BaseModel):
    total: int
    detected: int
    detected_by_pipeline: int
    rate: float = Field(..., description="Share of evaluated instances the curvature tells apart")
    passed: bool
    skipped: List[str] = Field(default_factory=list)
    undetected: List[int] = Field(default_factory=list)

    @classmethod
    def from_report(cls, report) -> 'ProbeReportModel':
        return cls(total=report.total, detected=report.detected,
                   detected_by_pipeline=report.detected_by_pipeline, rate=report.rate, passed=report.passed,
                   skipped=list(report.skipped), undetected=list(report.undetected))
