"""
Equiform Core data models

Schemas for motion parameter files and for the JSON reports written by the
command-line front end.
"""

from .models import (
    JsonScalar,
    ParamsFile,
    RunConfig,
    TheoremReportModel,
    ScanRecordModel,
    ScanStatsModel,
    CoefficientRowModel,
    CrosscheckReportModel,
    ProbeReportModel,
)

__all__ = [
    "JsonScalar",
    "ParamsFile",
    "RunConfig",
    "TheoremReportModel",
    "ScanRecordModel",
    "ScanStatsModel",
    "CoefficientRowModel",
    "CrosscheckReportModel",
    "ProbeReportModel",
]
