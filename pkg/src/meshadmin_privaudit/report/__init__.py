"""Analysis report module for MeshAdminPrivAudit."""

from .analysis import (
    AC_VIOLATION,
    IFS_VIOLATION,
    LINT,
    TAINT_VIOLATION,
    Finding,
    Metrics,
    NodeMetrics,
    ReportBuilder,
    UserView,
)
from .dot import DotExporter

__all__ = [
    "AC_VIOLATION",
    "IFS_VIOLATION",
    "LINT",
    "TAINT_VIOLATION",
    "DotExporter",
    "Finding",
    "Metrics",
    "NodeMetrics",
    "ReportBuilder",
    "UserView"
]
