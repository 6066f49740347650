"""Taint model module for MeshAdminPrivAudit."""

from .checker import TaintChecker, TaintViolation
from .model import (
    EMPTY_SPEC,
    Label,
    LabelAssignment,
    TaintSpec,
    effective_taints,
    format_labels,
    normalize,
    totalize,
)

__all__ = [
    "EMPTY_SPEC",
    "Label",
    "LabelAssignment",
    "TaintChecker",
    "TaintSpec",
    "TaintViolation",
    "effective_taints",
    "format_labels",
    "normalize",
    "totalize"
]
