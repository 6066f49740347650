"""System boundary module for MeshAdminPrivAudit."""

from .checker import AC, IFS, BoundaryChecker, BoundaryViolation
from .layout import BoundaryRole, SystemDef, SystemLayout

__all__ = [
    "AC",
    "IFS",
    "BoundaryChecker",
    "BoundaryViolation",
    "BoundaryRole",
    "SystemDef",
    "SystemLayout"
]
