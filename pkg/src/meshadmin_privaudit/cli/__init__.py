"""CLI module for MeshAdminPrivAudit."""

from .main import PrivAuditCLI, main

__all__ = ["PrivAuditCLI", "main"]
