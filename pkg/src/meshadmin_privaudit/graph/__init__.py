"""Policy graph module for MeshAdminPrivAudit."""

from .policy import Edge, PolicyGraph

__all__ = ["Edge", "PolicyGraph"]
