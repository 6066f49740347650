"""Bell-LaPadula module for MeshAdminPrivAudit."""

from .bridge import CONFIDENTIAL, SECRET, UNCLASSIFIED, BlpAttr, BlpBridge, Clearance

__all__ = ["CONFIDENTIAL", "SECRET", "UNCLASSIFIED", "BlpAttr", "BlpBridge", "Clearance"]
