#!/usr/bin/env python3
"""
Exception types raised by MeshAdminPrivAudit components.
"""

from typing import Optional


class PrivAuditError(Exception):
    """Base class for all MeshAdminPrivAudit errors."""


class GraphError(PrivAuditError):
    """Malformed policy graph or node name."""


class UnknownNodeError(GraphError):
    """A node name is referenced that the graph does not declare."""

    def __init__(self, node: str, context: str = ""):
        self.node = node
        message = f"Unknown node: {node}"
        if context:
            message = f"{message} ({context})"
        super().__init__(message)


class LabelAssignmentError(PrivAuditError):
    """A label assignment does not cover the nodes it is used with."""


class MissingAttributeError(PrivAuditError):
    """A Bell-LaPadula clearance or attribute is missing for a node."""


class InternalInconsistencyError(PrivAuditError):
    """Two analyses that must agree produced different verdicts."""


class LayoutError(PrivAuditError):
    """Invalid system layout (overlapping systems, unknown member)."""


class SpecParseError(PrivAuditError):
    """Syntax or validation error in an architecture document."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        self.reason = message
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class CryptoPairConflictError(PrivAuditError):
    """A crypto pair expansion contradicts an explicit label declaration."""


class RulesetParseError(PrivAuditError):
    """Syntax error in an iptables-save document."""

    def __init__(self, message: str, line: int = 0):
        self.line = line
        self.reason = message
        if line:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedFeatureError(RulesetParseError):
    """An iptables construct outside the supported dialect."""

    def __init__(self, token: str, line: int = 0):
        self.token = token
        super().__init__(f"unsupported feature: {token}", line)


class AddressError(PrivAuditError):
    """Invalid host address or prefix."""


class NoAddressError(PrivAuditError):
    """A firewall host has no address in the architecture."""


class NotApplicableError(PrivAuditError):
    """A reachability query does not involve the host the ruleset is installed on."""


class PolicyViolationError(PrivAuditError):
    """An operation requires a model that passes all invariant checks."""

    def __init__(self, message: str, findings: Optional[list] = None):
        self.findings = findings or []
        super().__init__(message)
