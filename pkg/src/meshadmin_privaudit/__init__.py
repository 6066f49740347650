"""
MeshAdminPrivAudit - Static privacy analysis of software architectures.

Components carry taint labels for the kinds of personal data they may hold.
The package checks that data only flows to components entitled to it, relates
that check to Bell-LaPadula per data subject, enforces system boundaries, and
turns a verified architecture into host firewall rules that can be audited.
"""

__version__ = "1.0.0"
__author__ = "MeshAdmin"
__email__ = "admin@meshadmin.com"

from .graph.policy import PolicyGraph
from .taint.model import LabelAssignment, TaintSpec, normalize
from .taint.checker import TaintChecker
from .boundaries.checker import BoundaryChecker
from .blp.bridge import BlpBridge
from .spec.parser import ArchSpecParser
from .firewall.generator import FirewallGenerator
from .firewall.auditor import FirewallAuditor
from .report.analysis import ReportBuilder
from .report.dot import DotExporter

__all__ = [
    "PolicyGraph",
    "LabelAssignment",
    "TaintSpec",
    "normalize",
    "TaintChecker",
    "BoundaryChecker",
    "BlpBridge",
    "ArchSpecParser",
    "FirewallGenerator",
    "FirewallAuditor",
    "ReportBuilder",
    "DotExporter"
]
