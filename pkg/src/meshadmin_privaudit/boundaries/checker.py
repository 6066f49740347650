#!/usr/bin/env python3
"""
Boundary Checker - Access-control and information-flow invariants of system boundaries.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from ..graph.policy import Edge, PolicyGraph
from .layout import BoundaryRole, SystemLayout

AC = "AC"
IFS = "IFS"


@dataclass(frozen=True)
class BoundaryViolation:
    """A cross-system edge that breaks a boundary invariant."""

    kind: str
    edge: Edge
    system: str
    role: BoundaryRole

    def describe(self) -> str:
        src, dst = self.edge
        if self.kind == AC:
            return f"{dst} ({self.role.value}) of system {self.system} is reachable from outside"
        return f"{src} ({self.role.value}) of system {self.system} sends outside its system"


class BoundaryChecker:
    """Translates system boundaries into one AC and one IFS edge predicate."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize boundary checker."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

    def edge_violations(self, edge: Edge, layout: SystemLayout) -> List[BoundaryViolation]:
        """Evaluate both predicates on one edge; intra-system edges never violate."""
        src, dst = edge
        src_system = layout.system_of(src)
        dst_system = layout.system_of(dst)
        if src_system == dst_system:
            return []

        violations = []
        # Access control: only passive boundaries may be entered from outside
        if dst_system is not None:
            role = layout.role_of(dst)
            if not role.accepts_incoming:
                violations.append(BoundaryViolation(AC, edge, dst_system, role))
        # Information flow: only active boundaries may send outside
        if src_system is not None:
            role = layout.role_of(src)
            if not role.initiates_outgoing:
                violations.append(BoundaryViolation(IFS, edge, src_system, role))
        return violations

    def edge_allowed(self, edge: Edge, layout: SystemLayout) -> bool:
        """Check both boundary predicates for one edge."""
        return not self.edge_violations(edge, layout)

    def check_boundaries(self, graph: PolicyGraph, layout: SystemLayout) -> List[BoundaryViolation]:
        """Return all boundary violations in edge declaration order."""
        layout.validate(graph)

        violations: List[BoundaryViolation] = []
        for edge in graph.edges:
            found = self.edge_violations(edge, layout)
            for violation in found:
                self.logger.debug(f"{violation.kind} violation on {edge[0]} -> {edge[1]}")
            violations.extend(found)

        self.logger.info(f"Boundary check: {len(graph.edges)} edges, "
                         f"{len(layout.systems)} systems, {len(violations)} violations")
        return violations

    def isolated_systems(self, layout: SystemLayout) -> List[str]:
        """Systems without any boundary role; they can have no cross-system edges."""
        return [system.name for system in layout.systems if not system.has_boundary]
