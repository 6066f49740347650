#!/usr/bin/env python3
"""
Taint Checker - Tainting invariants, offending flows, repair, and policy synthesis.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, Iterable, List, Optional

from ..boundaries.checker import BoundaryChecker
from ..boundaries.layout import SystemLayout
from ..errors import InternalInconsistencyError
from ..graph.policy import Edge, PolicyGraph
from .model import Label, LabelAssignment, format_labels


@dataclass(frozen=True)
class TaintViolation:
    """An offending flow and the labels that leak over it."""

    edge: Edge
    witness: FrozenSet[Label]

    def describe(self) -> str:
        return f"{self.edge[0]} -> {self.edge[1]}, witness {format_labels(self.witness)}"


class TaintChecker:
    """Evaluates the tainting invariants over a policy graph."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize taint checker."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

        # Cross-check the localized check against the closure form
        self.closure_self_check = self.config.get('closure_self_check', False)
        self.boundary_checker = BoundaryChecker(self.config)

    def check_closure(self, graph: PolicyGraph, labels: LabelAssignment) -> bool:
        """Simple tainting over the transitive closure; untaints are ignored."""
        labels.require_total(graph)
        for node in graph.nodes:
            source = labels[node].taints
            for receiver in graph.reachable_from(node):
                if not source <= labels[receiver].taints:
                    self.logger.debug(f"Closure check fails: {node} reaches {receiver}")
                    return False
        return True

    def check_local(self, graph: PolicyGraph, labels: LabelAssignment) -> bool:
        """Simple tainting checked edge by edge; untaints are ignored."""
        labels.require_total(graph)
        result = all(labels[src].taints <= labels[dst].taints for src, dst in graph.edges)

        if self.closure_self_check:
            closure = self.check_closure(graph, labels)
            if closure != result:
                self.logger.error(f"Localized check ({result}) disagrees with closure check ({closure})")
                raise InternalInconsistencyError(
                    "localized and closure tainting checks disagree")
        return result

    def _leak(self, labels: LabelAssignment, edge: Edge) -> FrozenSet[Label]:
        src, dst = edge
        return labels[src].effective_taints() - labels[dst].taints

    def edge_satisfied(self, labels: LabelAssignment, edge: Edge) -> bool:
        """Local tainting' condition for one edge."""
        return not self._leak(labels, edge)

    def check_full(self, graph: PolicyGraph, labels: LabelAssignment) -> bool:
        """Tainting' with untaints: effective taints of a sender reach only holders."""
        labels.require_total(graph)
        result = all(self.edge_satisfied(labels, edge) for edge in graph.edges)

        if self.closure_self_check and all(not labels[n].untaints for n in graph.nodes):
            # Without untaints the full model collapses to the simple one
            if self.check_local(graph, labels) != result:
                raise InternalInconsistencyError(
                    "full tainting check disagrees with simple check on empty untaints")
        return result

    def violations(self, graph: PolicyGraph, labels: LabelAssignment) -> List[TaintViolation]:
        """Offending flows with their witnessing label sets, in edge order."""
        labels.require_total(graph)
        found = []
        for edge in graph.edges:
            leak = self._leak(labels, edge)
            if leak:
                self.logger.debug(f"Offending flow {edge[0]} -> {edge[1]}: {format_labels(leak)}")
                found.append(TaintViolation(edge, leak))
        return found

    def offending_flows(self, graph: PolicyGraph, labels: LabelAssignment) -> List[Edge]:
        """Exactly the edges violating the local tainting' condition."""
        return [violation.edge for violation in self.violations(graph, labels)]

    def repair(self, graph: PolicyGraph, labels: LabelAssignment) -> PolicyGraph:
        """Prohibit all offending flows; the result is the maximal satisfying subgraph."""
        offending = self.offending_flows(graph, labels)
        if offending:
            self.logger.info(f"Repair removes {len(offending)} offending flows")
        return graph.remove_edges(offending)

    def synthesize_max_policy(self, nodes: Iterable[str], labels: LabelAssignment,
                              layout: Optional[SystemLayout] = None) -> PolicyGraph:
        """All ordered pairs u != v allowed by tainting' and, if given, the boundaries."""
        node_list = list(nodes)
        graph = PolicyGraph(node_list)
        labels.require_total(graph)
        if layout is not None:
            layout.validate(graph)

        edges = []
        for src in node_list:
            for dst in node_list:
                if src == dst:
                    continue
                edge = (src, dst)
                if not self.edge_satisfied(labels, edge):
                    continue
                if layout is not None and not self.boundary_checker.edge_allowed(edge, layout):
                    continue
                edges.append(edge)

        self.logger.info(f"Synthesized {len(edges)} permitted flows over {len(node_list)} nodes")
        return PolicyGraph(node_list, edges)
