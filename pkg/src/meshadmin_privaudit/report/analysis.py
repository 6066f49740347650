#!/usr/bin/env python3
"""
Analysis Report - Findings, per-subject views and criticality metrics.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Tuple

from ..blp.bridge import BlpAttr, BlpBridge, Clearance
from ..boundaries.checker import AC, BoundaryChecker
from ..graph.policy import Edge, PolicyGraph
from ..spec.model import ArchitectureSpec
from ..spec.parser import ArchSpecParser
from ..taint.checker import TaintChecker
from ..taint.model import Label, LabelAssignment, format_labels

TAINT_VIOLATION = "taint-violation"
AC_VIOLATION = "ac-violation"
IFS_VIOLATION = "ifs-violation"
LINT = "lint"

PET_NOTE = ("note: PET components are identified by non-empty untaints only; "
            "whether a PET really removes the information is not checked")


@dataclass(frozen=True)
class Finding:
    """One reported problem; lints may name a single node instead of an edge."""

    kind: str
    src: str
    dst: Optional[str] = None
    witness: str = ""

    @property
    def is_violation(self) -> bool:
        return self.kind != LINT

    @property
    def edge(self) -> Optional[Edge]:
        return (self.src, self.dst) if self.dst is not None else None

    def describe(self) -> str:
        subject = f"{self.src} -> {self.dst}" if self.dst is not None else self.src
        if self.kind == TAINT_VIOLATION:
            return f"{self.kind}: {subject}, witness {self.witness}"
        return f"{self.kind}: {subject}, {self.witness}"

    def tsv(self) -> str:
        return "\t".join([self.kind, self.src, self.dst or "-", self.witness])


@dataclass(frozen=True)
class NodeMetrics:
    node: str
    taint_count: int
    is_pet: bool


@dataclass(frozen=True)
class Metrics:
    """Per-node counts, per-label exposure and linkability hotspots, sorted by name."""

    nodes: Tuple[NodeMetrics, ...] = ()
    exposure: Dict[Label, int] = field(default_factory=dict)
    hotspots: Tuple[str, ...] = ()

    def node(self, name: str) -> Optional[NodeMetrics]:
        for entry in self.nodes:
            if entry.node == name:
                return entry
        return None


@dataclass(frozen=True)
class UserView:
    """The part of the architecture that handles one data subject's label."""

    label: Label
    graph: PolicyGraph
    annotations: Dict[str, BlpAttr] = field(default_factory=dict)
    # Edges carrying the label to a node that does not hold it
    leaks: Tuple[Edge, ...] = ()


class ReportBuilder:
    """Runs the analyses over an architecture and renders their results."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize report builder."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

        self.theorem_self_check = self.config.get('theorem_self_check', True)
        self.lint_self_loops = self.config.get('lint_self_loops', True)
        self.lint_unlabeled_nodes = self.config.get('lint_unlabeled_nodes', True)

        self.taint_checker = TaintChecker(self.config)
        self.boundary_checker = BoundaryChecker(self.config)
        self.blp_bridge = BlpBridge(self.config, self.taint_checker)
        self.spec_parser = ArchSpecParser(self.config)

    def prepare(self, spec: ArchitectureSpec) -> Tuple[ArchitectureSpec, LabelAssignment]:
        """Expand crypto pairs and totalize the labels."""
        expanded = self.spec_parser.expand_crypto_pairs(spec)
        return expanded, expanded.total_labels()

    def findings(self, spec: ArchitectureSpec) -> List[Finding]:
        """Taint and boundary violations in edge order, followed by lints."""
        expanded, labels = self.prepare(spec)
        graph = expanded.graph

        found = [Finding(TAINT_VIOLATION, v.edge[0], v.edge[1], format_labels(v.witness))
                 for v in self.taint_checker.violations(graph, labels)]

        for violation in self.boundary_checker.check_boundaries(graph, expanded.layout):
            kind = AC_VIOLATION if violation.kind == AC else IFS_VIOLATION
            found.append(Finding(kind, violation.edge[0], violation.edge[1], violation.describe()))

        if self.theorem_self_check:
            self.blp_bridge.verify_equivalence(graph, labels)

        found.extend(self.lints(spec))
        violations = sum(1 for f in found if f.is_violation)
        self.logger.info(f"Analysis of {len(graph.nodes)} nodes and {len(graph.edges)} edges: "
                         f"{violations} violations, {len(found) - violations} lints")
        return found

    def lints(self, spec: ArchitectureSpec) -> List[Finding]:
        """Suspicious but legal constructs."""
        found = []
        if self.lint_self_loops:
            for src, dst in spec.graph.self_loops():
                self.logger.warning(f"Self-loop on {src}")
                found.append(Finding(LINT, src, dst, "self-loop"))
        if self.lint_unlabeled_nodes:
            paired = {node for pair in spec.pairs for node in (pair.enc, pair.dec)}
            for node in spec.unlabeled_nodes():
                if node not in paired:
                    self.logger.warning(f"Node {node} has no labels; defaulting to {{}}-{{}}")
                    found.append(Finding(LINT, node, None, "unlabeled, defaulted to {}-{}"))
        for src, dst in spec.duplicate_edges:
            found.append(Finding(LINT, src, dst, "duplicate edge collapsed"))
        for name in self.boundary_checker.isolated_systems(spec.layout):
            found.append(Finding(LINT, name, None, "system has no boundary role and is isolated"))
        return found

    def user_view(self, spec: ArchitectureSpec, label: Label) -> UserView:
        """Nodes that may hold label and the edges its data actually flows over."""
        expanded, labels = self.prepare(spec)
        graph = expanded.graph
        if label not in labels.label_universe():
            self.logger.warning(f"Label {label} does not occur in the architecture")
            return UserView(label, PolicyGraph())

        members = [node for node in graph.nodes if label in labels[node].taints]
        edges, leaks = [], []
        for src, dst in graph.edges:
            if label not in labels[src].effective_taints():
                continue
            if dst in members:
                edges.append((src, dst))
            else:
                leaks.append((src, dst))

        annotations = {node: self.blp_bridge.project_label(label, labels[node]) for node in members}
        return UserView(label, PolicyGraph(members, edges), annotations, tuple(leaks))

    def criticality_metrics(self, spec: ArchitectureSpec) -> Metrics:
        """Taint counts, PET flags, label exposure and linkability hotspots."""
        expanded, labels = self.prepare(spec)
        names = sorted(expanded.graph.nodes)

        nodes = tuple(NodeMetrics(node, len(labels[node].taints), bool(labels[node].untaints))
                      for node in names)
        exposure = {label: sum(1 for node in names if label in labels[node].taints)
                    for label in sorted(labels.label_universe())}
        hotspots = tuple(node for node in names if len(labels[node].effective_taints()) >= 2)
        return Metrics(nodes, exposure, hotspots)

    def group_clearances(self, spec: ArchitectureSpec, group: Iterable[Label]) -> Dict[str, Clearance]:
        """Clearance of every node for a group of data subjects, sorted by node."""
        _, labels = self.prepare(spec)
        clearances = self.blp_bridge.project_set_assignment(group, labels)
        return {node: clearances[node] for node in sorted(clearances)}

    def render_findings(self, findings: List[Finding], fmt: str = "text") -> str:
        if fmt == "tsv":
            return "".join(f.tsv() + "\n" for f in findings)
        lines = [f.describe() for f in findings]
        count = sum(1 for f in findings if f.is_violation)
        lines.append(f"{count} violation{'' if count == 1 else 's'}")
        return "\n".join(lines) + "\n"

    def render_metrics(self, metrics: Metrics, fmt: str = "text") -> str:
        if fmt == "tsv":
            lines = [f"node\t{m.node}\t{m.taint_count}\t{'pet' if m.is_pet else '-'}"
                     for m in metrics.nodes]
            lines += [f"label\t{label}\t{count}" for label, count in metrics.exposure.items()]
            lines += [f"hotspot\t{node}" for node in metrics.hotspots]
            return "".join(line + "\n" for line in lines)

        lines = ["nodes:"]
        for m in metrics.nodes:
            lines.append(f"  {m.node}: taint-count {m.taint_count}{', PET' if m.is_pet else ''}")
        lines.append("label exposure:")
        for label, count in metrics.exposure.items():
            lines.append(f"  {label}: {count} nodes")
        lines.append(f"linkability hotspots: {', '.join(metrics.hotspots) or 'none'}")
        lines.append(PET_NOTE)
        return "\n".join(lines) + "\n"

    def render_view(self, view: UserView, verdict: Optional[bool] = None) -> str:
        lines = [f"view {view.label}: {len(view.graph.nodes)} nodes, {len(view.graph.edges)} edges"]
        for node in view.graph.nodes:
            lines.append(f"  {node}: {view.annotations[node]}")
        for src, dst in view.graph.edges:
            lines.append(f"  {src} -> {dst}")
        for src, dst in view.leaks:
            lines.append(f"  leak: {src} -> {dst}")
        if verdict is not None:
            lines.append(f"blp' {'holds' if verdict else 'fails'} for {view.label}")
        return "\n".join(lines) + "\n"
