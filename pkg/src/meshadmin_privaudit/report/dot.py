#!/usr/bin/env python3
"""
DOT Export - Graphviz rendering of architectures and per-subject views.
"""

import logging
from typing import Any, Dict, Iterable, List, Optional

from ..spec.model import ArchitectureSpec
from ..spec.parser import ArchSpecParser
from .analysis import TAINT_VIOLATION, Finding, UserView


def escape(text: str) -> str:
    return text.replace('\\', '\\\\').replace('"', '\\"')


def quote(text: str) -> str:
    """Quote a DOT identifier or string."""
    return '"' + escape(text) + '"'


class DotExporter:
    """Renders a spec as a DOT digraph with one cluster per system."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize exporter."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

        self.violation_color = self.config.get('violation_color', 'red')
        self.spec_parser = ArchSpecParser()

    def _node_line(self, node: str, caption: str, indent: str) -> str:
        # Two-line caption: name, then labels
        label = f'"{escape(node)}\\n{escape(caption)}"'
        return f"{indent}{quote(node)} [label={label}];"

    def export(self, spec: ArchitectureSpec, findings: Iterable[Finding] = ()) -> str:
        """Whole architecture; edges named by violation findings are highlighted."""
        expanded = self.spec_parser.expand_crypto_pairs(spec)
        labels = expanded.total_labels()
        graph = expanded.graph

        marks: Dict[tuple, List[str]] = {}
        for finding in findings:
            if not finding.is_violation or finding.edge is None:
                continue
            mark = finding.witness if finding.kind == TAINT_VIOLATION else finding.kind
            marks.setdefault(finding.edge, [])
            if mark not in marks[finding.edge]:
                marks[finding.edge].append(mark)

        lines = ["digraph architecture {", "  node [shape=box];"]
        clustered = set()
        for system in expanded.layout.systems:
            lines.append(f"  subgraph {quote('cluster_' + system.name)} {{")
            lines.append(f"    label={quote(system.name)};")
            for member, role in system.members:
                lines.append(self._node_line(member, f"{labels[member]} ({role.value})", "    "))
                clustered.add(member)
            lines.append("  }")
        for node in graph.nodes:
            if node not in clustered:
                lines.append(self._node_line(node, str(labels[node]), "  "))

        for src, dst in graph.edges:
            edge = (src, dst)
            if edge in marks:
                lines.append(f"  {quote(src)} -> {quote(dst)} "
                             f"[color={self.violation_color}, label={quote(', '.join(marks[edge]))}];")
            else:
                lines.append(f"  {quote(src)} -> {quote(dst)} [color=black];")
        lines.append("}")

        self.logger.debug(f"Exported {len(graph.nodes)} nodes, {len(marks)} highlighted edges")
        return "\n".join(lines) + "\n"

    def export_view(self, view: UserView) -> str:
        """A per-subject view; leaking edges end in dashed nodes outside the view."""
        lines = [f"digraph {quote('view_' + view.label)} {{", "  node [shape=box];"]
        for node in view.graph.nodes:
            lines.append(self._node_line(node, str(view.annotations[node]), "  "))
        for src, dst in view.graph.edges:
            lines.append(f"  {quote(src)} -> {quote(dst)} [color=black];")
        for src, dst in view.leaks:
            lines.append(f"  {quote(dst)} [style=dashed];")
            lines.append(f"  {quote(src)} -> {quote(dst)} "
                         f"[color={self.violation_color}, label={quote('{' + view.label + '}')}];")
        lines.append("}")
        return "\n".join(lines) + "\n"
