#!/usr/bin/env python3
"""
Taint Model - Label sets, taint specifications, and label assignments.
"""

import logging
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional

from ..errors import LabelAssignmentError, UnknownNodeError
from ..graph.policy import PolicyGraph

Label = str

logger = logging.getLogger(__name__)


def format_labels(labels: Iterable[Label]) -> str:
    """Render a label set as '{a,b}' in lexicographic order."""
    return "{" + ",".join(sorted(labels)) + "}"


@dataclass(frozen=True)
class TaintSpec:
    """Taints X and untaints Y of one node, always with Y a subset of X."""

    taints: FrozenSet[Label] = frozenset()
    untaints: FrozenSet[Label] = frozenset()

    def __post_init__(self):
        if not self.untaints <= self.taints:
            raise ValueError(
                f"untaints {format_labels(self.untaints)} not a subset of "
                f"taints {format_labels(self.taints)}; construct with normalize()")

    def effective_taints(self) -> FrozenSet[Label]:
        """Labels carried by data leaving the node: taints minus untaints."""
        return self.taints - self.untaints

    @property
    def is_empty(self) -> bool:
        return not self.taints

    def __str__(self) -> str:
        return f"{format_labels(self.taints)}-{format_labels(self.untaints)}"


EMPTY_SPEC = TaintSpec()


def normalize(taints: Iterable[Label] = (), untaints: Iterable[Label] = ()) -> TaintSpec:
    """Build a TaintSpec from user input X-Y, stored as (X | Y) - Y."""
    y = frozenset(untaints)
    return TaintSpec(taints=frozenset(taints) | y, untaints=y)


def effective_taints(spec: TaintSpec) -> FrozenSet[Label]:
    """Labels that actually flow out of a node with the given spec."""
    return spec.effective_taints()


class LabelAssignment(Mapping):
    """Partial or total mapping from node to TaintSpec."""

    def __init__(self, entries: Optional[Mapping[str, TaintSpec]] = None, total: bool = False):
        """Initialize assignment; entries keep insertion order."""
        self._entries: Dict[str, TaintSpec] = dict(entries or {})
        self.total = total

    def __getitem__(self, node: str) -> TaintSpec:
        return self._entries[node]

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabelAssignment):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self) -> str:
        body = ", ".join(f"{n}: {s}" for n, s in self._entries.items())
        return f"LabelAssignment({{{body}}}, total={self.total})"

    @property
    def entries(self) -> Mapping[str, TaintSpec]:
        return MappingProxyType(self._entries)

    def label_universe(self) -> FrozenSet[Label]:
        """Union of all taint sets in the assignment."""
        universe = set()
        for spec in self._entries.values():
            universe |= spec.taints
        return frozenset(universe)

    def covers(self, graph: PolicyGraph) -> bool:
        """Check that every node of the graph has an entry."""
        return all(node in self._entries for node in graph.nodes)

    def require_total(self, graph: PolicyGraph) -> None:
        """Raise LabelAssignmentError unless every graph node is mapped."""
        missing = [node for node in graph.nodes if node not in self._entries]
        if missing:
            raise LabelAssignmentError(
                f"Label assignment is not total; unmapped nodes: {', '.join(missing)}")

    def with_entry(self, node: str, spec: TaintSpec) -> 'LabelAssignment':
        """Return a copy with one entry set."""
        entries = dict(self._entries)
        entries[node] = spec
        return LabelAssignment(entries, total=self.total)

    def totalize(self, graph: PolicyGraph) -> 'LabelAssignment':
        """Fill every unmapped node with the empty default spec."""
        for node in self._entries:
            if node not in graph:
                raise UnknownNodeError(node, "label assignment")

        entries: Dict[str, TaintSpec] = {}
        defaulted = []
        for node in graph.nodes:
            if node in self._entries:
                entries[node] = self._entries[node]
            else:
                entries[node] = EMPTY_SPEC
                defaulted.append(node)

        if defaulted:
            logger.debug(f"Defaulted {len(defaulted)} unlabeled nodes to {EMPTY_SPEC}: "
                         f"{', '.join(defaulted)}")
        return LabelAssignment(entries, total=True)


def totalize(partial: LabelAssignment, graph: PolicyGraph) -> LabelAssignment:
    """Totalize a partial assignment over graph with the empty default."""
    return partial.totalize(graph)
