#!/usr/bin/env python3
"""
BLP Bridge - Bell-LaPadula invariants and their projection from taint labels.

A taint specification is projected onto one label at a time: nodes that carry the
label in their effective taints become confidential, nodes that untaint it become
trusted. The tainting' invariant holds exactly when blp' holds for every projection,
which is what verify_equivalence() re-checks at runtime.
"""

import logging
from dataclasses import dataclass
from functools import total_ordering
from typing import Any, Dict, Iterable, Mapping, Optional, Union

from ..errors import InternalInconsistencyError, MissingAttributeError
from ..graph.policy import PolicyGraph
from ..taint.checker import TaintChecker
from ..taint.model import Label, LabelAssignment, TaintSpec

_LEVEL_NAMES = ("unclassified", "confidential", "secret", "topsecret")


@total_ordering
@dataclass(frozen=True)
class Clearance:
    """Security clearance; a total order over non-negative integers."""

    level: int = 0

    def __post_init__(self):
        if not isinstance(self.level, int) or self.level < 0:
            raise ValueError(f"Clearance level must be a non-negative integer: {self.level!r}")

    def __lt__(self, other: 'Clearance') -> bool:
        if not isinstance(other, Clearance):
            return NotImplemented
        return self.level < other.level

    @property
    def name(self) -> str:
        if self.level < len(_LEVEL_NAMES):
            return _LEVEL_NAMES[self.level]
        return f"level-{self.level}"

    def __str__(self) -> str:
        return self.name


UNCLASSIFIED = Clearance(0)
CONFIDENTIAL = Clearance(1)
SECRET = Clearance(2)


@dataclass(frozen=True)
class BlpAttr:
    """Clearance plus the trusted (declassification) flag of one node."""

    clearance: Clearance = UNCLASSIFIED
    trusted: bool = False

    def __str__(self) -> str:
        return f"{self.clearance}{', trusted' if self.trusted else ''}"


def _as_clearance(value: Union[Clearance, int]) -> Clearance:
    return value if isinstance(value, Clearance) else Clearance(value)


class BlpBridge:
    """Checks BLP invariants and relates them to the tainting invariants."""

    def __init__(self, config: Optional[Dict[str, Any]] = None,
                 taint_checker: Optional[TaintChecker] = None):
        """Initialize bridge."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)
        self.taint_checker = taint_checker or TaintChecker(self.config)

    def check_blp(self, graph: PolicyGraph, clearances: Mapping[str, Union[Clearance, int]]) -> bool:
        """Receivers must hold at least the sender's clearance."""
        self._require_all(graph, clearances, "clearance")
        return all(_as_clearance(clearances[src]) <= _as_clearance(clearances[dst])
                   for src, dst in graph.edges)

    def check_blp_trusted(self, graph: PolicyGraph, attrs: Mapping[str, BlpAttr]) -> bool:
        """Like check_blp, but trusted receivers may take any clearance."""
        self._require_all(graph, attrs, "BLP attribute")
        return all(attrs[dst].trusted or attrs[src].clearance <= attrs[dst].clearance
                   for src, dst in graph.edges)

    def _require_all(self, graph: PolicyGraph, mapping: Mapping[str, Any], what: str) -> None:
        missing = [node for node in graph.nodes if node not in mapping]
        if missing:
            raise MissingAttributeError(f"Missing {what} for: {', '.join(missing)}")

    @staticmethod
    def project_label(label: Label, spec: TaintSpec) -> BlpAttr:
        """Confidential iff the label flows out of the node; trusted iff it is untainted there."""
        clearance = CONFIDENTIAL if label in spec.effective_taints() else UNCLASSIFIED
        return BlpAttr(clearance=clearance, trusted=label in spec.untaints)

    @staticmethod
    def project_label_set(label_set: Iterable[Label], taints: Iterable[Label]) -> Clearance:
        """Clearance level = number of the given labels present in taints."""
        return Clearance(len(frozenset(label_set) & frozenset(taints)))

    def project_assignment(self, label: Label, labels: LabelAssignment) -> Dict[str, BlpAttr]:
        """project_label(label, .) composed with the assignment."""
        return {node: self.project_label(label, spec) for node, spec in labels.items()}

    def project_set_assignment(self, label_set: Iterable[Label],
                               labels: LabelAssignment) -> Dict[str, Clearance]:
        """Clearance of every node for a group of labels."""
        group = frozenset(label_set)
        return {node: self.project_label_set(group, spec.taints) for node, spec in labels.items()}

    def per_label_verdicts(self, graph: PolicyGraph, labels: LabelAssignment) -> Dict[Label, bool]:
        """blp' verdict for the projection of every label in the universe."""
        labels.require_total(graph)
        return {label: self.check_blp_trusted(graph, self.project_assignment(label, labels))
                for label in sorted(labels.label_universe())}

    def verify_simple_equivalence(self, graph: PolicyGraph, labels: LabelAssignment) -> bool:
        """Simple tainting against plain BLP over clearance projections of each label."""
        tainting = self.taint_checker.check_local(graph, labels)
        blp_all = True
        for label in sorted(labels.label_universe()):
            clearances = {node: self.project_label_set({label}, spec.taints)
                          for node, spec in labels.items()}
            if not self.check_blp(graph, clearances):
                blp_all = False
                break

        if tainting != blp_all:
            self.logger.error(f"Simple tainting ({tainting}) disagrees with BLP ({blp_all})")
            raise InternalInconsistencyError("simple tainting and BLP verdicts differ")
        return tainting

    def verify_equivalence(self, graph: PolicyGraph, labels: LabelAssignment) -> bool:
        """Tainting' verdict, cross-checked against blp' for every label projection."""
        tainting = self.taint_checker.check_full(graph, labels)
        verdicts = self.per_label_verdicts(graph, labels)
        blp_all = all(verdicts.values())

        if tainting != blp_all:
            failing = [label for label, ok in verdicts.items() if not ok]
            self.logger.error(f"Tainting' ({tainting}) disagrees with blp' ({blp_all}); "
                              f"failing labels: {failing}")
            raise InternalInconsistencyError("tainting' and blp' verdicts differ")

        self.logger.debug(f"Equivalence self-check passed over {len(verdicts)} labels")
        return tainting
