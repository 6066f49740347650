#!/usr/bin/env python3
"""
Policy Graph - Directed graph of components and their permitted flows.
"""

import logging
import re
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from ..errors import GraphError, UnknownNodeError

Edge = Tuple[str, str]

logger = logging.getLogger(__name__)

_WHITESPACE = re.compile(r'\s')


def validate_node_name(name: str) -> str:
    """Check that a node name is a non-empty token without whitespace or arrows."""
    if not isinstance(name, str) or not name:
        raise GraphError(f"Invalid node name: {name!r}")
    if _WHITESPACE.search(name) or '->' in name:
        raise GraphError(f"Invalid node name: {name!r}")
    return name


class PolicyGraph:
    """Immutable directed graph (V, E) keeping declaration order."""

    def __init__(self, nodes: Iterable[str] = (), edges: Iterable[Edge] = ()):
        """Initialize graph; duplicate edges collapse to one edge."""
        node_list: List[str] = []
        seen: Set[str] = set()
        for node in nodes:
            validate_node_name(node)
            if node in seen:
                raise GraphError(f"Duplicate node: {node}")
            seen.add(node)
            node_list.append(node)

        edge_list: List[Edge] = []
        seen_edges: Set[Edge] = set()
        for src, dst in edges:
            edge = (src, dst)
            if edge in seen_edges:
                logger.warning(f"Duplicate edge collapsed: {src} -> {dst}")
                continue
            seen_edges.add(edge)
            edge_list.append(edge)

        self._nodes: Tuple[str, ...] = tuple(node_list)
        self._edges: Tuple[Edge, ...] = tuple(edge_list)
        self._node_index: Dict[str, int] = {n: i for i, n in enumerate(self._nodes)}
        self._edge_set: FrozenSet[Edge] = frozenset(self._edges)
        self._digraph: Optional[nx.DiGraph] = None

    @property
    def nodes(self) -> Tuple[str, ...]:
        return self._nodes

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    def __contains__(self, node: object) -> bool:
        return node in self._node_index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolicyGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._nodes, self._edges))

    def __repr__(self) -> str:
        return f"PolicyGraph(nodes={list(self._nodes)!r}, edges={list(self._edges)!r})"

    def has_edge(self, src: str, dst: str) -> bool:
        """Check whether the edge src -> dst is declared."""
        return (src, dst) in self._edge_set

    def well_formed(self) -> bool:
        """Check that every edge endpoint is a declared node."""
        return all(src in self._node_index and dst in self._node_index
                   for src, dst in self._edges)

    def require_node(self, node: str) -> None:
        """Raise UnknownNodeError if node is not declared."""
        if node not in self._node_index:
            raise UnknownNodeError(node)

    def as_digraph(self) -> nx.DiGraph:
        """Return a cached networkx view of the graph."""
        if self._digraph is None:
            digraph = nx.DiGraph()
            digraph.add_nodes_from(self._nodes)
            digraph.add_edges_from(self._edges)
            self._digraph = digraph
        return self._digraph

    def reachable_from(self, node: str) -> FrozenSet[str]:
        """Return all nodes r with (node, r) in the transitive closure E+.

        The start node itself is only included when it lies on a cycle.
        """
        self.require_node(node)
        digraph = self.as_digraph()
        reached = set(nx.descendants(digraph, node))
        if any(digraph.has_edge(pred, node) for pred in reached | {node}):
            reached.add(node)
        return frozenset(reached)

    def remove_edges(self, removed: Iterable[Edge]) -> 'PolicyGraph':
        """Return a graph with the same nodes and the given edges removed."""
        drop = set(removed)
        return PolicyGraph(self._nodes, [e for e in self._edges if e not in drop])

    def self_loops(self) -> List[Edge]:
        """Return self-loop edges in declaration order."""
        return [(src, dst) for src, dst in self._edges if src == dst]

    def ordered(self, nodes: Iterable[str]) -> List[str]:
        """Order node names by declaration, unknown names last and lexicographic."""
        known = len(self._node_index)
        return sorted(set(nodes), key=lambda n: (self._node_index.get(n, known), n))

    def ordered_edges(self, edges: Iterable[Edge]) -> List[Edge]:
        """Order edges by declaration, undeclared edges last and lexicographic."""
        index = {e: i for i, e in enumerate(self._edges)}
        known = len(index)
        return sorted(set(edges), key=lambda e: (index.get(e, known), e))
