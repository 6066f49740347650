#!/usr/bin/env python3
"""
Instance generators shared by the exhaustive and randomized tests.
"""

import itertools
import random
from typing import Iterator, List, Sequence, Tuple

from meshadmin_privaudit.graph.policy import Edge, PolicyGraph
from meshadmin_privaudit.taint.model import LabelAssignment, TaintSpec, normalize

NODE_NAMES = ("A", "B", "C", "D", "E", "F", "G")


def all_pairs(nodes: Sequence[str], self_loops: bool = False) -> List[Edge]:
    return [(u, v) for u in nodes for v in nodes if self_loops or u != v]


def all_graphs(node_count: int) -> Iterator[PolicyGraph]:
    """Every loop-free graph over the first node_count node names."""
    nodes = NODE_NAMES[:node_count]
    pairs = all_pairs(nodes)
    for mask in range(1 << len(pairs)):
        yield PolicyGraph(nodes, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def graph_classes(node_count: int) -> Iterator[PolicyGraph]:
    """One loop-free graph per isomorphism class, the one with the smallest edge mask.

    The checks under test do not depend on node names, so these stand for all_graphs.
    """
    nodes = NODE_NAMES[:node_count]
    pairs = all_pairs(nodes)
    index = {pair: i for i, pair in enumerate(pairs)}
    renamings = []
    for perm in itertools.permutations(nodes):
        rename = dict(zip(nodes, perm))
        renamings.append([index[(rename[src], rename[dst])] for src, dst in pairs])
    for mask in range(1 << len(pairs)):
        bits = [i for i in range(len(pairs)) if mask >> i & 1]
        if all(sum(1 << renaming[i] for i in bits) >= mask for renaming in renamings):
            yield PolicyGraph(nodes, [pairs[i] for i in bits])


def subsets(labels: Sequence[str]) -> List[frozenset]:
    return [frozenset(c) for r in range(len(labels) + 1) for c in itertools.combinations(labels, r)]


def simple_specs(labels: Sequence[str]) -> List[TaintSpec]:
    """Specs with empty untaints."""
    return [normalize(x) for x in subsets(labels)]


def full_specs(labels: Sequence[str]) -> List[TaintSpec]:
    """Every X-Y with Y a subset of X."""
    return [TaintSpec(x, y) for x in subsets(labels) for y in subsets(sorted(x))]


def all_assignments(nodes: Sequence[str], specs: Sequence[TaintSpec]) -> Iterator[LabelAssignment]:
    for combo in itertools.product(specs, repeat=len(nodes)):
        yield LabelAssignment(dict(zip(nodes, combo)), total=True)


def random_instance(rng: random.Random, max_nodes: int = 7, labels: Sequence[str] = ("x", "y", "z"),
                    untaints: bool = True, density: float = 0.3) -> Tuple[PolicyGraph, LabelAssignment]:
    """A random graph with a total random assignment."""
    nodes = NODE_NAMES[:rng.randint(1, max_nodes)]
    edges = [pair for pair in all_pairs(nodes) if rng.random() < density]
    entries = {}
    for node in nodes:
        taints = {label for label in labels if rng.random() < 0.5}
        removed = {label for label in taints if untaints and rng.random() < 0.3}
        entries[node] = normalize(taints, removed)
    return PolicyGraph(nodes, edges), LabelAssignment(entries, total=True)


def closure_oracle(graph: PolicyGraph, node: str) -> frozenset:
    """Brute-force fixed point of the edge relation starting at node."""
    reached = {dst for src, dst in graph.edges if src == node}
    while True:
        grown = reached | {dst for src, dst in graph.edges if src in reached}
        if grown == reached:
            return frozenset(reached)
        reached = grown
