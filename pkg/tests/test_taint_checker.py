#!/usr/bin/env python3
"""
Tests for TaintChecker functionality.
"""

import itertools
import random
import unittest
from unittest.mock import patch

from meshadmin_privaudit.boundaries.layout import BoundaryRole, SystemLayout
from meshadmin_privaudit.errors import InternalInconsistencyError, LabelAssignmentError
from meshadmin_privaudit.graph.policy import PolicyGraph
from meshadmin_privaudit.taint.checker import TaintChecker
from meshadmin_privaudit.taint.model import EMPTY_SPEC, LabelAssignment, normalize

from tests.generators import all_assignments, all_graphs, graph_classes, random_instance, simple_specs


def assignment(**entries):
    return LabelAssignment(entries, total=True)


class TestTaintChecker(unittest.TestCase):
    """Test cases for TaintChecker."""

    def setUp(self):
        """Set up test fixtures."""
        self.checker = TaintChecker()
        self.smart_home = PolicyGraph(
            ["Building", "Smartphone", "SmartHomeBox", "Anonymizer", "Cloud"],
            [("Building", "SmartHomeBox"), ("Smartphone", "SmartHomeBox"),
             ("SmartHomeBox", "Anonymizer"), ("Anonymizer", "Cloud")]
        )
        self.smart_home_labels = assignment(
            Building=normalize({"energy"}),
            Smartphone=normalize({"location"}),
            SmartHomeBox=normalize({"energy", "location"}),
            Anonymizer=normalize({"energy"}, {"location"}),
            Cloud=normalize({"energy"}),
        )

    def test_simple_checks(self):
        """Test closure and local checks on small examples."""
        partial = PolicyGraph(["Building", "Smartphone", "SmartHomeBox"],
                              [("Building", "SmartHomeBox"), ("Smartphone", "SmartHomeBox")])
        labels = assignment(Building=normalize({"energy"}), Smartphone=normalize({"location"}),
                            SmartHomeBox=normalize({"energy", "location"}))
        self.assertTrue(self.checker.check_closure(partial, labels))
        self.assertTrue(self.checker.check_local(partial, labels))

        chain = PolicyGraph(["A", "B"], [("A", "B")])
        leaking = assignment(A=normalize({"x"}), B=EMPTY_SPEC)
        self.assertFalse(self.checker.check_closure(chain, leaking))
        self.assertFalse(self.checker.check_local(chain, leaking))

        empty = assignment(A=EMPTY_SPEC, B=EMPTY_SPEC)
        self.assertTrue(self.checker.check_closure(chain, empty))
        self.assertTrue(self.checker.check_local(chain, empty))

    def test_local_check_second_edge(self):
        """Test a violation on the second edge of a chain."""
        graph = PolicyGraph(["A", "B", "C"], [("A", "B"), ("B", "C")])
        labels = assignment(A=normalize({"x"}), B=normalize({"x"}), C=EMPTY_SPEC)
        self.assertFalse(self.checker.check_local(graph, labels))
        self.assertEqual(self.checker.offending_flows(graph, labels), [("B", "C")])
        self.assertTrue(self.checker.check_local(PolicyGraph(["A", "B", "C"]), labels))

    def test_requires_total_assignment(self):
        """Test that partial assignments are rejected."""
        with self.assertRaises(LabelAssignmentError):
            self.checker.check_full(PolicyGraph(["A", "B"], [("A", "B")]),
                                    LabelAssignment({"A": EMPTY_SPEC}))

    def test_check_full_smart_home(self):
        """Test the anonymizer untainting location before the cloud."""
        self.assertTrue(self.checker.check_full(self.smart_home, self.smart_home_labels))

        shortcut = PolicyGraph(self.smart_home.nodes,
                               self.smart_home.edges + (("SmartHomeBox", "Cloud"),))
        self.assertFalse(self.checker.check_full(shortcut, self.smart_home_labels))

    def test_check_full_measrdroid_labels(self):
        """Test sensor, encryption, gateway, decryption and storage labels."""
        nodes, edges, entries = [], [], {}
        for user in "ABC":
            nodes += [f"Sensor-{user}", f"Enc-{user}", f"Dec-{user}"]
            entries[f"Sensor-{user}"] = normalize({user})
            entries[f"Enc-{user}"] = normalize({user}, {user})
            entries[f"Dec-{user}"] = normalize({user})
            edges += [(f"Sensor-{user}", f"Enc-{user}"), (f"Enc-{user}", "UploadDroid"),
                      ("UploadDroid", f"Dec-{user}"), (f"Dec-{user}", "Storage")]
        nodes += ["UploadDroid", "Storage"]
        entries["UploadDroid"] = EMPTY_SPEC
        entries["Storage"] = normalize({"A", "B", "C"})
        graph = PolicyGraph(nodes, edges)
        self.assertTrue(self.checker.check_full(graph, LabelAssignment(entries, total=True)))

    def test_violations_carry_witness(self):
        """Test witnesses of offending flows."""
        labels = self.smart_home_labels.with_entry("Anonymizer", normalize({"energy", "location"}))
        violations = self.checker.violations(self.smart_home, labels)
        self.assertEqual(len(violations), 1)
        self.assertEqual(violations[0].edge, ("Anonymizer", "Cloud"))
        self.assertEqual(violations[0].witness, {"location"})
        self.assertEqual(violations[0].describe(), "Anonymizer -> Cloud, witness {location}")

    def test_offending_flows(self):
        """Test offending flows on satisfied and violating models."""
        self.assertEqual(self.checker.offending_flows(self.smart_home, self.smart_home_labels), [])

        graph = PolicyGraph(["A", "B", "C"], [("A", "B"), ("B", "C")])
        labels = assignment(A=normalize({"x"}), B=EMPTY_SPEC, C=EMPTY_SPEC)
        self.assertEqual(self.checker.offending_flows(graph, labels), [("A", "B")])

    def test_unlabeled_default_uncovers_violation(self):
        """Test that the empty default flags flows into unlabeled nodes."""
        graph = PolicyGraph(["A", "B"], [("A", "B")])
        labels = LabelAssignment({"A": normalize({"x"})}).totalize(graph)
        self.assertEqual(labels["B"], EMPTY_SPEC)
        self.assertEqual(self.checker.offending_flows(graph, labels), [("A", "B")])

        # A default of {x} would have hidden the flow
        hiding = labels.with_entry("B", normalize({"x"}))
        self.assertEqual(self.checker.offending_flows(graph, hiding), [])

    def test_self_loop_with_untaints(self):
        """Test that a self-loop on an untainting node is always satisfied."""
        graph = PolicyGraph(["A"], [("A", "A")])
        self.assertTrue(self.checker.check_full(graph, assignment(A=normalize({"x"}, {"y"}))))

    def test_repair(self):
        """Test repair by removing offending flows."""
        self.assertEqual(self.checker.repair(self.smart_home, self.smart_home_labels), self.smart_home)

        graph = PolicyGraph(["A", "B"], [("A", "B")])
        labels = assignment(A=normalize({"x"}), B=EMPTY_SPEC)
        repaired = self.checker.repair(graph, labels)
        self.assertEqual(repaired.edges, ())
        self.assertTrue(self.checker.check_full(repaired, labels))

    def test_repair_sound_and_maximal(self):
        """Test that repairs pass and re-adding any removed edge fails."""
        rng = random.Random(7)
        for _ in range(200):
            graph, labels = random_instance(rng, max_nodes=5)
            repaired = self.checker.repair(graph, labels)
            self.assertTrue(self.checker.check_full(repaired, labels))
            for edge in set(graph.edges) - set(repaired.edges):
                extended = PolicyGraph(graph.nodes, repaired.edges + (edge,))
                self.assertFalse(self.checker.check_full(extended, labels))

    def test_monotonicity(self):
        """Test that removing flows from a valid policy keeps it valid."""
        rng = random.Random(11)
        for _ in range(400):
            graph, labels = random_instance(rng, max_nodes=6)
            graph = self.checker.repair(graph, labels)
            kept = [edge for edge in graph.edges if rng.random() < 0.5]
            self.assertTrue(self.checker.check_full(PolicyGraph(graph.nodes, kept), labels))

    def test_local_equals_closure_exhaustive(self):
        """Test localized and closure checks agree on all 3-node instances over 2 labels."""
        specs = simple_specs(["x", "y"])
        count = 0
        for graph in all_graphs(3):
            for labels in all_assignments(graph.nodes, specs):
                self.assertEqual(self.checker.check_local(graph, labels),
                                 self.checker.check_closure(graph, labels))
                count += 1
        self.assertEqual(count, 4096)

    def test_local_equals_closure_four_nodes(self):
        """Test localized and closure checks on every 4-node graph shape over 2 labels."""
        specs = simple_specs(["x", "y"])
        shapes = list(graph_classes(4))
        self.assertEqual(len(shapes), 218)
        count = 0
        for graph in shapes:
            for labels in all_assignments(graph.nodes, specs):
                self.assertEqual(self.checker.check_local(graph, labels),
                                 self.checker.check_closure(graph, labels))
                count += 1
        self.assertEqual(count, 218 * 256)

    def test_graph_classes_three_nodes(self):
        """Test that the 3-node shapes are one per isomorphism class."""
        shapes = list(graph_classes(3))
        self.assertEqual(len(shapes), 16)
        self.assertEqual(len({graph.edges for graph in shapes}), 16)
        self.assertIn((), [graph.edges for graph in shapes])

    def test_local_equals_closure_random(self):
        """Test localized and closure checks agree on random instances."""
        rng = random.Random(2017)
        for _ in range(500):
            graph, labels = random_instance(rng, untaints=False)
            self.assertEqual(self.checker.check_local(graph, labels),
                             self.checker.check_closure(graph, labels))

    def test_full_equals_simple_without_untaints(self):
        """Test that the full check equals the simple one when nothing is untainted."""
        rng = random.Random(3)
        for _ in range(200):
            graph, labels = random_instance(rng, untaints=False)
            self.assertEqual(self.checker.check_full(graph, labels),
                             self.checker.check_local(graph, labels))

    def test_closure_self_check(self):
        """Test that the closure cross-check raises on disagreement."""
        checker = TaintChecker({'closure_self_check': True})
        graph = PolicyGraph(["A", "B"], [("A", "B")])
        labels = assignment(A=normalize({"x"}), B=normalize({"x"}))
        self.assertTrue(checker.check_local(graph, labels))

        with patch.object(checker, 'check_closure', return_value=False):
            with self.assertRaises(InternalInconsistencyError):
                checker.check_local(graph, labels)

    def test_synthesize_max_policy(self):
        """Test synthesis of all permitted flows."""
        both = assignment(A=normalize({"x"}), B=normalize({"x"}))
        self.assertEqual(set(self.checker.synthesize_max_policy(["A", "B"], both).edges),
                         {("A", "B"), ("B", "A")})

        one = assignment(A=normalize({"x"}), B=EMPTY_SPEC)
        self.assertEqual(self.checker.synthesize_max_policy(["A", "B"], one).edges, (("B", "A"),))

    def test_synthesize_max_policy_is_maximal(self):
        """Test that every satisfying graph is a subgraph of the synthesized one."""
        rng = random.Random(5)
        for _ in range(100):
            graph, labels = random_instance(rng, max_nodes=5)
            maximal = self.checker.synthesize_max_policy(graph.nodes, labels)
            self.assertTrue(self.checker.check_full(maximal, labels))
            valid = self.checker.repair(graph, labels)
            for edge in valid.edges:
                if edge[0] != edge[1]:
                    self.assertTrue(maximal.has_edge(*edge))

    def test_synthesize_with_layout(self):
        """Test that boundaries restrict synthesized flows."""
        layout = SystemLayout.from_mapping({
            "Backend": {"Collect": BoundaryRole.ACTIVE, "Storage": BoundaryRole.INTERNAL},
        })
        labels = assignment(Phone=EMPTY_SPEC, Collect=EMPTY_SPEC, Storage=EMPTY_SPEC)
        policy = self.checker.synthesize_max_policy(["Phone", "Collect", "Storage"], labels, layout)
        self.assertFalse(policy.has_edge("Phone", "Storage"))
        self.assertFalse(policy.has_edge("Phone", "Collect"))
        self.assertTrue(policy.has_edge("Collect", "Phone"))
        self.assertTrue(policy.has_edge("Storage", "Collect"))
        for src, dst in itertools.permutations(["Phone", "Collect", "Storage"], 2):
            if policy.has_edge(src, dst):
                self.assertTrue(self.checker.boundary_checker.edge_allowed((src, dst), layout))


if __name__ == '__main__':
    unittest.main()
