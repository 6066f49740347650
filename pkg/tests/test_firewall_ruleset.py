#!/usr/bin/env python3
"""
Tests for host addresses and the iptables-save dialect.
"""

import ipaddress
import unittest

from hypothesis import given, strategies as st

from meshadmin_privaudit.errors import AddressError, RulesetParseError, UnsupportedFeatureError
from meshadmin_privaudit.firewall.address import HostAddr
from meshadmin_privaudit.firewall.ruleset import (
    FwRule,
    PortRange,
    Ruleset,
    RulesetParser,
    parse_ruleset,
    serialize_ruleset,
)
from meshadmin_privaudit.models import model_path

COLLECT_RULES = (
    "*filter\n"
    ":INPUT DROP [0:0]\n"
    ":FORWARD DROP [0:0]\n"
    ":OUTPUT DROP [0:0]\n"
    "-A OUTPUT -s 131.159.15.52 -d 131.159.15.42 -j ACCEPT\n"
    "-A INPUT -m state --state ESTABLISHED -s 131.159.15.42 -d 131.159.15.52 -j ACCEPT\n"
    "COMMIT\n"
)


def load_tuned() -> Ruleset:
    with open(model_path("c3po-tuned.rules"), 'r', encoding='utf-8') as f:
        return parse_ruleset(f.read())


class TestHostAddr(unittest.TestCase):
    """Test cases for HostAddr."""

    def test_parse(self):
        """Test parsing plain and prefixed addresses."""
        self.assertEqual(HostAddr.parse("131.159.15.52"), HostAddr("131.159.15.52"))
        self.assertEqual(HostAddr.parse("131.159.20.190/24").prefix, 24)
        self.assertEqual(str(HostAddr.parse("131.159.20.190/24")), "131.159.20.190/24")
        self.assertEqual(HostAddr.parse("2001:db8::1").version, 6)

    def test_invalid(self):
        """Test rejection of malformed addresses."""
        for text in ["131.159.15", "host.example", "10.0.0.1/33", "10.0.0.1/x", "::1/129"]:
            with self.assertRaises(AddressError):
                HostAddr.parse(text)

    def test_contains_ignores_host_bits(self):
        """Test that the network of a prefixed address drops its host bits."""
        ssh = HostAddr.parse("131.159.20.190/24")
        self.assertTrue(ssh.contains(HostAddr("131.159.20.17")))
        self.assertFalse(ssh.contains(HostAddr("131.159.21.17")))
        self.assertFalse(ssh.contains(HostAddr("::1")))
        self.assertTrue(HostAddr("10.0.0.1").contains(HostAddr("10.0.0.1")))
        self.assertTrue(HostAddr("0.0.0.0", 0).contains(HostAddr("8.8.8.8")))

    def test_same_host(self):
        """Test numeric address comparison."""
        self.assertTrue(HostAddr("2001:db8::1").same_host(HostAddr("2001:0db8:0:0::1")))
        self.assertFalse(HostAddr("10.0.0.1").same_host(HostAddr("10.0.0.2")))
        self.assertTrue(HostAddr("127.0.0.1").is_loopback)

    @given(st.integers(0, 2 ** 32 - 1), st.integers(0, 32), st.integers(0, 2 ** 32 - 1))
    def test_contains_matches_bit_arithmetic(self, net, prefix, addr):
        """Test CIDR containment against a prefix comparison on integers."""
        network = HostAddr(str(ipaddress.IPv4Address(net)), prefix)
        host = HostAddr(str(ipaddress.IPv4Address(addr)))
        expected = (net ^ addr) >> (32 - prefix) == 0
        self.assertEqual(network.contains(host), expected)


class TestPortRange(unittest.TestCase):
    """Test cases for PortRange."""

    def test_parse(self):
        """Test single ports and ranges."""
        self.assertEqual(PortRange.parse("22"), PortRange(22, 22))
        dhcp = PortRange.parse("67:68")
        self.assertTrue(dhcp.contains(67))
        self.assertTrue(dhcp.contains(68))
        self.assertFalse(dhcp.contains(69))
        self.assertEqual(str(dhcp), "67:68")
        self.assertEqual(str(PortRange(22, 22)), "22")

    def test_invalid(self):
        """Test rejection of malformed ranges."""
        for text in ["ssh", "68:67", "70000", ""]:
            with self.assertRaises(ValueError):
                PortRange.parse(text)


class TestRulesetParser(unittest.TestCase):
    """Test cases for RulesetParser."""

    def setUp(self):
        """Set up test fixtures."""
        self.parser = RulesetParser()

    def test_parse_generated(self):
        """Test parsing the generated two-rule listing."""
        ruleset = self.parser.parse(COLLECT_RULES)
        self.assertEqual(len(ruleset.rules), 2)
        self.assertEqual(ruleset.policies, {"INPUT": "DROP", "FORWARD": "DROP", "OUTPUT": "DROP"})
        self.assertEqual(ruleset.rules[0], FwRule("OUTPUT", "ACCEPT", src=HostAddr("131.159.15.52"),
                                                  dst=HostAddr("131.159.15.42")))
        self.assertEqual(ruleset.rules[1].states, ("ESTABLISHED",))
        self.assertIsNone(ruleset.installed_on)

    def test_parse_tuned(self):
        """Test parsing the hand-tuned ruleset with LOG and port-range rules."""
        ruleset = load_tuned()
        self.assertEqual(len(ruleset.rules), 18)
        targets = [rule.target for rule in ruleset.rules]
        self.assertEqual(targets.count("LOG"), 2)
        dhcp = ruleset.rules[8]
        self.assertEqual(dhcp.render(), "-A INPUT -p udp --dport 67:68 --sport 67:68 -j ACCEPT")
        related = ruleset.rules[5]
        self.assertEqual(related.states, ("ESTABLISHED", "RELATED"))
        ssh = ruleset.rules[6]
        self.assertTrue(ssh.proto_match)
        self.assertEqual(str(ssh.src), "131.159.20.190/24")
        self.assertEqual(ruleset.rules[2].in_iface, "lo")

    def test_chain_rules_keep_global_positions(self):
        """Test that chain views number rules across the whole ruleset."""
        ruleset = self.parser.parse(COLLECT_RULES)
        self.assertEqual([pos for pos, _ in ruleset.chain_rules("INPUT")], [2])
        self.assertEqual([pos for pos, _ in ruleset.chain_rules("OUTPUT")], [1])
        self.assertEqual(ruleset.chain_rules("FORWARD"), [])

    def test_defaults_without_headers(self):
        """Test that table, policy and COMMIT lines are optional."""
        ruleset = self.parser.parse("-A INPUT -p icmp -j ACCEPT\n")
        self.assertEqual(ruleset.policy("INPUT"), "ACCEPT")
        self.assertEqual(ruleset.rules[0].proto, "icmp")
        self.assertEqual(self.parser.parse("").rules, ())

    def test_unsupported_features(self):
        """Test constructs outside the supported dialect."""
        cases = [
            ("-A INPUT -m connlimit --connlimit-above 2 -j DROP", "-m connlimit"),
            ("*nat", "*nat"),
            ("-A INPUT -j REJECT", "-j REJECT"),
            ("-A PREROUTING -j ACCEPT", "chain PREROUTING"),
            ("-A INPUT -m state --state NEW -j ACCEPT", "--state NEW"),
            ("-A INPUT -p gre -j ACCEPT", "-p gre"),
            (":INPUT QUEUE [0:0]", "policy QUEUE"),
            ("-N CUSTOM", "-N"),
            ("-A INPUT ! -s 10.0.0.1 -j DROP", "!"),
        ]
        for line, token in cases:
            with self.assertRaises(UnsupportedFeatureError) as ctx:
                self.parser.parse(f"# header\n{line}\n")
            self.assertEqual(ctx.exception.token, token)
            self.assertEqual(ctx.exception.line, 2)

    def test_malformed_rules(self):
        """Test syntax errors in supported constructs."""
        cases = [
            "-A INPUT -p tcp",
            "-j ACCEPT",
            "-A INPUT --dport 22 -j ACCEPT",
            "-A INPUT -p udp -m tcp -j ACCEPT",
            "-A INPUT -s 1.2.3.999 -j DROP",
            "-A INPUT -s 10.0.0.1 -s 10.0.0.2 -j DROP",
            "-A INPUT -p tcp --dport 22:21 -j ACCEPT",
            "-A INPUT -m state -j ACCEPT",
            "-A INPUT -j",
            "COMMIT",
        ]
        for line in cases:
            with self.assertRaises(RulesetParseError, msg=line):
                self.parser.parse(line + "\n")


class TestSerialization(unittest.TestCase):
    """Test cases for serialize_ruleset."""

    def test_empty_ruleset(self):
        """Test the rendering of an empty ruleset."""
        self.assertEqual(serialize_ruleset(Ruleset()),
                         "*filter\n:INPUT ACCEPT [0:0]\n:FORWARD ACCEPT [0:0]\n:OUTPUT ACCEPT [0:0]\nCOMMIT\n")

    def test_generated_listing_is_canonical(self):
        """Test that the generated listing serializes byte for byte."""
        self.assertEqual(serialize_ruleset(parse_ruleset(COLLECT_RULES)), COLLECT_RULES)

    def test_round_trip(self):
        """Test that parsing a serialized ruleset gives it back."""
        tuned = load_tuned()
        self.assertEqual(parse_ruleset(serialize_ruleset(tuned)), tuned)
        self.assertIn("-A INPUT -m state --state ESTABLISHED,RELATED -p icmp -j ACCEPT",
                      serialize_ruleset(tuned))

    def test_without_log_rules(self):
        """Test dropping LOG rules."""
        tuned = load_tuned()
        self.assertEqual(len(tuned.without_log_rules().rules), 16)
        self.assertEqual(tuned.installed(HostAddr("131.159.15.52")).installed_on, HostAddr("131.159.15.52"))


if __name__ == '__main__':
    unittest.main()
