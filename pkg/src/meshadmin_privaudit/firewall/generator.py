#!/usr/bin/env python3
"""
Firewall Generator - Host-local stateful rulesets that enforce the architecture.
"""

import logging
from typing import Any, Dict, List, Optional, Union

from ..boundaries.checker import BoundaryChecker
from ..errors import AddressError, NoAddressError, PolicyViolationError
from ..spec.model import ArchitectureSpec
from ..spec.parser import ArchSpecParser
from ..taint.checker import TaintChecker
from .address import HostAddr
from .ruleset import CHAINS, FwRule, Ruleset


class FirewallGenerator:
    """Generates default-deny stateful rules for one host of the architecture."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize generator."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

        self.default_policy = self.config.get('default_policy', 'DROP')
        self.state_match = self.config.get('state_match', 'ESTABLISHED')
        self.dedupe_rules = self.config.get('dedupe_rules', True)

        self.taint_checker = TaintChecker()
        self.boundary_checker = BoundaryChecker()
        self.spec_parser = ArchSpecParser()

    def resolve_host(self, spec: ArchitectureSpec, host: Union[str, HostAddr]) -> HostAddr:
        """Map a node name or address to the address the ruleset is installed on."""
        if isinstance(host, HostAddr):
            return host
        if host in spec.graph:
            addr = spec.host_of(host)
            if addr is None:
                raise NoAddressError(f"Node {host} has no host address")
            return addr
        system = spec.layout.get(host)
        if system is not None:
            return self._system_address(spec, system.name, system.member_names)
        try:
            addr = HostAddr.parse(host)
        except AddressError:
            raise NoAddressError(f"{host} is neither an addressed node nor an address") from None
        if not any(addr.same_host(a) for a in spec.hosts.values()):
            raise NoAddressError(f"No node of the architecture is placed on {addr}")
        return addr

    def _system_address(self, spec: ArchitectureSpec, name: str, members) -> HostAddr:
        """The one address shared by the addressed members of a system."""
        addrs: List[HostAddr] = []
        for member in members:
            addr = spec.host_of(member)
            if addr is not None and not any(addr.same_host(a) for a in addrs):
                addrs.append(addr)
        if not addrs:
            raise NoAddressError(f"System {name} has no addressed member")
        if len(addrs) > 1:
            raise NoAddressError(
                f"System {name} spans several hosts ({', '.join(map(str, addrs))}); name a node")
        return addrs[0]

    def _require_valid(self, spec: ArchitectureSpec) -> ArchitectureSpec:
        expanded = self.spec_parser.expand_crypto_pairs(spec)
        labels = expanded.total_labels()
        taint = self.taint_checker.violations(expanded.graph, labels)
        boundary = self.boundary_checker.check_boundaries(expanded.graph, expanded.layout)
        if taint or boundary:
            raise PolicyViolationError(
                f"Architecture has {len(taint) + len(boundary)} violations; "
                f"refusing to generate a firewall", list(taint) + list(boundary))
        return expanded

    def generate_ruleset(self, spec: ArchitectureSpec, host: Union[str, HostAddr]) -> Ruleset:
        """Allow each inter-host model edge touching host, plus its replies."""
        spec = self._require_valid(spec)
        target = self.resolve_host(spec, host)
        state = tuple(self.state_match.split(','))

        rules: List[FwRule] = []
        for src, dst in spec.graph.edges:
            src_addr = spec.host_of(src)
            dst_addr = spec.host_of(dst)
            if src_addr is None or dst_addr is None or src_addr.same_host(dst_addr):
                continue

            if src_addr.same_host(target):
                # Outgoing connection and its answers
                pair = [FwRule("OUTPUT", "ACCEPT", src=src_addr, dst=dst_addr),
                        FwRule("INPUT", "ACCEPT", src=dst_addr, dst=src_addr, states=state)]
            elif dst_addr.same_host(target):
                # Incoming connection and its answers
                pair = [FwRule("INPUT", "ACCEPT", src=src_addr, dst=dst_addr),
                        FwRule("OUTPUT", "ACCEPT", src=dst_addr, dst=src_addr, states=state)]
            else:
                continue

            for rule in pair:
                if self.dedupe_rules and rule in rules:
                    continue
                rules.append(rule)

        self.logger.info(f"Generated {len(rules)} rules for {target}")
        policies = {chain: self.default_policy for chain in CHAINS}
        return Ruleset(policies=policies, rules=tuple(rules), installed_on=target)
