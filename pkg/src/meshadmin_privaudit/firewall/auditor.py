#!/usr/bin/env python3
"""
Firewall Auditor - Reachability queries and audit assertions against a ruleset.

Packets are evaluated on the single host the ruleset is installed on: a NEW
packet leaving the host walks OUTPUT, one arriving walks INPUT, and a packet
from the host to itself walks both over the loopback interface. A connection
is allowed only if the NEW packet and its ESTABLISHED reply are both accepted.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union

from ..errors import AddressError, NotApplicableError, PrivAuditError, RulesetParseError
from ..spec.model import ArchitectureSpec
from .address import HostAddr
from .generator import FirewallGenerator
from .ruleset import PROTOCOLS, FwRule, Ruleset

LOOPBACK_IFACE = "lo"


@dataclass(frozen=True)
class Packet:
    """A packet as seen by one host's filter."""

    src: HostAddr
    dst: HostAddr
    proto: Optional[str] = None
    dport: Optional[int] = None
    sport: Optional[int] = None
    established: bool = False
    iface: Optional[str] = None


@dataclass(frozen=True)
class Decision:
    """Verdict on a connection attempt with the rules that produced it."""

    allowed: bool
    trace: Tuple[str, ...] = ()

    def __str__(self) -> str:
        return "allowed" if self.allowed else "denied"


@dataclass(frozen=True)
class Assertion:
    """Expected reachability of one connection; proto and dport are optional."""

    src: HostAddr
    dst: HostAddr
    proto: Optional[str] = None
    dport: Optional[int] = None
    expect_allowed: bool = True
    line: int = 0

    @property
    def expected(self) -> str:
        return "allowed" if self.expect_allowed else "denied"

    def render(self) -> str:
        """Render in the assertion file format."""
        proto = self.proto or "-"
        dport = str(self.dport) if self.dport is not None else "-"
        return f"{self.src} {self.dst} {proto} {dport} {self.expected}"


@dataclass(frozen=True)
class AuditResult:
    assertion: Assertion
    decision: Optional[Decision] = None
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        if self.decision is None:
            return False
        return self.decision.allowed == self.assertion.expect_allowed

    @property
    def actual(self) -> str:
        if self.decision is None:
            return "error"
        return str(self.decision)


@dataclass(frozen=True)
class AuditReport:
    """Outcome of a batch of assertions."""

    results: Tuple[AuditResult, ...] = ()

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    @property
    def failures(self) -> List[AuditResult]:
        return [result for result in self.results if not result.passed]

    def render_text(self) -> str:
        lines = []
        for result in self.results:
            status = "PASS" if result.passed else "FAIL"
            lines.append(f"{status}: {result.assertion.render()} (actual: {result.actual})")
            if result.error:
                lines.append(f"    error: {result.error}")
            elif result.decision is not None:
                lines.extend(f"    {step}" for step in result.decision.trace)
        failed = len(self.failures)
        lines.append(f"{len(self.results)} assertions, {failed} failed")
        return "\n".join(lines) + "\n"

    def render_tsv(self) -> str:
        lines = []
        for result in self.results:
            a = result.assertion
            lines.append("\t".join([
                "pass" if result.passed else "fail",
                str(a.src),
                str(a.dst),
                a.proto or "-",
                str(a.dport) if a.dport is not None else "-",
                a.expected,
                result.actual,
            ]))
        return "".join(line + "\n" for line in lines)


def parse_assertions(text: str) -> List[Assertion]:
    """Parse 'SRC DST PROTO|- DPORT|- allowed|denied' lines; '#' starts a comment."""
    assertions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) != 5:
            raise RulesetParseError(f"Expected 5 fields in assertion, got {len(fields)}", lineno)
        src_text, dst_text, proto, dport_text, expect = fields

        try:
            src = HostAddr.parse(src_text)
            dst = HostAddr.parse(dst_text)
        except AddressError as e:
            raise RulesetParseError(str(e), lineno) from None

        if proto != "-" and proto not in PROTOCOLS:
            raise RulesetParseError(f"Unknown protocol: {proto}", lineno)
        dport = None
        if dport_text != "-":
            if not dport_text.isdigit() or int(dport_text) > 65535:
                raise RulesetParseError(f"Invalid port: {dport_text}", lineno)
            if proto not in ("tcp", "udp"):
                raise RulesetParseError("Port requires tcp or udp", lineno)
            dport = int(dport_text)
        if expect not in ("allowed", "denied"):
            raise RulesetParseError(f"Expected 'allowed' or 'denied', got {expect}", lineno)

        assertions.append(Assertion(
            src=src,
            dst=dst,
            proto=None if proto == "-" else proto,
            dport=dport,
            expect_allowed=expect == "allowed",
            line=lineno,
        ))
    return assertions


def load_assertions(path: Union[str, Path]) -> List[Assertion]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise RulesetParseError(f"{path} is not valid UTF-8 (byte {e.start})") from e
    return parse_assertions(text)


class FirewallAuditor:
    """Answers reachability questions for the host a ruleset is installed on."""

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        """Initialize auditor."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

    def _iface_matches(self, wanted: Optional[str], iface: Optional[str]) -> bool:
        if wanted is None:
            return True
        # Any named interface other than lo stands for the external one
        if wanted == LOOPBACK_IFACE:
            return iface == LOOPBACK_IFACE
        return iface != LOOPBACK_IFACE

    def rule_matches(self, rule: FwRule, packet: Packet) -> bool:
        """Whether rule matches packet; absent fields match anything."""
        if rule.state_established and not packet.established:
            return False
        if rule.src is not None and not rule.src.contains(packet.src):
            return False
        if rule.dst is not None and not rule.dst.contains(packet.dst):
            return False
        if rule.proto is not None and rule.proto != packet.proto:
            return False
        if rule.dport is not None and (packet.dport is None or not rule.dport.contains(packet.dport)):
            return False
        if rule.sport is not None and (packet.sport is None or not rule.sport.contains(packet.sport)):
            return False
        if rule.in_iface is not None and not self._iface_matches(rule.in_iface, packet.iface):
            return False
        if rule.out_iface is not None and not self._iface_matches(rule.out_iface, packet.iface):
            return False
        return True

    def evaluate_chain(self, ruleset: Ruleset, chain: str, packet: Packet,
                       trace: List[str], stage: str) -> str:
        """First terminal match decides; LOG matches only extend the trace."""
        for position, rule in ruleset.chain_rules(chain):
            if not self.rule_matches(rule, packet):
                continue
            trace.append(f"{stage} {chain} rule {position}: {rule.render()}")
            if rule.terminates:
                return rule.target
        policy = ruleset.policy(chain)
        trace.append(f"{stage} {chain} policy {policy}")
        return policy

    def can_initiate(self, ruleset: Ruleset, src: HostAddr, dst: HostAddr,
                     proto: Optional[str] = None, dport: Optional[int] = None) -> Decision:
        """Whether src can open a connection to dst through the installed host's filter."""
        host = ruleset.installed_on
        if host is None:
            raise NotApplicableError("Ruleset is not bound to an installed-on host")

        outgoing = src.same_host(host)
        incoming = dst.same_host(host)
        if not (outgoing or incoming):
            raise NotApplicableError(f"Neither {src} nor {dst} is the installed host {host}")

        iface = LOOPBACK_IFACE if outgoing and incoming else None
        new = Packet(src, dst, proto=proto, dport=dport, iface=iface)
        reply = Packet(dst, src, proto=proto, sport=dport, established=True, iface=iface)

        stages = []
        if outgoing:
            stages.append(("NEW", "OUTPUT", new))
        if incoming:
            stages.append(("NEW", "INPUT", new))
        if incoming:
            stages.append(("REPLY", "OUTPUT", reply))
        if outgoing:
            stages.append(("REPLY", "INPUT", reply))

        trace: List[str] = []
        for stage, chain, packet in stages:
            if self.evaluate_chain(ruleset, chain, packet, trace, stage) != "ACCEPT":
                self.logger.debug(f"{src} -> {dst}: {stage} dropped in {chain}")
                return Decision(False, tuple(trace))

        self.logger.debug(f"{src} -> {dst}: allowed")
        return Decision(True, tuple(trace))

    def audit(self, ruleset: Ruleset, assertions: Iterable[Assertion]) -> AuditReport:
        """Evaluate every assertion; errors fail the assertion, not the batch."""
        results = []
        for assertion in assertions:
            try:
                decision = self.can_initiate(ruleset, assertion.src, assertion.dst,
                                             assertion.proto, assertion.dport)
                results.append(AuditResult(assertion, decision=decision))
            except PrivAuditError as e:
                self.logger.warning(f"Assertion on line {assertion.line} not evaluated: {e}")
                results.append(AuditResult(assertion, error=str(e)))

        report = AuditReport(tuple(results))
        self.logger.info(f"Audited {len(results)} assertions, {len(report.failures)} failed")
        return report

    def synthesize_assertions(self, spec: ArchitectureSpec,
                              host: Union[str, HostAddr]) -> List[Assertion]:
        """Model edges touching host must be allowed; all other host pairs touching it denied."""
        generator = FirewallGenerator(self.config)
        target = generator.resolve_host(spec, host)

        peers: List[HostAddr] = []
        for node in spec.graph.nodes:
            addr = spec.host_of(node)
            if addr is None or addr.same_host(target):
                continue
            if not any(addr.same_host(p) for p in peers):
                peers.append(addr)

        connected = set()
        for src, dst in spec.graph.edges:
            src_addr, dst_addr = spec.host_of(src), spec.host_of(dst)
            if src_addr is not None and dst_addr is not None:
                connected.add((src_addr.ip, dst_addr.ip))

        assertions = []
        for peer in peers:
            for src, dst in ((target, peer), (peer, target)):
                assertions.append(Assertion(
                    src=src,
                    dst=dst,
                    expect_allowed=(src.ip, dst.ip) in connected,
                ))
        return assertions
