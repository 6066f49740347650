#!/usr/bin/env python3
"""
Ruleset - Stateful host firewall rules in a restricted iptables-save dialect.

Supported rule flags: -A, -s, -d, -p, -m state --state ESTABLISHED[,RELATED],
-m tcp|udp|icmp (matching -p), --dport, --sport, -i, -o, -j ACCEPT|DROP|LOG.
Anything else is rejected instead of skipped, so a parsed ruleset never
silently admits less than the original text.
"""

import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from ..errors import AddressError, RulesetParseError, UnsupportedFeatureError
from .address import HostAddr

CHAINS = ("INPUT", "FORWARD", "OUTPUT")
PROTOCOLS = ("tcp", "udp", "icmp")
TARGETS = ("ACCEPT", "DROP", "LOG")
POLICY_TARGETS = ("ACCEPT", "DROP")
STATES = ("ESTABLISHED", "RELATED")


@dataclass(frozen=True)
class PortRange:
    """Single port or inclusive range lo:hi."""

    low: int
    high: int

    @classmethod
    def parse(cls, text: str) -> 'PortRange':
        low, sep, high = text.partition(':')
        try:
            low_port = int(low)
            high_port = int(high) if sep else low_port
        except ValueError:
            raise ValueError(f"Invalid port: {text}") from None
        if not 0 <= low_port <= high_port <= 65535:
            raise ValueError(f"Invalid port range: {text}")
        return cls(low_port, high_port)

    def contains(self, port: int) -> bool:
        return self.low <= port <= self.high

    def __str__(self) -> str:
        if self.low == self.high:
            return str(self.low)
        return f"{self.low}:{self.high}"


@dataclass(frozen=True)
class FwRule:
    """One -A rule."""

    chain: str
    target: str
    src: Optional[HostAddr] = None
    dst: Optional[HostAddr] = None
    proto: Optional[str] = None
    proto_match: bool = False
    states: Tuple[str, ...] = ()
    dport: Optional[PortRange] = None
    sport: Optional[PortRange] = None
    in_iface: Optional[str] = None
    out_iface: Optional[str] = None

    @property
    def state_established(self) -> bool:
        return bool(self.states)

    @property
    def terminates(self) -> bool:
        """LOG continues evaluation; ACCEPT and DROP end it."""
        return self.target != "LOG"

    def render(self) -> str:
        """Render the rule as an iptables-save line."""
        parts = ["-A", self.chain]
        if self.in_iface:
            parts += ["-i", self.in_iface]
        if self.out_iface:
            parts += ["-o", self.out_iface]
        if self.states:
            parts += ["-m", "state", "--state", ",".join(self.states)]
        if self.src is not None:
            parts += ["-s", str(self.src)]
        if self.dst is not None:
            parts += ["-d", str(self.dst)]
        if self.proto:
            parts += ["-p", self.proto]
            if self.proto_match:
                parts += ["-m", self.proto]
        if self.dport is not None:
            parts += ["--dport", str(self.dport)]
        if self.sport is not None:
            parts += ["--sport", str(self.sport)]
        parts += ["-j", self.target]
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


def _default_policies() -> Dict[str, str]:
    return {chain: "ACCEPT" for chain in CHAINS}


@dataclass(frozen=True)
class Ruleset:
    """Chain policies, ordered rules, and the host the rules are installed on."""

    policies: Dict[str, str] = field(default_factory=_default_policies)
    rules: Tuple[FwRule, ...] = ()
    installed_on: Optional[HostAddr] = None

    def chain_rules(self, chain: str) -> List[Tuple[int, FwRule]]:
        """Rules of one chain with their 1-based position in the whole ruleset."""
        return [(pos, rule) for pos, rule in enumerate(self.rules, start=1) if rule.chain == chain]

    def policy(self, chain: str) -> str:
        return self.policies.get(chain, "ACCEPT")

    def installed(self, host: HostAddr) -> 'Ruleset':
        """Return a copy bound to the host it is installed on."""
        return replace(self, installed_on=host)

    def without_log_rules(self) -> 'Ruleset':
        return replace(self, rules=tuple(r for r in self.rules if r.target != "LOG"))


def serialize_ruleset(ruleset: Ruleset) -> str:
    """Render the ruleset in iptables-save form with a trailing newline."""
    lines = ["*filter"]
    for chain in CHAINS:
        lines.append(f":{chain} {ruleset.policy(chain)} [0:0]")
    lines.extend(rule.render() for rule in ruleset.rules)
    lines.append("COMMIT")
    return "\n".join(lines) + "\n"


class RulesetParser:
    """Parses the restricted iptables-save dialect."""

    def __init__(self, config: Optional[Dict] = None):
        """Initialize parser."""
        self.config = config or {}
        self.logger = logging.getLogger(__name__)

    def load(self, path: Union[str, Path]) -> Ruleset:
        """Read and parse an iptables-save document from disk."""
        try:
            with open(path, 'r', encoding='utf-8') as f:
                text = f.read()
        except UnicodeDecodeError as e:
            raise RulesetParseError(f"{path} is not valid UTF-8 (byte {e.start})") from e
        return self.parse(text)

    def parse(self, text: str) -> Ruleset:
        """Parse a whole document; table and COMMIT lines are optional."""
        policies = _default_policies()
        rules: List[FwRule] = []
        in_table = False

        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue

            if line.startswith('*'):
                table = line[1:]
                if table != "filter":
                    raise UnsupportedFeatureError(line, lineno)
                in_table = True
            elif line == "COMMIT":
                if not in_table:
                    raise RulesetParseError("COMMIT outside of a table", lineno)
                in_table = False
            elif line.startswith(':'):
                chain, policy = self._parse_policy(line, lineno)
                policies[chain] = policy
            elif line.startswith('-A'):
                rules.append(self._parse_rule(line.split(), lineno))
            else:
                raise UnsupportedFeatureError(line.split()[0], lineno)

        self.logger.debug(f"Parsed ruleset with {len(rules)} rules")
        return Ruleset(policies=policies, rules=tuple(rules))

    def _parse_policy(self, line: str, lineno: int) -> Tuple[str, str]:
        parts = line[1:].split()
        if len(parts) not in (2, 3):
            raise RulesetParseError(f"Malformed chain policy: {line}", lineno)
        chain, policy = parts[0], parts[1]
        if chain not in CHAINS:
            raise UnsupportedFeatureError(f"chain {chain}", lineno)
        if policy not in POLICY_TARGETS:
            raise UnsupportedFeatureError(f"policy {policy}", lineno)
        return chain, policy

    def _parse_rule(self, tokens: List[str], lineno: int) -> FwRule:
        fields: Dict[str, object] = {}
        modules: List[str] = []
        pos = 0

        def value(flag: str) -> str:
            nonlocal pos
            if pos + 1 >= len(tokens):
                raise RulesetParseError(f"Missing value for {flag}", lineno)
            pos += 1
            return tokens[pos]

        def set_once(key: str, flag: str, item: object) -> None:
            if key in fields:
                raise RulesetParseError(f"Repeated {flag}", lineno)
            fields[key] = item

        while pos < len(tokens):
            token = tokens[pos]
            if token == '-A':
                chain = value(token)
                if chain not in CHAINS:
                    raise UnsupportedFeatureError(f"chain {chain}", lineno)
                set_once('chain', token, chain)
            elif token in ('-s', '-d'):
                text = value(token)
                try:
                    addr = HostAddr.parse(text)
                except AddressError as e:
                    raise RulesetParseError(str(e), lineno) from None
                set_once('src' if token == '-s' else 'dst', token, addr)
            elif token == '-p':
                proto = value(token)
                if proto not in PROTOCOLS:
                    raise UnsupportedFeatureError(f"-p {proto}", lineno)
                set_once('proto', token, proto)
            elif token == '-m':
                module = value(token)
                if module == 'state':
                    if pos + 1 >= len(tokens) or tokens[pos + 1] != '--state':
                        raise RulesetParseError("-m state without --state", lineno)
                elif module in PROTOCOLS:
                    modules.append(module)
                else:
                    raise UnsupportedFeatureError(f"-m {module}", lineno)
            elif token == '--state':
                text = value(token)
                # Tolerate 'ESTABLISHED, RELATED' written with a space
                while text.endswith(',') and pos + 1 < len(tokens):
                    text += value(token)
                set_once('states', token, self._parse_states(text, lineno))
            elif token in ('--dport', '--sport'):
                text = value(token)
                try:
                    ports = PortRange.parse(text)
                except ValueError as e:
                    raise RulesetParseError(str(e), lineno) from None
                set_once('dport' if token == '--dport' else 'sport', token, ports)
            elif token in ('-i', '-o'):
                set_once('in_iface' if token == '-i' else 'out_iface', token, value(token))
            elif token == '-j':
                target = value(token)
                if target not in TARGETS:
                    raise UnsupportedFeatureError(f"-j {target}", lineno)
                set_once('target', token, target)
            else:
                raise UnsupportedFeatureError(token, lineno)
            pos += 1

        if 'chain' not in fields:
            raise RulesetParseError("Rule without -A chain", lineno)
        if 'target' not in fields:
            raise RulesetParseError("Rule without -j target", lineno)

        proto = fields.get('proto')
        for module in modules:
            if module != proto:
                raise RulesetParseError(f"-m {module} requires -p {module}", lineno)
        if ('dport' in fields or 'sport' in fields) and proto not in ('tcp', 'udp'):
            raise RulesetParseError("Port match requires -p tcp or -p udp", lineno)

        return FwRule(proto_match=bool(modules), **fields)

    def _parse_states(self, text: str, lineno: int) -> Tuple[str, ...]:
        states = tuple(s.strip() for s in text.split(','))
        for state in states:
            if state not in STATES:
                raise UnsupportedFeatureError(f"--state {state}", lineno)
        if "ESTABLISHED" not in states:
            raise UnsupportedFeatureError(f"--state {text}", lineno)
        return states


def parse_ruleset(text: str) -> Ruleset:
    """Parse an iptables-save document in the restricted dialect."""
    return RulesetParser().parse(text)
