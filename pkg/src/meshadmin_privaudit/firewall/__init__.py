"""Firewall module for MeshAdminPrivAudit."""

from .address import HostAddr
from .ruleset import CHAINS, FwRule, PortRange, Ruleset, RulesetParser, parse_ruleset, serialize_ruleset

__all__ = [
    "CHAINS",
    "FwRule",
    "HostAddr",
    "PortRange",
    "Ruleset",
    "RulesetParser",
    "parse_ruleset",
    "serialize_ruleset"
]
