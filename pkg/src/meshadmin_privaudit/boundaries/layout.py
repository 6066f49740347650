#!/usr/bin/env python3
"""
System Layout - Grouping of components into systems with boundary roles.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Tuple

from ..errors import LayoutError
from ..graph.policy import PolicyGraph


class BoundaryRole(Enum):
    """Role of a component at the edge of its system."""

    INTERNAL = "internal"
    PASSIVE = "passive"
    ACTIVE = "active"
    BOTH = "both"

    @property
    def accepts_incoming(self) -> bool:
        return self in (BoundaryRole.PASSIVE, BoundaryRole.BOTH)

    @property
    def initiates_outgoing(self) -> bool:
        return self in (BoundaryRole.ACTIVE, BoundaryRole.BOTH)

    @classmethod
    def parse(cls, text: str) -> 'BoundaryRole':
        try:
            return cls(text)
        except ValueError:
            raise LayoutError(f"Unknown boundary role: {text}")


@dataclass(frozen=True)
class SystemDef:
    """One named system and the roles of its members."""

    name: str
    members: Tuple[Tuple[str, BoundaryRole], ...] = ()

    def role_of(self, node: str) -> Optional[BoundaryRole]:
        for member, role in self.members:
            if member == node:
                return role
        return None

    @property
    def member_names(self) -> Tuple[str, ...]:
        return tuple(member for member, _ in self.members)

    @property
    def has_boundary(self) -> bool:
        return any(role is not BoundaryRole.INTERNAL for _, role in self.members)


class SystemLayout:
    """Ordered list of systems; nodes in no system belong to the world."""

    def __init__(self, systems: Iterable[SystemDef] = ()):
        """Initialize layout and index members; member sets must be disjoint."""
        self.systems: Tuple[SystemDef, ...] = tuple(systems)
        self._system_of: Dict[str, SystemDef] = {}
        names = set()
        for system in self.systems:
            if system.name in names:
                raise LayoutError(f"Duplicate system: {system.name}")
            names.add(system.name)
            for member in system.member_names:
                if member in self._system_of:
                    raise LayoutError(
                        f"Node {member} is member of both {self._system_of[member].name} "
                        f"and {system.name}")
                self._system_of[member] = system

    @classmethod
    def from_mapping(cls, systems: Mapping[str, Mapping[str, BoundaryRole]]) -> 'SystemLayout':
        """Build a layout from {system: {node: role}}."""
        return cls(SystemDef(name, tuple(members.items())) for name, members in systems.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SystemLayout):
            return NotImplemented
        return self.systems == other.systems

    def __repr__(self) -> str:
        return f"SystemLayout({list(self.systems)!r})"

    def __bool__(self) -> bool:
        return bool(self.systems)

    def system_of(self, node: str) -> Optional[str]:
        """Name of the system containing node, or None for world nodes."""
        system = self._system_of.get(node)
        return system.name if system else None

    def role_of(self, node: str) -> Optional[BoundaryRole]:
        system = self._system_of.get(node)
        return system.role_of(node) if system else None

    def get(self, name: str) -> Optional[SystemDef]:
        """System by name."""
        for system in self.systems:
            if system.name == name:
                return system
        return None

    def validate(self, graph: PolicyGraph) -> None:
        """Raise LayoutError if any member is not a node of graph."""
        for system in self.systems:
            for member in system.member_names:
                if member not in graph:
                    raise LayoutError(f"System {system.name} lists unknown node {member}")
