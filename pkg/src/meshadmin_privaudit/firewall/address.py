#!/usr/bin/env python3
"""
Host addresses with optional CIDR prefix.
"""

import ipaddress
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import AddressError

IPAddress = Union[ipaddress.IPv4Address, ipaddress.IPv6Address]
IPNetwork = Union[ipaddress.IPv4Network, ipaddress.IPv6Network]


@dataclass(frozen=True)
class HostAddr:
    """IPv4 or IPv6 address as written, plus an optional prefix length."""

    address: str
    prefix: Optional[int] = None

    def __post_init__(self):
        try:
            ip = ipaddress.ip_address(self.address)
        except ValueError:
            raise AddressError(f"Invalid address: {self.address}") from None
        if self.prefix is not None:
            if not 0 <= self.prefix <= ip.max_prefixlen:
                raise AddressError(f"Invalid prefix length /{self.prefix} for {self.address}")

    @classmethod
    def parse(cls, text: str) -> 'HostAddr':
        """Parse 'addr' or 'addr/prefix'."""
        address, sep, prefix = text.strip().partition('/')
        if not sep:
            return cls(address)
        if not prefix.isdigit():
            raise AddressError(f"Invalid prefix in {text}")
        return cls(address, int(prefix))

    @property
    def ip(self) -> IPAddress:
        return ipaddress.ip_address(self.address)

    @property
    def version(self) -> int:
        return self.ip.version

    @property
    def network(self) -> IPNetwork:
        """Network covered by this address; host bits beyond the prefix are ignored."""
        prefix = self.prefix if self.prefix is not None else self.ip.max_prefixlen
        return ipaddress.ip_network(f"{self.address}/{prefix}", strict=False)

    def contains(self, other: 'HostAddr') -> bool:
        """True iff other's address lies within this address's network."""
        if other.version != self.version:
            return False
        return other.ip in self.network

    def same_host(self, other: 'HostAddr') -> bool:
        """Compare addresses numerically, ignoring textual form."""
        return self.version == other.version and self.ip == other.ip

    @property
    def is_loopback(self) -> bool:
        return self.ip.is_loopback

    def __str__(self) -> str:
        if self.prefix is None:
            return self.address
        return f"{self.address}/{self.prefix}"
