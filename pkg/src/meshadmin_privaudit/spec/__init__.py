"""Architecture specification module for MeshAdminPrivAudit."""

from .model import ArchitectureSpec, CryptoPair
from .parser import ArchSpecParser, expand_crypto_pairs, parse_spec, serialize_spec

__all__ = [
    "ArchitectureSpec",
    "ArchSpecParser",
    "CryptoPair",
    "expand_crypto_pairs",
    "parse_spec",
    "serialize_spec"
]
