"""Irredundant generating sets of finite permutation groups."""

from .perm import Permutation, parse_perm
from .groups import GeneratedGroup, StabChain, generate
from .builtins import alternating, builtin, symmetric

__all__ = [
    "GeneratedGroup",
    "Permutation",
    "StabChain",
    "alternating",
    "builtin",
    "generate",
    "parse_perm",
    "symmetric",
]
__version__ = "0.1.0"
