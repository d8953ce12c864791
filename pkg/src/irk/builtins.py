"""Named groups: S_n, A_n, cyclic, dihedral, and PSL_2(p) for p in {7, 17}."""

from __future__ import annotations

import re

from .groups import GeneratedGroup
from .perm import Permutation

# PSL_2(p) on the projective line: point i+1 is i in GF(p), point p+1 is ∞.
# Generators are x -> x+1 and x -> -1/x.
PSL2_TABLES = {
    7: {
        "n": 8,
        "order": 168,
        "generators": [
            [[1, 2, 3, 4, 5, 6, 7]],
            [[1, 8], [2, 7], [3, 4], [5, 6]],
        ],
    },
    17: {
        "n": 18,
        "order": 2448,
        "generators": [
            [[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17]],
            [[1, 18], [2, 17], [3, 9], [4, 12], [6, 11], [7, 15], [8, 13], [10, 16]],
        ],
    },
}

NAMED_MAX_DEGREE = 64


def symmetric(n: int) -> GeneratedGroup:
    if n < 2:
        return GeneratedGroup([], max(n, 1), name=f"S{n}")
    gens = [Permutation.cycle([1, 2], n)]
    if n > 2:
        gens.append(Permutation.cycle(list(range(1, n + 1)), n))
    return GeneratedGroup(gens, n, name=f"S{n}")


def alternating(n: int) -> GeneratedGroup:
    if n < 3:
        return GeneratedGroup([], max(n, 1), name=f"A{n}")
    gens = [Permutation.cycle([1, 2, 3], n)]
    if n > 3:
        tail = list(range(1, n + 1)) if n % 2 else list(range(2, n + 1))
        gens.append(Permutation.cycle(tail, n))
    return GeneratedGroup(gens, n, name=f"A{n}")


def cyclic(n: int) -> GeneratedGroup:
    gens = [Permutation.cycle(list(range(1, n + 1)), n)] if n > 1 else []
    return GeneratedGroup(gens, max(n, 1), name=f"C{n}")


def dihedral(n: int) -> GeneratedGroup:
    """Dihedral group of order 2n acting on n points (n >= 3)."""
    if n < 3:
        raise ValueError("dihedral group needs n >= 3")
    rot = Permutation.cycle(list(range(1, n + 1)), n)
    refl = Permutation.from_cycles([[i, n + 2 - i] for i in range(2, n // 2 + 2) if i < n + 2 - i], n)
    return GeneratedGroup([rot, refl], n, name=f"D{n}")


def psl2(p: int) -> GeneratedGroup:
    table = PSL2_TABLES[p]
    n = table["n"]
    gens = [Permutation.from_cycles(c, n) for c in table["generators"]]
    G = GeneratedGroup(gens, n, name=f"PSL2({p})")
    if G.order != table["order"]:
        raise AssertionError(f"PSL2({p}) table has order {G.order}")
    return G


def a5_automorphism_generators() -> list[Permutation]:
    """S_5 generators; conjugation by S_5 realises Aut(A_5)."""
    return list(symmetric(5).generators)


_NAME_RE = re.compile(r"^(S|A|C|D)(\d+)$")
_PSL_RE = re.compile(r"^PSL_?2\((\d+)\)$", re.IGNORECASE)


def builtin(name: str) -> GeneratedGroup:
    """Resolve names like 'S4', 'A5', 'C6', 'D5', 'PSL2(17)'.

    A leading 'builtin:' is accepted and ignored.
    """
    key = name.strip()
    if key.startswith("builtin:"):
        key = key[len("builtin:"):]
    m = _PSL_RE.match(key)
    if m:
        p = int(m.group(1))
        if p not in PSL2_TABLES:
            raise KeyError(f"no embedded table for PSL2({p})")
        return psl2(p)
    m = _NAME_RE.match(key)
    if not m:
        raise KeyError(f"unknown builtin group {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if n < 1 or n > NAMED_MAX_DEGREE:
        raise KeyError(f"builtin degree {n} outside 1..{NAMED_MAX_DEGREE}")
    return {"S": symmetric, "A": alternating, "C": cyclic, "D": dihedral}[kind](n)
