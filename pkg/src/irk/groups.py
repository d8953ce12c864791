"""Permutation groups given by generators.

The stabilizer chain is built by the deterministic Schreier-Sims algorithm.
Each level's base point is the smallest point moved by that level's strong
generators, so the same generator list always gives the same chain.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .perm import Permutation, ident, inv, mul

DEGREE_CAP = 128


# ---------------------------------------------------------------------------
# integer factorization for lambda(G)

def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int) -> dict[int, int]:
    """Prime factorization: trial division to 10^6, then Pollard-Brent."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n and p <= 10**6:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if _is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def big_omega(n: int) -> int:
    """Number of prime factors of n counted with multiplicity."""
    return sum(factorize(n).values())


# ---------------------------------------------------------------------------
# stabilizer chain

@dataclass
class _Level:
    base: int
    gens: list = field(default_factory=list)
    # point -> (u, u^-1) with u(base) = point
    trans: dict = field(default_factory=dict)
    orbit: list = field(default_factory=list)

    def rebuild(self, n: int) -> None:
        e = ident(n)
        trans = {self.base: (e, e)}
        orbit = [self.base]
        i = 0
        while i < len(orbit):
            pt = orbit[i]
            u = trans[pt][0]
            for s in self.gens:
                q = s[pt]
                if q not in trans:
                    w = mul(s, u)
                    trans[q] = (w, inv(w))
                    orbit.append(q)
            i += 1
        self.trans = trans
        self.orbit = orbit


def _first_moved(p: tuple) -> int:
    for i, x in enumerate(p):
        if i != x:
            return i
    return -1


class StabChain:
    """Base and strong generating set for the group generated by ``gens``."""

    def __init__(self, n: int, gens: Sequence[tuple]):
        self.n = n
        self.levels: list[_Level] = []
        gens = _dedup([g for g in gens if _first_moved(g) >= 0])
        if not gens:
            return
        clusters = _support_clusters(n, gens)
        if len(clusters) > 1:
            # generators with disjoint supports commute: the group is the
            # direct product of the cluster groups and the chains concatenate
            for sub in clusters:
                self.levels.extend(StabChain(n, sub).levels)
            return
        self._schreier_sims(gens)

    def _schreier_sims(self, gens: list) -> None:
        n = self.n
        e = ident(n)
        levels = self.levels
        for g in gens:
            if all(g[lv.base] == lv.base for lv in levels):
                levels.append(_Level(_first_moved(g)))
        for i, lv in enumerate(levels):
            fixed = [l.base for l in levels[:i]]
            lv.gens = [g for g in gens if all(g[b] == b for b in fixed)]
            lv.rebuild(n)
        i = len(levels) - 1
        while i >= 0:
            lv = levels[i]
            restart = False
            for beta in lv.orbit:
                u = lv.trans[beta][0]
                for s in lv.gens:
                    su = mul(s, u)
                    h = mul(lv.trans[su[lv.base]][1], su)
                    if h == e:
                        continue
                    r, j = self._sift(h, i + 1)
                    if j < len(levels) or r != e:
                        if j == len(levels):
                            levels.append(_Level(_first_moved(r)))
                        for l in range(i + 1, j + 1):
                            levels[l].gens.append(r)
                            levels[l].rebuild(n)
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1

    def _sift(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for j in range(start, len(self.levels)):
            lv = self.levels[j]
            b = g[lv.base]
            t = lv.trans.get(b)
            if t is None:
                return g, j
            g = mul(t[1], g)
        return g, len(self.levels)

    def contains(self, g: tuple) -> bool:
        r, j = self._sift(g)
        return j == len(self.levels) and all(i == x for i, x in enumerate(r))

    @property
    def base(self) -> list[int]:
        return [lv.base for lv in self.levels]

    def order(self) -> int:
        out = 1
        for lv in self.levels:
            out *= len(lv.orbit)
        return out

    def strong_generators(self) -> list[tuple]:
        out = []
        for lv in self.levels:
            out.extend(lv.gens)
        return _dedup(out)

    def elements(self) -> Iterator[tuple]:
        """All elements as products u_0 u_1 ... u_k of transversal elements."""
        partial = [ident(self.n)]
        for lv in reversed(self.levels):
            us = [lv.trans[b][0] for b in lv.orbit]
            partial = [mul(u, p) for u in us for p in partial]
        return iter(partial)


def _dedup(gens: Iterable[tuple]) -> list[tuple]:
    seen = set()
    out = []
    for g in gens:
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def _orbit_components(n: int, gens: Sequence[tuple]) -> list[list[int]]:
    """Orbits of size > 1, each sorted, ordered by minimum point."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, x in enumerate(g):
            a, b = find(i), find(x)
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps: dict[int, list[int]] = {}
    for i in range(n):
        comps.setdefault(find(i), []).append(i)
    return [c for _, c in sorted(comps.items()) if len(c) > 1]


def _support_clusters(n: int, gens: Sequence[tuple]) -> list[list[tuple]]:
    """Generators grouped so that supports in different groups are disjoint."""
    owner = [-1] * n
    parent = list(range(len(gens)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, g in enumerate(gens):
        for i, x in enumerate(g):
            if i != x:
                if owner[i] < 0:
                    owner[i] = k
                else:
                    a, b = find(owner[i]), find(k)
                    if a != b:
                        parent[max(a, b)] = min(a, b)
    groups: dict[int, list[tuple]] = {}
    for k, g in enumerate(gens):
        groups.setdefault(find(k), []).append(g)
    return [groups[r] for r in sorted(groups)]


# ---------------------------------------------------------------------------
# the public group type

class GeneratedGroup:
    """⟨generators⟩ with an eagerly built stabilizer chain.

    Immutable after construction; safe to share between threads.
    """

    __slots__ = ("degree", "generators", "name", "_chain", "_raw")

    def __init__(self, gens: Sequence[Permutation], n: int, name: str | None = None):
        if n < 1 or n > DEGREE_CAP:
            raise ValueError(f"degree {n} outside 1..{DEGREE_CAP}")
        gens = tuple(gens)
        for g in gens:
            if g.degree != n:
                raise ValueError(f"generator degree {g.degree} != {n}")
        self.degree = n
        self.generators = gens
        self.name = name
        self._raw = [g.images for g in gens]
        self._chain = StabChain(n, self._raw)

    @property
    def chain(self) -> StabChain:
        return self._chain

    @property
    def order(self) -> int:
        return self._chain.order()

    def __len__(self) -> int:
        return self.order

    def member(self, p: Permutation) -> bool:
        if p.degree != self.degree:
            raise ValueError("degree mismatch")
        return self._chain.contains(p.images)

    def contains_raw(self, g: tuple) -> bool:
        return self._chain.contains(g)

    def __contains__(self, p: Permutation) -> bool:
        return self.member(p)

    def orbits(self) -> list[list[int]]:
        """0-based orbits, fixed points included, ordered by minimum."""
        comps = _orbit_components(self.degree, self._raw)
        covered = {x for c in comps for x in c}
        out = comps + [[x] for x in range(self.degree) if x not in covered]
        return sorted(out)

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def elements(self) -> list[Permutation]:
        return sorted(Permutation._trusted(g) for g in self._chain.elements())

    def raw_elements(self) -> list[tuple]:
        return sorted(self._chain.elements())

    def is_subgroup_of(self, other: "GeneratedGroup") -> bool:
        return all(other.contains_raw(g) for g in self._raw)

    def equals(self, other: "GeneratedGroup") -> bool:
        """Mutual generator membership."""
        return self.is_subgroup_of(other) and other.is_subgroup_of(self)

    def with_generators(self, extra: Sequence[Permutation]) -> "GeneratedGroup":
        return GeneratedGroup(self.generators + tuple(extra), self.degree)

    def is_normal_in(self, other: "GeneratedGroup") -> bool:
        for x in other._raw:
            xi = inv(x)
            for g in self._raw:
                if not self._chain.contains(mul(mul(x, g), xi)):
                    return False
        return True

    def __repr__(self) -> str:
        label = self.name or "group"
        return f"<GeneratedGroup {label} degree={self.degree} order={self.order}>"


def generate(gens: Sequence[Permutation], n: int, name: str | None = None) -> GeneratedGroup:
    return GeneratedGroup(gens, n, name)


def member(G: GeneratedGroup, p: Permutation) -> bool:
    return G.member(p)


def orbits(G: GeneratedGroup) -> list[list[int]]:
    """1-based orbit partition."""
    return [[x + 1 for x in o] for o in G.orbits()]


def is_transitive(G: GeneratedGroup) -> bool:
    return G.is_transitive()


def lambda_of(G: GeneratedGroup | int) -> int:
    order = G if isinstance(G, int) else G.order
    return big_omega(order)


def generated_order(gens: Sequence[tuple], n: int) -> int:
    """Order of the group generated by raw image tuples."""
    return StabChain(n, list(gens)).order()


# ---------------------------------------------------------------------------
# blocks and transitivity on pairs

def minimal_block(G: GeneratedGroup, a: int, b: int) -> list[list[int]]:
    """Finest block system of a transitive G in which a and b share a block.

    Atkinson's union-find procedure; 0-based points.
    """
    n = G.degree
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        x, y = find(x), find(y)
        if x == y:
            return False
        parent[max(x, y)] = min(x, y)
        return True

    union(a, b)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        for g in G._raw:
            gx, gy = g[x], g[y]
            if find(gx) != find(gy):
                union(gx, gy)
                queue.append((gx, gy))
    cells: dict[int, list[int]] = {}
    for i in range(n):
        cells.setdefault(find(i), []).append(i)
    return sorted(cells.values())


def is_primitive(G: GeneratedGroup) -> bool:
    if not G.is_transitive():
        return False
    n = G.degree
    return all(len(minimal_block(G, 0, b)) == 1 for b in range(1, n))


def preserves_blocks(G: GeneratedGroup, blocks: Sequence[Sequence[int]]) -> bool:
    """True iff every generator maps each block onto a block (0-based)."""
    where = {}
    for i, blk in enumerate(blocks):
        for x in blk:
            where[x] = i
    cells = [frozenset(b) for b in blocks]
    cellset = set(cells)
    for g in G._raw:
        for c in cells:
            if frozenset(g[x] for x in c) not in cellset:
                return False
    return True


def is_two_transitive(G: GeneratedGroup) -> bool:
    """Transitivity on ordered pairs of distinct points."""
    n = G.degree
    if n < 2 or not G.is_transitive():
        return False
    start = (0, 1)
    seen = {start}
    queue = [start]
    while queue:
        x, y = queue.pop()
        for g in G._raw:
            nxt = (g[x], g[y])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == n * (n - 1)


# ---------------------------------------------------------------------------
# small helpers used across modules

def even_part_gens(gens: Sequence[tuple], n: int) -> list[tuple]:
    """Generators of ⟨gens⟩ ∩ A_n by Reidemeister-Schreier on {e, t}."""
    from .perm import raw_displacement

    odd = [g for g in gens if raw_displacement(g) % 2]
    if not odd:
        return list(gens)
    t = odd[0]
    ti = inv(t)
    out = []
    for g in gens:
        g_odd = raw_displacement(g) % 2 == 1
        if g_odd:
            out.append(mul(g, ti))
            out.append(mul(t, g))
        else:
            out.append(g)
            out.append(mul(mul(t, g), ti))
    return [g for g in _dedup(out) if _first_moved(g) >= 0]


def normal_closure_gens(seed: Sequence[tuple], conj: Sequence[tuple], n: int) -> list[tuple]:
    """Generators of the smallest subgroup containing ``seed`` that is
    closed under conjugation by every element of ``conj``."""
    gens = _dedup([g for g in seed if _first_moved(g) >= 0])
    chain = StabChain(n, gens)
    changed = True
    while changed:
        changed = False
        for x in conj:
            xi = inv(x)
            for g in list(gens):
                c = mul(mul(x, g), xi)
                if not chain.contains(c):
                    gens.append(c)
                    chain = StabChain(n, gens)
                    changed = True
    return gens


# ---------------------------------------------------------------------------
# almost-maximality of intransitive subgroups of A_n

ALMOST_MAXIMAL_MAX_DEGREE = 8


@dataclass
class AlmostMaximalReport:
    verdict: str  # "maximal" | "unique_overgroup" | "counterexample"
    n: int
    X: list
    subgroup_order: int
    overgroup_order: int | None
    double_cosets: int
    counterexample: tuple | None = None

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "n": self.n,
            "X": [x + 1 for x in self.X],
            "subgroup_order": self.subgroup_order,
            "overgroup_order": self.overgroup_order,
            "double_cosets": self.double_cosets,
        }
        if self.counterexample is not None:
            out["counterexample"] = Permutation._trusted(self.counterexample).cycle_decomposition()
        return out


def _double_cosets(ambient: list[tuple], H: list[tuple], Hset: set) -> Iterator[tuple]:
    """One representative per H-double coset of ``ambient`` outside H."""
    covered: set = set()
    for h in ambient:
        if h in Hset or h in covered:
            continue
        yield h
        for a in H:
            ah = mul(a, h)
            for b in H:
                covered.add(mul(ah, b))


def intransitive_even_subgroup(n: int, X: Sequence[int]) -> list[tuple]:
    """Generators of (S_X × S_Y) ∩ A_n, 0-based X."""
    X = sorted(set(X))
    Y = [p for p in range(n) if p not in set(X)]
    gens = []
    for part in (X, Y):
        for a, b in zip(part, part[1:]):
            t = list(range(n))
            t[a], t[b] = b, a
            gens.append(tuple(t))
    return even_part_gens(gens, n) if gens else []


def balanced_wreath_even(n: int, X: Sequence[int]) -> list[tuple]:
    """Generators of (S_X ≀ S_2) ∩ A_n for |X| = n/2, with blocks X and Y."""
    X = sorted(set(X))
    Y = [p for p in range(n) if p not in set(X)]
    gens = []
    for part in (X, Y):
        for a, b in zip(part, part[1:]):
            t = list(range(n))
            t[a], t[b] = b, a
            gens.append(tuple(t))
    sigma = list(range(n))
    for a, b in zip(X, Y):
        sigma[a], sigma[b] = b, a
    gens.append(tuple(sigma))
    return even_part_gens(gens, n)


def verify_almost_maximal(n: int, X: Sequence[int], verbose: bool = False) -> AlmostMaximalReport:
    """Exhaustive check that G = (S_X × S_Y) ∩ A_n is maximal in A_n, or,
    when |X| = n/2, that every proper overgroup ⟨G, h⟩ lies in the maximal
    subgroup (S_{n/2} ≀ S_2) ∩ A_n. X is 0-based."""
    if n > ALMOST_MAXIMAL_MAX_DEGREE:
        raise ValueError(f"degree {n} above exhaustion cap {ALMOST_MAXIMAL_MAX_DEGREE}")
    X = sorted(set(X))
    if not X or len(X) >= n or any(x < 0 or x >= n for x in X):
        raise ValueError("X must be a proper nonempty subset of the points")
    from .builtins import alternating

    A = alternating(n)
    An = A.raw_elements()
    full = A.order
    Ggens = intransitive_even_subgroup(n, X)
    Gch = StabChain(n, Ggens)
    Gel = list(Gch.elements())
    Gset = set(Gel)
    balanced = 2 * len(X) == n
    W = StabChain(n, balanced_wreath_even(n, X)) if balanced else None
    count = 0
    for h in _double_cosets(An, Gel, Gset):
        count += 1
        K = StabChain(n, Ggens + [h])
        if K.order() == full:
            continue
        if balanced and all(W.contains(g) for g in K.strong_generators()):
            continue
        if verbose:
            print(f"proper overgroup of order {K.order()} from h = {h}")
        return AlmostMaximalReport("counterexample", n, X, len(Gel), K.order(), count, h)
    if not balanced:
        return AlmostMaximalReport("maximal", n, X, len(Gel), None, count)
    Wel = list(W.elements())
    Wset = set(Wel)
    for h in _double_cosets(An, Wel, Wset):
        K = StabChain(n, W.strong_generators() + [h])
        if K.order() != full:
            return AlmostMaximalReport("counterexample", n, X, len(Gel), W.order(), count, h)
    return AlmostMaximalReport("unique_overgroup", n, X, len(Gel), W.order(), count)
