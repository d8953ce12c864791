"""Graphs attached to irredundant generating sets of length n−2, the tree
form for A_n, and the seven types for S_n.

Edges are sorted 0-based vertex pairs. The transposition of an edge is
built explicitly with :func:`edge_perm`; an edge and a transposition are
never used interchangeably.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .builtins import alternating, symmetric
from .groups import GeneratedGroup, StabChain, verify_almost_maximal
from .irredundance import is_irredundant_generating
from .perm import Permutation, inv, mul, raw_cycles


class Unclassifiable(ValueError):
    """The input matches none of the expected shapes."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


def edge(a: int, b: int) -> tuple:
    if a == b:
        raise ValueError("an edge needs two distinct endpoints")
    return (a, b) if a < b else (b, a)


def edge_perm(e: tuple, n: int) -> tuple:
    img = list(range(n))
    a, b = e
    img[a], img[b] = b, a
    return tuple(img)


def _as_edge(p: tuple) -> tuple | None:
    """The edge of a transposition, else None."""
    moved = [x for x in range(len(p)) if p[x] != x]
    return (moved[0], moved[1]) if len(moved) == 2 else None


def _e1(e: tuple) -> list:
    return [e[0] + 1, e[1] + 1]


class _DSU:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        self.p[max(a, b)] = min(a, b)
        return True


def _is_forest(n: int, edges: Sequence[tuple]) -> bool:
    d = _DSU(n)
    return all(d.union(a, b) for a, b in edges)


def _connected(n: int, edges: Sequence[tuple]) -> bool:
    d = _DSU(n)
    for a, b in edges:
        d.union(a, b)
    return len({d.find(x) for x in range(n)}) == 1


def _unique_cycle(n: int, edges: Sequence[tuple]) -> list | None:
    """Edges of the only cycle of a connected unicyclic graph, in cyclic order."""
    if len(edges) != n or not _connected(n, edges):
        return None
    adj: dict[int, list] = {v: [] for v in range(n)}
    for e in edges:
        adj[e[0]].append(e)
        adj[e[1]].append(e)
    deg = {v: len(adj[v]) for v in range(n)}
    alive = set(edges)
    leaves = [v for v in range(n) if deg[v] == 1]
    while leaves:
        v = leaves.pop()
        for e in adj[v]:
            if e in alive:
                alive.discard(e)
                u = e[0] if e[1] == v else e[1]
                deg[u] -= 1
                if deg[u] == 1:
                    leaves.append(u)
    if not alive:
        return None
    start = min(alive)
    order = [start]
    prev, v = start, start[1]
    while True:
        nxt = [e for e in adj[v] if e in alive and e != prev]
        if not nxt or nxt[0] == start:
            break
        order.append(nxt[0])
        prev = nxt[0]
        v = prev[0] if prev[1] == v else prev[1]
    return order if len(order) == len(alive) else None


# ---------------------------------------------------------------------------
# the original graph

@dataclass
class LabeledGraph:
    n: int
    edges: list  # (a, b, index, slot) with slot "E1" or "E2"

    def edge_set(self, slot: str | None = None) -> list:
        return [(a, b) for a, b, _, s in self.edges if slot is None or s == slot]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [{"edge": _e1((a, b)), "index": i, "slot": s} for a, b, i, s in self.edges],
            "forest": is_forest(self),
        }


def is_forest(G: LabeledGraph, slot: str | None = "E1") -> bool:
    return _is_forest(G.n, G.edge_set(slot))


def sibling_groups(H: Sequence[Permutation]) -> list[StabChain]:
    n = H[0].degree
    raw = [h.images for h in H]
    return [StabChain(n, raw[:i] + raw[i + 1:]) for i in range(len(raw))]


def _orbit_ids(n: int, gens: Sequence[tuple]) -> list[int]:
    d = _DSU(n)
    for g in gens:
        for x in range(n):
            d.union(x, g[x])
    return [d.find(x) for x in range(n)]


def build_original_graph(H: Sequence[Permutation], G: GeneratedGroup | str,
                         check: bool = True) -> LabeledGraph:
    """One E1 edge per index i with G_i intransitive (and G_i ≠ A_n), plus
    the E2 edge of the second transposition when h_i is a product of two."""
    if not H:
        raise ValueError("empty set")
    n = H[0].degree
    if isinstance(G, str):
        G = alternating(n) if G.upper().startswith("A") else symmetric(n)
    if check and not is_irredundant_generating(list(H), G):
        raise ValueError("H is not an irredundant generating set of the group")
    raw = [h.images for h in H]
    an_order = alternating(n).order
    edges = []
    for i, h in enumerate(raw):
        others = raw[:i] + raw[i + 1:]
        Gi = StabChain(n, others)
        if Gi.order() == an_order and an_order != G.order:
            continue
        orb = _orbit_ids(n, others)
        if len(set(orb)) == 1:
            continue
        pair = next(((x, h[x]) for x in range(n) if orb[x] != orb[h[x]]), None)
        if pair is None:
            continue
        e = edge(*pair)
        edges.append((e[0], e[1], i, "E1"))
        rest = mul(edge_perm(e, n), h)
        e2 = _as_edge(rest)
        if e2 is not None:
            edges.append((e2[0], e2[1], i, "E2"))
    return LabeledGraph(n, edges)


# ---------------------------------------------------------------------------
# tree form for A_n

@dataclass
class TreeForm:
    n: int
    s: tuple
    g: list  # edges g_1..g_{n-2}
    signs: list  # +1 or -1 per element

    @property
    def tree(self) -> list:
        return [self.s] + list(self.g)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s": _e1(self.s),
            "g": [_e1(e) for e in self.g],
            "signs": list(self.signs),
            "tree": [_e1(e) for e in sorted(self.tree)],
        }

    @classmethod
    def from_json(cls, d: dict) -> "TreeForm":
        n = d["n"]
        return cls(n, edge(d["s"][0] - 1, d["s"][1] - 1),
                   [edge(a - 1, b - 1) for a, b in d["g"]], list(d.get("signs") or [1] * len(d["g"])))


def construct_from_tree_form(T: TreeForm, verify: bool = False) -> list[Permutation]:
    """(s·g_i)^{e_i} for each i."""
    n = T.n
    if len(T.g) != n - 2 or len(T.signs) != n - 2:
        raise ValueError("a tree form on n points has n-2 edges besides s")
    if not (_is_forest(n, T.tree) and len(set(T.tree)) == n - 1):
        raise ValueError("s and the g_i must form a spanning tree")
    s = edge_perm(T.s, n)
    out = []
    for e, sign in zip(T.g, T.signs):
        p = mul(s, edge_perm(e, n))
        out.append(Permutation._trusted(p if sign == 1 else inv(p)))
    if verify and not is_irredundant_generating(out, alternating(n)):
        raise AssertionError("tree form did not give an irredundant generating set")
    return out


def _candidate_edges(h: tuple) -> list[tuple]:
    """Edges that can serve as a factor of a product of two transpositions."""
    cyc = raw_cycles(h)
    if len(cyc) == 2 and all(len(c) == 2 for c in cyc):
        return sorted(edge(*c) for c in cyc)
    if len(cyc) == 1 and len(cyc[0]) == 3:
        a, b, c = cyc[0]
        return sorted([edge(a, b), edge(b, c), edge(a, c)])
    return []


def _factor_options(h: tuple, L: tuple, n: int) -> list[tuple]:
    """(x, sign) with (L·x)^sign = h for a transposition x ≠ L."""
    lp = edge_perm(L, n)
    out = []
    for sign, p in ((1, mul(lp, h)), (-1, mul(h, lp))):
        x = _as_edge(p)
        if x is not None and x != L and all(o[0] != x for o in out):
            out.append((x, sign))
    return out


def random_tree(n: int, rng) -> list[tuple]:
    """Uniform labelled tree on n vertices from a Prüfer sequence."""
    if n == 1:
        return []
    if n == 2:
        return [(0, 1)]
    seq = [int(rng.integers(0, n)) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = min(u for u in range(n) if degree[u] == 1)
        edges.append(edge(leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = [x for x in range(n) if degree[x] == 1]
    edges.append(edge(u, w))
    return edges


def random_tree_form(n: int, rng) -> TreeForm:
    tree = random_tree(n, rng)
    order = list(rng.permutation(len(tree)))
    s = tree[order[0]]
    g = [tree[i] for i in order[1:]]
    signs = [int(rng.choice([1, -1])) for _ in g]
    return TreeForm(n, s, g, signs)


def normalize_an(H: Sequence[Permutation], check: bool = True, allow_small: bool = False) -> TreeForm:
    """Tree form of an irredundant generating set of A_n of length n−2.

    The common s is tried first from the E2 edges of the original graph,
    then from every factor candidate; for each s the g_i are chosen with
    a backtracking search over the two inversion choices of each 3-cycle,
    keeping s and the chosen g_i a forest.
    """
    if not H:
        raise ValueError("empty set")
    n = H[0].degree
    if len(H) != n - 2:
        raise ValueError(f"expected n-2 = {n - 2} elements, got {len(H)}")
    if n in (5, 6) and not allow_small:
        raise ValueError("the tree form is not claimed for n = 5, 6")
    if check and not is_irredundant_generating(list(H), alternating(n)):
        raise ValueError("H is not an irredundant generating set of A_n")
    raw = [h.images for h in H]
    cands = [_candidate_edges(h) for h in raw]
    bad = [i for i, c in enumerate(cands) if not c]
    if bad:
        raise Unclassifiable("some element is not a product of two transpositions", {"indices": bad})
    common = set(cands[0])
    for c in cands[1:]:
        common &= set(c)
    preferred = []
    try:
        gr = build_original_graph(H, alternating(n), check=False)
        preferred = sorted(set(gr.edge_set("E2")) & common)
    except ValueError:
        pass
    order = preferred + sorted(common - set(preferred))
    for s in order:
        options = [_factor_options(h, s, n) for h in raw]
        if any(not o for o in options):
            continue
        res = _tree_search(n, s, options)
        if res is not None:
            g, signs = res
            return TreeForm(n, s, g, signs)
    raise Unclassifiable("no common s gives a spanning tree", {"common_candidates": [_e1(e) for e in sorted(common)]})


def _tree_search(n: int, s: tuple, options: list) -> tuple | None:
    chosen: list = []

    def rec(i: int):
        if i == len(options):
            edges = [s] + [x for x, _ in chosen]
            if len(set(edges)) == n - 1 and _is_forest(n, edges):
                return [x for x, _ in chosen], [sg for _, sg in chosen]
            return None
        used = {s} | {x for x, _ in chosen}
        for x, sg in options[i]:
            if x in used:
                continue
            if not _is_forest(n, [s] + [y for y, _ in chosen] + [x]):
                continue
            chosen.append((x, sg))
            out = rec(i + 1)
            chosen.pop()
            if out is not None:
                return out
        return None

    return rec(0)


def same_up_to_inversion(A: Sequence[Permutation], B: Sequence[Permutation]) -> bool:
    """Bijection between A and B matching each element to itself or its inverse."""
    if len(A) != len(B):
        return False
    pool = [b.images for b in B]
    for a in A:
        x, xi = a.images, inv(a.images)
        for k, b in enumerate(pool):
            if b == x or b == xi:
                pool.pop(k)
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# the seven types for S_n

TYPE_LETTERS = {1: ("s",), 2: (), 3: ("s", "t"), 4: ("s",), 5: ("s", "t"), 6: ("s",), 7: ("s", "t", "r")}


@dataclass
class TypeDescriptor:
    type_id: int
    n: int
    letters: dict  # name -> edge
    products: dict = field(default_factory=dict)  # letter name -> list of x edges
    bare: list = field(default_factory=list)  # bare transposition edges (types 1, 2)
    specials: list = field(default_factory=list)  # list of (edge, edge) disjoint pairs

    def transpositions(self) -> list[tuple]:
        out = list(self.letters.values()) + list(self.bare)
        for xs in self.products.values():
            out += list(xs)
        for a, b in self.specials:
            out += [a, b]
        return out

    def to_json(self) -> dict:
        out = {"type": self.type_id, "n": self.n}
        out["letters"] = {k: _e1(v) for k, v in self.letters.items()}
        out["products"] = {k: [_e1(e) for e in v] for k, v in self.products.items()}
        out["bare"] = [_e1(e) for e in self.bare]
        out["specials"] = [[_e1(a), _e1(b)] for a, b in self.specials]
        counts = {k: len(v) for k, v in self.products.items()}
        if self.type_id in (1, 3):
            out["k"] = counts.get("s" if self.type_id == 1 else "t", 0)
        elif self.type_id == 5:
            out["k"] = counts.get("t", 0) + 2
        elif self.type_id == 7:
            out["k"] = counts.get("t", 0)
            out["l"] = counts.get("t", 0) + counts.get("r", 0)
        return out

    @classmethod
    def from_json(cls, d: dict) -> "TypeDescriptor":
        def e(p):
            return edge(p[0] - 1, p[1] - 1)

        return cls(
            int(d["type"]), int(d["n"]),
            {k: e(v) for k, v in (d.get("letters") or {}).items()},
            {k: [e(x) for x in v] for k, v in (d.get("products") or {}).items()},
            [e(x) for x in d.get("bare") or []],
            [(e(a), e(b)) for a, b in d.get("specials") or []],
        )


def _pair_product(a: tuple, b: tuple, n: int) -> tuple:
    return mul(edge_perm(a, n), edge_perm(b, n))


def check_descriptor(D: TypeDescriptor) -> list[str]:
    """Violations of the type's invariants (empty when valid)."""
    n, t = D.n, D.type_id
    errs = []
    if t not in TYPE_LETTERS:
        return [f"unknown type {t}"]
    if set(D.letters) != set(TYPE_LETTERS[t]):
        errs.append(f"type {t} needs letters {TYPE_LETTERS[t]}")
    for name in D.products:
        if name not in D.letters:
            errs.append(f"products for unknown letter {name}")
    cnt = {k: len(D.products.get(k, [])) for k in ("s", "t", "r")}
    nspec = len(D.specials)
    nbare = len(D.bare)
    for a, b in D.specials:
        if set(a) & set(b):
            errs.append("special pairs must be disjoint transpositions")
    shape = {
        1: nspec == 0 and cnt["s"] >= 1 and nbare >= 1 and cnt["s"] + nbare == n - 2,
        2: nspec == 2 and nbare == n - 4 and not D.products,
        3: nspec == 0 and nbare == 0 and cnt["t"] >= 1 and cnt["t"] + cnt["s"] == n - 3,
        4: nspec == 2 and nbare == 0 and cnt["s"] == n - 5,
        5: nspec == 1 and nbare == 0 and cnt["t"] >= 1 and cnt["t"] + cnt["s"] == n - 4,
        6: nspec == 2 and nbare == 0 and cnt["s"] == n - 5,
        7: nspec == 0 and nbare == 0 and cnt["t"] >= 1 and cnt["r"] >= 1 and cnt["t"] + cnt["r"] + cnt["s"] == n - 3,
    }[t]
    if not shape:
        errs.append(f"element counts do not match type {t}")
    edges = D.transpositions()
    if any(a == b or not (0 <= a < n and 0 <= b < n) for a, b in edges):
        errs.append("bad edge")
    if len(set(edges)) != len(edges):
        errs.append("transpositions must be distinct")
    if errs:
        return errs
    if t in (1, 3):
        if not (len(edges) == n - 1 and _is_forest(n, edges)):
            errs.append("graph is not a spanning tree")
        return errs
    cyc = _unique_cycle(n, edges)
    if cyc is None:
        errs.append("graph is not connected with exactly one cycle")
        return errs
    S = D.letters.get("s")
    want_ok = False
    if t in (2, 4):
        (a, b), (c, d) = D.specials
        want_ok = set(cyc) == {a, b, c, d}
    elif t == 5:
        (a, b), = D.specials
        T = D.letters["t"]
        want_ok = set(cyc) == {a, b, S, T} and not (set(S) & set(T))
    elif t == 6:
        want_ok = _matches_five_cycle(cyc, D.specials, S)
    elif t == 7:
        want_ok = set(cyc) == {S, D.letters["t"], D.letters["r"]}
    if not want_ok:
        errs.append(f"the cycle {[_e1(e) for e in cyc]} is not the one type {t} requires")
    return errs


def _matches_five_cycle(cyc: list, specials: list, s: tuple) -> bool:
    """cyc is (s1, s3, s2, s4, s) up to rotation, reflection and relabelling."""
    if len(cyc) != 5:
        return False
    (p1, p2), (q1, q2) = specials
    for (a1, a2), (b1, b2) in (((p1, p2), (q1, q2)), ((q1, q2), (p1, p2))):
        for x1, x2 in ((a1, a2), (a2, a1)):
            for y1, y2 in ((b1, b2), (b2, b1)):
                pattern = [x1, y1, x2, y2, s]
                for r in range(5):
                    rot = cyc[r:] + cyc[:r]
                    if rot == pattern or rot[::-1] == pattern:
                        return True
    return False


def construct_type(D: TypeDescriptor, verify: bool = True) -> list[Permutation]:
    """The literal element set of the type, in the order of its statement."""
    errs = check_descriptor(D)
    if errs:
        raise ValueError("; ".join(errs))
    n = D.n
    L = D.letters
    raw: list[tuple] = []
    for a, b in D.specials:
        raw.append(_pair_product(a, b, n))
    for name in ("t", "r"):
        for x in D.products.get(name, []):
            raw.append(_pair_product(L[name], x, n))
    if D.type_id >= 3:
        raw.append(edge_perm(L["s"], n))
    for x in D.products.get("s", []):
        raw.append(_pair_product(L["s"], x, n))
    for e in D.bare:
        raw.append(edge_perm(e, n))
    out = [Permutation._trusted(p) for p in raw]
    if len(out) != n - 2:
        raise AssertionError("constructed set has the wrong length")
    if verify and not is_irredundant_generating(out, symmetric(n)):
        raise AssertionError(f"type {D.type_id} construction is not an irredundant generating set")
    return out


# -- random descriptors

def _random_unicyclic(n: int, L: int, rng) -> tuple[list, list]:
    """(cycle edges in cyclic order, other edges) for a connected graph
    whose only cycle has length L."""
    verts = [int(v) for v in rng.permutation(n)]
    cyc_v = verts[:L]
    cyc = [edge(cyc_v[i], cyc_v[(i + 1) % L]) for i in range(L)]
    placed = list(cyc_v)
    rest = []
    for v in verts[L:]:
        u = placed[int(rng.integers(0, len(placed)))]
        rest.append(edge(u, v))
        placed.append(v)
    return cyc, rest


def _split(items: list, sizes: list) -> list[list]:
    out, k = [], 0
    for s in sizes:
        out.append(items[k:k + s])
        k += s
    return out


def random_descriptor(type_id: int, n: int, rng) -> TypeDescriptor:
    """A uniformly shaped random descriptor. Type 3 uses k <= n-4 so that it
    never coincides with type 1."""
    if type_id in (1, 3):
        tree = random_tree(n, rng)
        order = [tree[i] for i in rng.permutation(len(tree))]
        if type_id == 1:
            k = int(rng.integers(1, n - 2))
            return TypeDescriptor(1, n, {"s": order[0]}, {"s": order[1:1 + k]}, order[1 + k:])
        k = int(rng.integers(1, n - 3))
        t, s, xs = order[0], order[1], order[2:]
        return TypeDescriptor(3, n, {"s": s, "t": t}, {"t": xs[:k], "s": xs[k:]})
    L = {2: 4, 4: 4, 5: 4, 6: 5, 7: 3}[type_id]
    cyc, rest = _random_unicyclic(n, L, rng)
    rest = [rest[i] for i in rng.permutation(len(rest))]
    if type_id == 2:
        return TypeDescriptor(2, n, {}, {}, rest, [(cyc[0], cyc[2]), (cyc[1], cyc[3])])
    if type_id == 4:
        return TypeDescriptor(4, n, {"s": rest[0]}, {"s": rest[1:]}, [], [(cyc[0], cyc[2]), (cyc[1], cyc[3])])
    if type_id == 6:
        s1, s3, s2, s4, s = cyc
        return TypeDescriptor(6, n, {"s": s}, {"s": rest}, [], [(s1, s2), (s3, s4)])
    if type_id == 5:
        s1, s, s2, t = cyc
        k = int(rng.integers(1, len(rest) + 1))
        return TypeDescriptor(5, n, {"s": s, "t": t}, {"t": rest[:k], "s": rest[k:]}, [], [(s1, s2)])
    s, t, r = cyc
    a = int(rng.integers(1, len(rest)))
    b = int(rng.integers(a + 1, len(rest) + 1))
    return TypeDescriptor(7, n, {"s": s, "t": t, "r": r}, {"t": rest[:a], "r": rest[a:b], "s": rest[b:]})


# -- matching

@dataclass
class Classification:
    descriptor: TypeDescriptor
    types: list
    verified: bool

    def to_json(self) -> dict:
        return {"type": self.descriptor.type_id, "matching_types": self.types,
                "descriptor": self.descriptor.to_json(), "verified": self.verified}


def _match_type(type_id: int, raw: list[tuple], n: int) -> TypeDescriptor | None:
    bare_idx = [i for i, h in enumerate(raw) if _as_edge(h) is not None]
    pair_idx = [i for i in range(len(raw)) if i not in set(bare_idx)]
    cand = {i: _candidate_edges(raw[i]) for i in pair_idx}
    if any(not c for c in cand.values()):
        return None
    disjoint = {i for i in pair_idx if len(raw_cycles(raw[i])) == 2}
    nspec = {1: 0, 2: 2, 3: 0, 4: 2, 5: 1, 6: 2, 7: 0}[type_id]
    if type_id == 2:
        if len(pair_idx) != 2 or len(bare_idx) != n - 4 or not all(i in disjoint for i in pair_idx):
            return None
        D = TypeDescriptor(2, n, {}, {}, [_as_edge(raw[i]) for i in bare_idx],
                           [tuple(cand[i]) for i in pair_idx])
        return D if not check_descriptor(D) else None
    if type_id == 1:
        if not bare_idx or not pair_idx:
            return None
        common = set.intersection(*(set(cand[i]) for i in pair_idx))
        letter_choices = [{"s": s} for s in sorted(common)]
    else:
        if len(bare_idx) != 1:
            return None
        s = _as_edge(raw[bare_idx[0]])
        extra = [x for x in TYPE_LETTERS[type_id] if x != "s"]
        pool = sorted({e for i in pair_idx for e in cand[i]} - {s})
        letter_choices = []
        for combo in itertools.permutations(pool, len(extra)):
            if type_id == 7 and combo[0] > combo[1]:
                continue
            d = {"s": s}
            d.update(zip(extra, combo))
            letter_choices.append(d)
    for letters in letter_choices:
        D = _assign_roles(type_id, n, raw, pair_idx, disjoint, cand, letters, nspec,
                          [_as_edge(raw[i]) for i in bare_idx] if type_id == 1 else [])
        if D is not None:
            return D
    return None


def _assign_roles(type_id, n, raw, pair_idx, disjoint, cand, letters, nspec, bare):
    opts = []
    for i in pair_idx:
        o = []
        for name, L in letters.items():
            if L in cand[i]:
                for x, _ in _factor_options(raw[i], L, n):
                    if x not in letters.values():
                        o.append(("p", name, x))
        if nspec and i in disjoint:
            o.append(("sp", None, tuple(cand[i])))
        if not o:
            return None
        opts.append(o)
    base_edges = list(letters.values()) + list(bare)
    if len(set(base_edges)) != len(base_edges):
        return None
    chosen: list = []

    def rec(k: int, used: set):
        if k == len(opts):
            prods: dict = {name: [] for name in letters}
            specials = []
            for role, name, x in chosen:
                if role == "p":
                    prods[name].append(x)
                else:
                    specials.append(x)
            D =TypeDescriptor(type_id, n, dict(letters), prods, list(bare), specials)
            return D if not check_descriptor(D) else None
        nsp = sum(1 for r in chosen if r[0] == "sp")
        for role, name, x in opts[k]:
            new = set(x) if role == "sp" else {x}
            if new & used or (role == "sp" and nsp >= nspec):
                continue
            chosen.append((role, name, x))
            out = rec(k + 1, used | new)
            chosen.pop()
            if out is not None:
                return out
        return None

    return rec(0, set(base_edges))


def classify_sn(H: Sequence[Permutation], check: bool = True) -> Classification:
    """Smallest matching type, with the list of every matching type."""
    if not H:
        raise ValueError("empty set")
    n = H[0].degree
    if len(H) != n - 2:
        raise ValueError(f"expected n-2 = {n - 2} elements, got {len(H)}")
    if check and not is_irredundant_generating(list(H), symmetric(n)):
        raise ValueError("H is not an irredundant generating set of S_n")
    raw = [h.images for h in H]
    found = {}
    for t in range(1, 8):
        D = _match_type(t, raw, n)
        if D is not None:
            found[t] = D
    if not found:
        shapes = [Permutation._trusted(h).cycle_type() for h in raw]
        raise Unclassifiable("no type matches", {"cycle_types": shapes})
    primary = min(found)
    D = found[primary]
    ok = same_up_to_inversion(construct_type(D, verify=False), list(H))
    return Classification(D, sorted(found), ok)


# ---------------------------------------------------------------------------
# sampling and uniqueness

def sample_max_irredundant(n: int, rng, group: str = "A", steps: int = 10,
                           max_tries: int = 2000) -> list[Permutation]:
    """Random irredundant generating set of maximal length.

    Random walk on the replacement graph: start from a seed set of length
    n−2 (A_n, a random tree form) or n−1 (S_n, a random spanning tree of
    transpositions), then repeatedly replace a random member by a uniform
    random non-identity element, keeping the move only when the result is
    still irredundant and generating. Every state of the walk is a maximal
    length set; after ``steps`` accepted moves the set is returned,
    conjugated by a uniform random element.
    """
    alt = group.upper().startswith("A")
    G = alternating(n) if alt else symmetric(n)
    elems = [g for g in G.raw_elements() if g != tuple(range(n))]
    full = G.order
    if alt:
        S = [h.images for h in construct_from_tree_form(random_tree_form(n, rng))]
    else:
        S = [edge_perm(e, n) for e in random_tree(n, rng)]

    def ok(cand, i):
        # member i is new; the cheap test against the fixed others comes first
        for j in range(len(cand)):
            if j != i and StabChain(n, cand[:j] + cand[j + 1:]).contains(cand[j]):
                return False
        return StabChain(n, cand).order() == full

    accepted = tries = 0
    others: dict = {}
    while accepted < steps:
        tries += 1
        if tries > max_tries * steps:
            raise RuntimeError("replacement walk is stuck")
        i = int(rng.integers(0, len(S)))
        g = elems[int(rng.integers(0, len(elems)))]
        if i not in others:
            others[i] = StabChain(n, S[:i] + S[i + 1:])
        if others[i].contains(g):
            continue
        cand = S[:i] + [g] + S[i + 1:]
        if ok(cand, i):
            S = cand
            accepted += 1
            others = {}
    c = G.raw_elements()[int(rng.integers(0, full))]
    ci = inv(c)
    return [Permutation._trusted(mul(mul(c, h), ci)) for h in S]


@dataclass
class UniquenessReport:
    n: int
    entries: list
    unique: bool

    def to_json(self) -> dict:
        return {"n": self.n, "entries": self.entries, "uniquely_determined": self.unique}


def uniqueness_check(H: Sequence[Permutation]) -> UniquenessReport:
    """For each G_i: its orbits, whether it equals (S_X × S_Y) ∩ A_n, and the
    almost-maximality verdict for that split."""
    n = H[0].degree
    if n > 8:
        raise ValueError("uniqueness check needs n <= 8")
    if len(H) != n - 2:
        raise ValueError(f"expected n-2 = {n - 2} elements")
    raw = [h.images for h in H]
    entries = []
    unique = True
    for i in range(len(raw)):
        others = raw[:i] + raw[i + 1:]
        Gi = StabChain(n, others)
        ids = _orbit_ids(n, others)
        orbs: dict = {}
        for x in range(n):
            orbs.setdefault(ids[x], []).append(x)
        orbs = sorted(orbs.values())
        entry = {"index": i, "order": Gi.order(), "orbits": [[x + 1 for x in o] for o in orbs]}
        if len(orbs) == 2:
            X = orbs[0]
            from .groups import intransitive_even_subgroup
            full = StabChain(n, intransitive_even_subgroup(n, X))
            entry["is_full_intransitive"] = full.order() == Gi.order()
            rep = verify_almost_maximal(n, X)
            entry["verdict"] = rep.verdict
            entry["overgroup_order"] = rep.overgroup_order if rep.overgroup_order else Gi.order()
            if rep.verdict == "counterexample" or not entry["is_full_intransitive"]:
                unique = False
        else:
            entry["verdict"] = "not_two_orbits"
            unique = False
        entries.append(entry)
    return UniquenessReport(n, entries, unique)
