"""Irredundant sets: m(G), i(G), flatness, replacement, and two refinements.

Exact values come from a search over the subgroup lattice. A set S that is
irredundant and generates K has |S| - 1 <= m(⟨S minus one element⟩), so
m(K) <= 1 + max m(L) over proper subgroups L. Classes are processed in
increasing order and each m(K) is settled by a depth-first search for a set
of the bounded size, stepping down until one is found. Irredundance is
closed under taking subsets, so partial sets that are already redundant are
pruned, and λ bounds how many more strict enlargements a prefix can take.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .groups import GeneratedGroup, StabChain, big_omega, generate
from .lattice import GroupTable, ORDER_CAP, iter_bits
from .perm import Permutation, ident, inv, mul


class BudgetExhausted(RuntimeError):
    pass


@dataclass
class SearchBudget:
    node_limit: int | None = None
    time_limit_seconds: float | None = None
    worker_count: int = 1


@dataclass
class IrredundantWitness:
    elements: list
    generates: bool
    target: GeneratedGroup | None = None

    def to_json(self) -> list:
        return [p.cycle_decomposition() for p in self.elements]


@dataclass
class SearchResult:
    invariant: str
    value: int
    exact: bool
    witness: IrredundantWitness
    nodes: int = 0
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {
            "invariant": self.invariant,
            "value": self.value,
            "exact": self.exact,
            "witness": self.witness.to_json(),
            "nodes": self.nodes,
            "seconds": round(self.seconds, 3),
        }


# ---------------------------------------------------------------------------
# definitions, checked with stabilizer chains (any degree)

def _raw(S: Sequence[Permutation]) -> list[tuple]:
    return [p.images for p in S]


def is_irredundant(S: Sequence[Permutation], G: GeneratedGroup | None = None) -> bool:
    """No element lies in the subgroup generated by the others.

    The empty set is irredundant.
    """
    if not S:
        return True
    n = S[0].degree
    raw = _raw(S)
    for j, g in enumerate(raw):
        others = raw[:j] + raw[j + 1:]
        if StabChain(n, others).contains(g):
            return False
    return True


def is_irredundant_generating(S: Sequence[Permutation], G: GeneratedGroup) -> bool:
    if not all(G.member(p) for p in S):
        return False
    if generate(list(S), G.degree).order != G.order:
        return False
    return is_irredundant(S, G)


def redundant_indices(S: Sequence[Permutation]) -> list[int]:
    n = S[0].degree if S else 1
    raw = _raw(S)
    return [j for j, g in enumerate(raw) if StabChain(n, raw[:j] + raw[j + 1:]).contains(g)]


# ---------------------------------------------------------------------------
# the search engine on a group table

class _Engine:
    def __init__(self, T: GroupTable, budget: SearchBudget | None):
        self.T = T
        self.budget = budget or SearchBudget()
        self.nodes = 0
        self.t0 = time.monotonic()
        self._lam: dict[int, int] = {}
        self.m_of_class: dict[int, int] = {}

    def lam(self, mask: int) -> int:
        o = mask.bit_count()
        v = self._lam.get(o)
        if v is None:
            v = self._lam[o] = big_omega(o)
        return v

    def tick(self) -> None:
        self.nodes += 1
        b = self.budget
        if b.node_limit is not None and self.nodes > b.node_limit:
            raise BudgetExhausted("node limit")
        if b.time_limit_seconds is not None and self.nodes % 512 == 0:
            if time.monotonic() - self.t0 > b.time_limit_seconds:
                raise BudgetExhausted("time limit")

    # -- DFS core
    def _dfs(self, cands, start, P, H, Ms, t, K, want_gen, on_leaf):
        """Extend irredundant prefix P (subgroup H, Ms[j] = ⟨P minus P[j]⟩)."""
        self.tick()
        if len(P) == t:
            if want_gen and H != K:
                return False
            return on_leaf(P, H, Ms)
        rem = t - len(P)
        if want_gen and H == K:
            return False
        if self.lam(K) - self.lam(H) < rem:
            return False
        T = self.T
        for idx in range(start, len(cands)):
            x = cands[idx]
            if (H >> x) & 1:
                continue
            newMs = []
            for j, Mj in enumerate(Ms):
                Mj2 = T.join(Mj, x)
                if (Mj2 >> P[j]) & 1:
                    break
                newMs.append(Mj2)
            else:
                newMs.append(H)
                P.append(x)
                found = self._dfs(cands, idx + 1, P, T.join(H, x), newMs, t, K, want_gen, on_leaf)
                P.pop()
                if found:
                    return True
        return False

    def reduced_candidates(self, K: int):
        """Elements of K ordered by (K-class, index) and the class minima."""
        cid = self.T.element_classes(K)
        cands = sorted((x for x in iter_bits(K) if x != 0), key=lambda x: (cid[x], x))
        reps = [i for i, x in enumerate(cands) if cid[x] == x]
        return cands, reps

    def exists(self, K: int, t: int, want_gen: bool = True, firsts=None) -> bool:
        """Is there an irredundant set of size t (generating K if want_gen)?

        Up to K-conjugacy a set contains the minimum of the class of its
        least-keyed element, so the first element runs over class minima.
        """
        if t == 0:
            return K == 1 or not want_gen
        cands, reps = self.reduced_candidates(K)
        if firsts is not None:
            reps = [r for r in reps if r in firsts]
        T = self.T
        for r in reps:
            x = cands[r]
            if self._dfs(cands, r + 1, [x], T.join(1, x), [1], t, K, want_gen, lambda *a: True):
                return True
        return False

    def first_witness(self, K: int, t: int, want_gen: bool = True) -> list[int]:
        """Lexicographically smallest irredundant set of size t (by index)."""
        cands = [x for x in iter_bits(K) if x != 0]
        out: list[int] = []

        def leaf(P, H, Ms):
            out.extend(P)
            return True

        if t == 0:
            return []
        self._dfs(cands, 0, [], 1, [], t, K, want_gen, leaf)
        return out

    # -- lattice values
    def m_of(self, ci: int) -> int:
        if ci in self.m_of_class:
            return self.m_of_class[ci]
        T = self.T
        classes = T.subgroup_classes()
        cl = classes[ci]
        K = cl.rep
        if cl.order == 1:
            self.m_of_class[ci] = 0
            return 0
        sub = 0
        for cj, other in enumerate(classes[:ci]):
            if other.order >= cl.order or cl.order % other.order:
                continue
            if any(m & K == m for m in other.members):
                sub = max(sub, self.m_of(cj))
        upper = min(1 + sub, self.lam(K))
        t = upper
        while t > 1 and not self.exists(K, t):
            t -= 1
        self.m_of_class[ci] = t
        return t


def _table(G: GeneratedGroup, order_cap: int = ORDER_CAP) -> GroupTable:
    return GroupTable(G, order_cap)


def _prune_to_irredundant(T: GroupTable, gens: Sequence[int]) -> list[int]:
    gens = [g for g in dict.fromkeys(gens) if g != 0]
    j = len(gens) - 1
    while j >= 0:
        others = gens[:j] + gens[j + 1:]
        if (T.closure(others) >> gens[j]) & 1:
            gens.pop(j)
        j -= 1
    return gens


def _witness(T: GroupTable, idx: Sequence[int], generates: bool, G) -> IrredundantWitness:
    return IrredundantWitness([T.perm(i) for i in idx], generates, G)


def _parallel_exists(G: GeneratedGroup, t: int, workers: int) -> bool:
    """Split the top-level class minima across processes."""
    T = GroupTable(G)
    _, reps = _Engine(T, None).reduced_candidates(T.full)
    cands, _ = _Engine(T, None).reduced_candidates(T.full)
    firsts = [cands[r] for r in reps]
    chunks = [firsts[i::workers] for i in range(workers)]
    gens = [g.images for g in G.generators]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(_exists_worker, [(gens, G.degree, t, set(c)) for c in chunks if c]))
    return any(results)


def _exists_worker(args) -> bool:
    gens, n, t, firsts = args
    G = GeneratedGroup([Permutation(g) for g in gens], n)
    T = GroupTable(G)
    cands, reps = _Engine(T, None).reduced_candidates(T.full)
    eng = _Engine(T, None)
    return eng.exists(T.full, t, True, firsts={r for r in reps if cands[r] in firsts})


def m_search(G: GeneratedGroup, budget: SearchBudget | None = None,
             order_cap: int = ORDER_CAP) -> SearchResult:
    """m(G) exactly, with the lexicographically smallest witness."""
    t0 = time.monotonic()
    T = _table(G, order_cap)
    eng = _Engine(T, budget)
    if T.size == 1:
        return SearchResult("m", 0, True, IrredundantWitness([], True, G), 0, time.monotonic() - t0)
    fallback = _prune_to_irredundant(T, T.gen_idx)
    try:
        classes = T.subgroup_classes()
        top = T.class_of[T.full]
        sub = 0
        for cj in range(len(classes)):
            if cj != top:
                sub = max(sub, eng.m_of(cj))
        t = min(1 + sub, eng.lam(T.full))
        workers = eng.budget.worker_count
        while t > 1:
            if workers > 1:
                found = _parallel_exists(G, t, workers)
            else:
                found = eng.exists(T.full, t)
            if found:
                break
            t -= 1
        eng.m_of_class[top] = t
        wit = eng.first_witness(T.full, t)
        return SearchResult("m", t, True, _witness(T, wit, True, G), eng.nodes, time.monotonic() - t0)
    except BudgetExhausted:
        return SearchResult("m", len(fallback), False, _witness(T, fallback, True, G),
                            eng.nodes, time.monotonic() - t0)


def i_search(G: GeneratedGroup, budget: SearchBudget | None = None,
             order_cap: int = ORDER_CAP, method: str = "lattice") -> SearchResult:
    """i(G) exactly.

    ``lattice``: i(G) is the largest m(K) over subgroups K, since an
    irredundant set generates something. ``dfs``: plain search over
    irredundant sets, pruned by λ.
    """
    t0 = time.monotonic()
    T = _table(G, order_cap)
    eng = _Engine(T, budget)
    if T.size == 1:
        return SearchResult("i", 0, True, IrredundantWitness([], True, G), 0, time.monotonic() - t0)
    best = 1
    try:
        if method == "lattice":
            classes = T.subgroup_classes()
            best = max(eng.m_of(ci) for ci in range(len(classes)))
        else:
            t = 1
            while t < eng.lam(T.full) and eng.exists(T.full, t + 1, want_gen=False):
                t += 1
            best = t
        wit = eng.first_witness(T.full, best, want_gen=False)
        gens = T.closure(wit) == T.full
        return SearchResult("i", best, True, _witness(T, wit, gens, G), eng.nodes, time.monotonic() - t0)
    except BudgetExhausted:
        wit = eng.first_witness(T.full, 1, want_gen=False)
        return SearchResult("i", 1, False, _witness(T, wit, False, G), eng.nodes, time.monotonic() - t0)


def subgroup_m_values(G: GeneratedGroup, budget: SearchBudget | None = None,
                      order_cap: int = ORDER_CAP) -> list[tuple[GeneratedGroup, int, int]]:
    """(representative, m, class size) for every conjugacy class of subgroups."""
    T = _table(G, order_cap)
    eng = _Engine(T, budget)
    out = []
    for ci, cl in enumerate(T.subgroup_classes()):
        out.append((T.to_group(cl.rep), eng.m_of(ci), len(cl.members)))
    return out


def _flatness(G: GeneratedGroup, budget, order_cap):
    T = _table(G, order_cap)
    eng = _Engine(T, budget)
    classes = T.subgroup_classes()
    top = T.class_of[T.full]
    mG = eng.m_of(top) if T.size > 1 else 0
    others = [eng.m_of(ci) for ci in range(len(classes)) if ci != top]
    return mG, others


def is_flat(G: GeneratedGroup, budget: SearchBudget | None = None, order_cap: int = ORDER_CAP) -> bool:
    mG, others = _flatness(G, budget, order_cap)
    return all(v <= mG for v in others)


def is_strongly_flat(G: GeneratedGroup, budget: SearchBudget | None = None,
                     order_cap: int = ORDER_CAP) -> bool:
    mG, others = _flatness(G, budget, order_cap)
    return all(v < mG for v in others)


# ---------------------------------------------------------------------------
# replacement property

@dataclass
class ReplacementResult:
    holds: bool
    exact: bool
    m: int
    sets_checked: int
    counterexample_set: list = field(default_factory=list)
    counterexample_h: Permutation | None = None
    nodes: int = 0
    seconds: float = 0.0

    def to_json(self) -> dict:
        out = {
            "invariant": "replacement",
            "holds": self.holds,
            "exact": self.exact,
            "m": self.m,
            "sets_checked": self.sets_checked,
            "nodes": self.nodes,
            "seconds": round(self.seconds, 3),
        }
        if not self.holds and self.counterexample_h is not None:
            out["counterexample"] = {
                "set": [p.cycle_decomposition() for p in self.counterexample_set],
                "h": self.counterexample_h.cycle_decomposition(),
            }
        return out


def replacement_property(G: GeneratedGroup, budget: SearchBudget | None = None,
                         order_cap: int = ORDER_CAP, m: int | None = None) -> ReplacementResult:
    """Every length-m(G) irredundant generating set admits every h ≠ 1 as a
    replacement for some member. Sets are enumerated up to conjugacy in G,
    which preserves the property."""
    t0 = time.monotonic()
    T = _table(G, order_cap)
    eng = _Engine(T, budget)
    if m is None:
        m = m_search(G, budget, order_cap).value
    if T.size == 1 or m == 0:
        return ReplacementResult(True, True, m, 0, seconds=time.monotonic() - t0)
    full = T.full
    state = {"count": 0, "bad": None}
    nonid = range(1, T.size)

    def leaf(P, H, Ms):
        state["count"] += 1
        for h in nonid:
            if not any(T.join(Mj, h) == full for Mj in Ms):
                state["bad"] = (list(P), h)
                return True
        return False

    cands, reps = eng.reduced_candidates(full)
    try:
        for r in reps:
            x = cands[r]
            if eng._dfs(cands, r + 1, [x], T.join(1, x), [1], m, full, True, leaf):
                break
    except BudgetExhausted:
        return ReplacementResult(True, False, m, state["count"], nodes=eng.nodes,
                                 seconds=time.monotonic() - t0)
    if state["bad"] is not None:
        P, h = state["bad"]
        return ReplacementResult(False, True, m, state["count"], [T.perm(i) for i in P], T.perm(h),
                                 eng.nodes, time.monotonic() - t0)
    return ReplacementResult(True, True, m, state["count"], nodes=eng.nodes, seconds=time.monotonic() - t0)


def _covering_union(subs: Sequence[int], inside: Sequence[int], outside: int | None = None) -> int:
    """OR of the proper subgroups containing every index in ``inside``
    (and not containing ``outside``)."""
    acc = 0
    for H in subs:
        if outside is not None and (H >> outside) & 1:
            continue
        if all((H >> x) & 1 for x in inside):
            acc |= H
    return acc


def replacement_counterexample(G: GeneratedGroup, budget: SearchBudget | None = None,
                               order_cap: int = ORDER_CAP) -> ReplacementResult:
    """Decide the replacement property from the subgroup lattice.

    Dropping one member of a length-t irredundant generating set leaves a
    length-(t−1) irredundant generating set of a proper subgroup K with
    m(K) >= t−1. So m(G) <= 1 + max m(K), and every length-t set is, up
    to conjugacy, an irredundant generating set P of a class
    representative plus one element g. With all subgroups known, both
    tests are set operations: P ∪ {g} is irredundant and generating iff g
    lies, for each j, in some subgroup containing P minus p_j but not p_j,
    and in no proper subgroup containing P; h replaces member i iff h lies
    in no proper subgroup containing the other members. Lengths are tried
    from the upper bound down; the first length with a set is m(G), and
    all its sets are scanned, so the answer is exact.
    """
    t0 = time.monotonic()
    T = _table(G, order_cap)
    eng = _Engine(T, budget)
    if T.size == 1:
        return ReplacementResult(True, True, 0, 0, seconds=time.monotonic() - t0)
    classes = T.subgroup_classes()
    top = T.class_of[T.full]
    subs = [H for H in T.all_subgroups() if H != T.full]
    try:
        mvals = {ci: eng.m_of(ci) for ci in range(len(classes)) if ci != top}
        t = min(1 + max(mvals.values()), eng.lam(T.full))
        while t >= 1:
            found = 0
            for ci, cl in enumerate(classes):
                if ci == top or mvals[ci] < t - 1:
                    continue
                K = cl.rep
                bases: list = []
                if t == 1:
                    bases = [[]] if K == 1 else []
                else:
                    cands = [x for x in iter_bits(K) if x != 0]
                    eng._dfs(cands, 0, [], 1, [], t - 1, K, True,
                             lambda P, H, Ms: bases.append(list(P)) and False)
                for P in bases:
                    eng.tick()
                    ok = T.full & ~_covering_union(subs, P)
                    for j, pj in enumerate(P):
                        ok &= _covering_union(subs, P[:j] + P[j + 1:], pj)
                        if not ok:
                            break
                    for g in iter_bits(ok):
                        S = P + [g]
                        found += 1
                        bad = T.full & ~1
                        for i in range(t):
                            bad &= _covering_union(subs, S[:i] + S[i + 1:])
                            if not bad:
                                break
                        if bad:
                            h = (bad & -bad).bit_length() - 1
                            return ReplacementResult(False, True, t, found, [T.perm(i) for i in S],
                                                     T.perm(h), eng.nodes, time.monotonic() - t0)
            if found:
                return ReplacementResult(True, True, t, found, nodes=eng.nodes,
                                         seconds=time.monotonic() - t0)
            t -= 1
    except BudgetExhausted:
        return ReplacementResult(True, False, 0, 0, nodes=eng.nodes, seconds=time.monotonic() - t0)
    return ReplacementResult(True, True, 0, 0, nodes=eng.nodes, seconds=time.monotonic() - t0)


def can_replace(S: Sequence[Permutation], h: Permutation, G: GeneratedGroup) -> list[int]:
    """Indices i such that S with S[i] replaced by h still generates G."""
    out = []
    for i in range(len(S)):
        trial = list(S[:i]) + [h] + list(S[i + 1:])
        if generate(trial, G.degree).order == G.order:
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# Whiston refinement

@dataclass
class WhistonResult:
    k: int
    sequence: list
    replacements: list
    kept: list

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "sequence": [p.cycle_decomposition() for p in self.sequence],
            "replacements": [p.cycle_decomposition() for p in self.replacements],
        }


def whiston_refine(S: Sequence[Permutation], N: GeneratedGroup,
                   G: GeneratedGroup | None = None) -> WhistonResult:
    """Split S against a normal subgroup N.

    Members are dropped from the back while their image stays redundant
    modulo N (tested as g ∈ ⟨others, N⟩). The k survivors come first; each
    dropped g is replaced by w^-1 g ∈ N with w ∈ ⟨survivors⟩, taking the
    first such w in element order.
    """
    S = list(S)
    n = S[0].degree if S else N.degree
    if G is None:
        G = generate(S, n)
    if not is_irredundant_generating(S, G):
        raise ValueError("S is not an irredundant generating set")
    if not (N.is_subgroup_of(G) and N.is_normal_in(G)):
        raise ValueError("N is not a normal subgroup of G")
    ngens = [g.images for g in N.generators]
    keep = list(range(len(S)))
    for j in range(len(S) - 1, -1, -1):
        others = [S[i].images for i in keep if i != j]
        if StabChain(n, others + ngens).contains(S[j].images):
            keep.remove(j)
    dropped = [i for i in range(len(S)) if i not in keep]
    A = [S[i] for i in keep]
    if dropped:
        span = generate(A, n).raw_elements()
    reps = []
    for i in dropped:
        g = S[i].images
        for w in span:
            h = mul(inv(w), g)
            if N.contains_raw(h):
                reps.append(Permutation._trusted(h))
                break
        else:
            raise AssertionError("no coset representative found")
    seq = A + reps
    return WhistonResult(len(A), seq, reps, A)


def whiston_check(res: WhistonResult, N: GeneratedGroup, G: GeneratedGroup) -> dict:
    """Postconditions of whiston_refine as a dict of booleans."""
    n = G.degree
    ngens = [g.images for g in N.generators]
    A = res.kept
    quotient_gen = StabChain(n, [a.images for a in A] + ngens).order() == G.order
    quotient_irr = all(
        not StabChain(n, [b.images for j, b in enumerate(A) if j != i] + ngens).contains(a.images)
        for i, a in enumerate(A)
    )
    return {
        "quotient_generating": quotient_gen,
        "quotient_irredundant": quotient_irr,
        "replacements_in_N": all(N.member(h) for h in res.replacements),
        "irredundant_generating": is_irredundant_generating(res.sequence, G),
    }


# ---------------------------------------------------------------------------
# direct-product refinement

@dataclass
class DirectProductRefinement:
    H: list
    T: list
    m_T: list
    m: int
    certificate: dict

    def to_json(self) -> dict:
        return {
            "H": [[p.cycle_decomposition() for p in h] for h in self.H],
            "T_orders": [t.order for t in self.T],
            "m_T": self.m_T,
            "certificate": self.certificate,
        }


def _restrict(g: tuple, pts: Sequence[int]) -> tuple:
    out = list(range(len(g)))
    for x in pts:
        out[x] = g[x]
    return tuple(out)


def direct_product_refine(S: Sequence[Permutation], factors: Sequence[Sequence[int]],
                          budget: SearchBudget | None = None) -> DirectProductRefinement:
    """Peel S factor by factor.

    ``factors`` are disjoint 0-based point sets covering the support of S.
    For factor i a minimal subset H_i of the current set keeps the same
    projection; every other element h is multiplied by some g in ⟨H_i⟩
    with the same projection inverted, which kills its i-th coordinate.
    """
    S = list(S)
    if not S:
        return DirectProductRefinement([[] for _ in factors], [], [], 0, {"m": 0, "sum_H": 0})
    n = S[0].degree
    seen = set()
    for pts in factors:
        if seen & set(pts):
            raise ValueError("factor point sets overlap")
        seen |= set(pts)
    for p in S:
        moved = set(p.support())
        if not moved <= seen:
            raise ValueError("an element moves points outside the declared factors")
        for pts in factors:
            if {p.images[x] for x in pts} != set(pts):
                raise ValueError("ambient is not a direct product of the declared factors")
    if not is_irredundant(S):
        raise ValueError("S is not irredundant")
    K = [p.images for p in S]
    Hs, Ts = [], []
    residuals_ok = True
    for pts in factors:
        proj = [_restrict(g, pts) for g in K]
        keep = list(range(len(K)))
        for j in range(len(K) - 1, -1, -1):
            others = [proj[i] for i in keep if i != j]
            if StabChain(n, others).contains(proj[j]):
                keep.remove(j)
        Hi = [K[i] for i in keep]
        Hs.append([Permutation._trusted(g) for g in Hi])
        Ts.append(GeneratedGroup([Permutation._trusted(proj[i]) for i in keep], n))
        rest = [K[i] for i in range(len(K)) if i not in keep]
        by_proj = {}
        if rest:
            for g in StabChain(n, Hi).elements():
                by_proj.setdefault(_restrict(g, pts), g)
        newK = []
        for h in rest:
            target = inv(_restrict(h, pts))
            g = by_proj.get(target)
            if g is None:
                raise AssertionError("projection not reached by ⟨H_i⟩")
            newK.append(mul(g, h))
        K = newK
        if K and not is_irredundant([Permutation._trusted(g) for g in K]):
            residuals_ok = False
    m_T = [m_search(t, budget).value for t in Ts]
    sum_H = sum(len(h) for h in Hs)
    cert = {
        "m": len(S),
        "sum_H": sum_H,
        "sum_m_T": sum(m_T),
        "identity_holds": sum_H == len(S) and not K,
        "inequality_holds": sum_H <= sum(m_T),
        "residuals_irredundant": residuals_ok,
    }
    return DirectProductRefinement(Hs, Ts, m_T, len(S), cert)
