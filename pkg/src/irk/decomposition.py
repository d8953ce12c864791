"""Ordered partitions, M-decompositions, and partition closures.

Points are 0-based inside :class:`OrderedPartition`; its string form is the
1-based grammar ``"0:|1:1,2,3|2:4,5"`` where block 0 is X_0 and may be empty.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .groups import GeneratedGroup, StabChain, normal_closure_gens
from .perm import Permutation, ident, inv, mul, raw_cycles


@dataclass(frozen=True)
class OrderedPartition:
    n: int
    X0: tuple
    blocks: tuple

    def __post_init__(self):
        X0 = tuple(sorted(self.X0))
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        object.__setattr__(self, "X0", X0)
        object.__setattr__(self, "blocks", blocks)
        if not blocks:
            raise ValueError("an ordered partition needs at least one block X_1")
        if any(len(b) == 0 for b in blocks):
            raise ValueError("blocks X_1..X_m must be nonempty")
        pts = list(X0) + [x for b in blocks for x in b]
        if sorted(pts) != list(range(self.n)):
            raise ValueError("blocks must be disjoint and cover 1..n")

    @property
    def m(self) -> int:
        return len(self.blocks)

    def d(self) -> int:
        return len(self.X0) + self.m

    def block_of(self) -> list[int]:
        """Block index per point: 0 for X_0, i for X_i."""
        out = [0] * self.n
        for i, b in enumerate(self.blocks, start=1):
            for x in b:
                out[x] = i
        return out

    def block_transpositions(self) -> list[tuple]:
        """Adjacent transpositions generating the product of S_{X_i}, i >= 1."""
        out = []
        for b in self.blocks:
            for a, c in zip(b, b[1:]):
                t = list(range(self.n))
                t[a], t[c] = c, a
                out.append(tuple(t))
        return out

    def product_group(self) -> GeneratedGroup:
        return GeneratedGroup([Permutation._trusted(t) for t in self.block_transpositions()], self.n)

    def product_order(self) -> int:
        out = 1
        for b in self.blocks:
            out *= math.factorial(len(b))
        return out

    def __str__(self) -> str:
        parts = ["0:" + ",".join(str(x + 1) for x in self.X0)]
        for i, b in enumerate(self.blocks, start=1):
            parts.append(f"{i}:" + ",".join(str(x + 1) for x in b))
        return "|".join(parts)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "OrderedPartition":
        cells: dict[int, list[int]] = {}
        for seg in text.split("|"):
            seg = seg.strip()
            if not seg:
                continue
            if ":" not in seg:
                raise ValueError(f"partition segment {seg!r} lacks 'index:'")
            key, body = seg.split(":", 1)
            idx = int(key)
            if idx in cells:
                raise ValueError(f"block {idx} given twice")
            cells[idx] = [int(t) - 1 for t in body.replace(" ", "").split(",") if t]
        m = max(cells) if cells else 0
        if sorted(k for k in cells if k > 0) != list(range(1, m + 1)):
            raise ValueError("blocks must be numbered 1..m without gaps")
        pts = [x for c in cells.values() for x in c]
        if n is None:
            n = max(pts) + 1 if pts else 0
        return cls(n, tuple(cells.get(0, [])), tuple(tuple(cells[i]) for i in range(1, m + 1)))

    @classmethod
    def two_block(cls, X: Sequence[int], Y: Sequence[int], n: int) -> "OrderedPartition":
        return cls(n, (), (tuple(X), tuple(Y)))


def d_of(P: OrderedPartition) -> int:
    return P.d()


def partition_less(P: OrderedPartition, Q: OrderedPartition) -> bool:
    """P < Q: Q moves one point of X_0 into a block, or merges X_i, X_{i+1}."""
    if P.n != Q.n:
        raise ValueError("partitions of different degree")
    if P.m == Q.m:
        moved = set(P.X0) - set(Q.X0)
        if len(moved) != 1 or set(Q.X0) != set(P.X0) - moved:
            return False
        (x,) = moved
        diff = [i for i in range(P.m) if P.blocks[i] != Q.blocks[i]]
        if len(diff) != 1:
            return False
        i = diff[0]
        return set(Q.blocks[i]) == set(P.blocks[i]) | {x}
    if Q.m == P.m - 1 and P.X0 == Q.X0:
        for i0 in range(P.m - 1):
            merged = P.blocks[:i0] + (tuple(sorted(P.blocks[i0] + P.blocks[i0 + 1])),) + P.blocks[i0 + 2:]
            if merged == Q.blocks:
                return True
    return False


def partition_successors(P: OrderedPartition) -> list[OrderedPartition]:
    """All Q with P < Q."""
    out = []
    for x in P.X0:
        rest = tuple(y for y in P.X0 if y != x)
        for i in range(P.m):
            blocks = P.blocks[:i] + (P.blocks[i] + (x,),) + P.blocks[i + 1:]
            out.append(OrderedPartition(P.n, rest, blocks))
    for i in range(P.m - 1):
        blocks = P.blocks[:i] + (P.blocks[i] + P.blocks[i + 1],) + P.blocks[i + 2:]
        out.append(OrderedPartition(P.n, P.X0, blocks))
    return out


# ---------------------------------------------------------------------------
# M-decomposition

@dataclass
class MDecomposition:
    alpha: Permutation
    beta0: Permutation
    betas: list
    Q: list  # list of sorted tuples of 1-based block indices

    @property
    def mu(self) -> list[int]:
        return sorted(j for y in self.Q for j in y)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha.cycle_decomposition(),
            "beta0": self.beta0.cycle_decomposition(),
            "betas": [b.cycle_decomposition() for b in self.betas],
            "Q": [list(y) for y in self.Q],
        }


def _cycle_perm(c: Sequence[int], n: int) -> tuple:
    img = list(range(n))
    for a, b in zip(c, list(c[1:]) + [c[0]]):
        img[a] = b
    return tuple(img)


def _product(perms: Sequence[tuple], n: int) -> tuple:
    out = ident(n)
    for p in perms:
        out = mul(out, p)
    return out


def _rotate_to(c: list[int], a: int) -> list[int]:
    i = c.index(a)
    return c[i:] + c[:i]


def m_decompose(h: Permutation, P: OrderedPartition) -> MDecomposition:
    """h = α·β_0·β_1⋯β_p.

    Cycles inside X_0 form β_0. Cycles that meet more than one cell are
    grouped with every cycle sharing one of their blocks X_j (j >= 1), and
    each group is fused into one cycle with
    (a, x_1..x_k)(b, y_1..y_l) = (a b)(a, x_1..x_k, b, y_1..y_l)
    for a, b in a common block; the transpositions go to α. The remaining
    cycles lie inside single blocks and go to α as they are.
    """
    n = P.n
    if h.degree != n:
        raise ValueError("degree mismatch")
    where = P.block_of()
    cycles = raw_cycles(h.images)
    beta0, inside, mixed = [], [], []
    for c in cycles:
        cells = {where[x] for x in c}
        if cells == {0}:
            beta0.append(c)
        elif len(cells) == 1:
            inside.append(c)
        else:
            mixed.append(c)
    nodes = mixed + inside
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for i, c in enumerate(nodes):
        for j in {where[x] for x in c} - {0}:
            if j in owner:
                a, b = find(owner[j]), find(i)
                if a != b:
                    parent[max(a, b)] = min(a, b)
            else:
                owner[j] = i
    groups: dict[int, list[int]] = {}
    for i in range(len(nodes)):
        groups.setdefault(find(i), []).append(i)
    alpha_parts: list[tuple] = []
    fused: list[tuple[list[int], list[tuple]]] = []
    for root, members in groups.items():
        if not any(i < len(mixed) for i in members):
            alpha_parts.extend(_cycle_perm(nodes[i], n) for i in members)
            continue
        pending = sorted((nodes[i] for i in members), key=min)
        cur = pending.pop(0)
        taus = []
        while pending:
            cur_blocks = {where[x] for x in cur} - {0}
            for k, c in enumerate(pending):
                shared = sorted(cur_blocks & ({where[x] for x in c} - {0}))
                if shared:
                    break
            else:
                raise AssertionError("class is not connected through blocks")
            c = pending.pop(k)
            j = shared[0]
            a = min(x for x in cur if where[x] == j)
            b = min(x for x in c if where[x] == j)
            cur = _rotate_to(cur, a) + _rotate_to(c, b)
            tau = list(range(n))
            tau[a], tau[b] = b, a
            taus.append(tuple(tau))
        fused.append((cur, taus))
    fused.sort(key=lambda ct: min(ct[0]))
    for _, taus in fused:
        alpha_parts.extend(taus)
    alpha = _product(alpha_parts, n)
    b0 = _product([_cycle_perm(c, n) for c in beta0], n)
    betas = [Permutation._trusted(_cycle_perm(_rotate_to(c, min(c)), n)) for c, _ in fused]
    Q = [tuple(sorted({where[x] for x in c} - {0})) for c, _ in fused]
    return MDecomposition(Permutation._trusted(alpha), Permutation._trusted(b0), betas, Q)


def check_m_decomposition(h: Permutation, P: OrderedPartition, dec: MDecomposition) -> dict:
    """Each invariant of the decomposition as a named boolean."""
    n = P.n
    where = P.block_of()
    a, b0 = dec.alpha.images, dec.beta0.images
    bs = [b.images for b in dec.betas]
    recon = _product([a, b0] + bs, n) == h.images

    def commute(x, y):
        return mul(x, y) == mul(y, x)

    alpha_ok = all(where[a[x]] == where[x] and (where[x] != 0 or a[x] == x) for x in range(n))
    beta0_ok = all(b0[x] == x or where[x] == 0 for x in range(n))
    comm = all(commute(b0, a) for _ in [0]) and all(commute(b0, b) for b in bs)
    comm = comm and all(commute(x, y) for x, y in itertools.combinations(bs, 2))
    single = True
    for b in bs:
        cyc = raw_cycles(b)
        if len(cyc) != 1 or len({where[x] for x in cyc[0]}) < 2:
            single = False
    moved = [x for x in range(n) if h.images[x] != x]
    block_ok = True
    for b, Y in zip(bs, dec.Q):
        supp = {x for x in range(n) if b[x] != x}
        for j in Y:
            if any(where[x] == j and x not in supp for x in moved):
                block_ok = False
        if set(Y) != {where[x] for x in supp} - {0}:
            block_ok = False
    flat = [j for y in dec.Q for j in y]
    q_ok = len(flat) == len(set(flat)) and all(1 <= j <= P.m for j in flat)
    return {
        "reconstruction": recon,
        "alpha_in_block_product": alpha_ok,
        "beta0_in_X0": beta0_ok,
        "commutation": comm,
        "betas_single_cross_cycles": single,
        "block_membership": block_ok,
        "associated_partition": q_ok,
    }


@dataclass
class StrongMDecomposition:
    alpha: Permutation
    beta: Permutation

    def to_json(self) -> dict:
        return {"alpha": self.alpha.cycle_decomposition(), "beta": self.beta.cycle_decomposition()}


def strong_m_decompose(h: Permutation, X: Sequence[int], Y: Sequence[int]) -> StrongMDecomposition:
    """h = α·β with α ∈ S_X × S_Y and β alternating between X and Y.

    Adjacent same-side points are peeled off with
    (x_1, x_2, t_1..t_k) = (x_1 x_2)(x_2, t_1..t_k).
    """
    n = h.degree
    P = OrderedPartition.two_block(X, Y, n)
    dec = m_decompose(h, P)
    alpha = dec.alpha.images
    if not dec.betas:
        return StrongMDecomposition(dec.alpha, Permutation.identity(n))
    side = P.block_of()
    c = raw_cycles(dec.betas[0].images)[0]
    while True:
        L = len(c)
        for i in range(L):
            if side[c[i]] == side[c[(i + 1) % L]]:
                break
        else:
            break
        c = c[i:] + c[:i]
        tau = list(range(n))
        tau[c[0]], tau[c[1]] = c[1], c[0]
        alpha = mul(alpha, tuple(tau))
        c = c[1:]
    c = _rotate_to(c, min(c))
    return StrongMDecomposition(Permutation._trusted(alpha), Permutation._trusted(_cycle_perm(c, n)))


# ---------------------------------------------------------------------------
# M-property and closures

def has_m_property(G: GeneratedGroup, P: OrderedPartition) -> bool:
    for s in P.block_transpositions():
        for g in G.generators:
            if not G.contains_raw(mul(mul(s, g.images), s)):
                return False
    return True


def m_closure(T: Sequence[Permutation], P: OrderedPartition) -> GeneratedGroup:
    """Smallest subgroup containing T with the M-property."""
    gens = normal_closure_gens([t.images for t in T], P.block_transpositions(), P.n)
    return GeneratedGroup([Permutation._trusted(g) for g in gens], P.n)


SP_ENUM_CAP = 10**6


def _intersection_order(I: GeneratedGroup, P: OrderedPartition) -> int:
    """|I ∩ ΠS_{X_i}|."""
    pi_gens = P.block_transpositions()
    pi_order = P.product_order()
    if all(I.contains_raw(t) for t in pi_gens):
        return pi_order
    even = [mul(a, b) for a, b in itertools.combinations(pi_gens, 2)] + \
           [mul(mul(a, b), a) for a, b in itertools.combinations(pi_gens, 2)]
    if pi_gens and all(I.contains_raw(e) for e in even):
        return pi_order // 2
    where = P.block_of()
    if I.order <= min(pi_order, SP_ENUM_CAP):
        return sum(1 for g in I.chain.elements()
                   if all(where[g[x]] == where[x] and (where[x] != 0 or g[x] == x) for x in range(P.n)))
    if pi_order <= SP_ENUM_CAP:
        return sum(1 for g in P.product_group().chain.elements() if I.contains_raw(g))
    raise ValueError("intersection too large to enumerate")


def has_sp_property(I: GeneratedGroup, P: OrderedPartition, max_degree: int = 10) -> bool:
    """For all transpositions s_t ∈ S_{X_t} and s ∈ ΠS_{X_t} some
    s·Πs_t^{ε_t} lies in I.

    With J = I ∩ ΠS_{X_t}, the s that work for a fixed ε form the coset
    J·e_ε, so the condition says the 2^m products e_ε meet every coset of J.
    """
    if P.n > max_degree:
        raise ValueError(f"degree {P.n} above SP exhaustion cap {max_degree}")
    n = P.n
    j_order = _intersection_order(I, P)
    index = P.product_order() // j_order
    blocks = [b for b in P.blocks if len(b) >= 2]
    if index > 2 ** len(blocks):
        return False
    if index == 1:
        return True
    choices = []
    for b in blocks:
        opts = []
        for a, c in itertools.combinations(b, 2):
            t = list(range(n))
            t[a], t[c] = c, a
            opts.append(tuple(t))
        choices.append(opts)
    for tup in itertools.product(*choices):
        reps: list[tuple] = []
        for eps in itertools.product((0, 1), repeat=len(tup)):
            e = ident(n)
            for t, on in zip(tup, eps):
                if on:
                    e = mul(e, t)
            if not any(I.contains_raw(mul(e, r)) for r in reps):
                reps.append(e)
        if len(reps) < index:
            return False
    return True


def has_k_property(G: GeneratedGroup, P: OrderedPartition, I: GeneratedGroup) -> bool:
    if not has_sp_property(I, P):
        raise ValueError("I lacks the SP-property")
    for x in I.generators:
        xi = inv(x.images)
        for g in G.generators:
            if not G.contains_raw(mul(mul(x.images, g.images), xi)):
                return False
    return True


def gikp_closure(I: GeneratedGroup, K: Sequence[Permutation], P: OrderedPartition,
                 check_sp: bool = True) -> GeneratedGroup:
    """⟨x k x^-1 : x ∈ I, k ∈ K⟩."""
    if check_sp and not has_sp_property(I, P):
        raise ValueError("I lacks the SP-property")
    gens = normal_closure_gens([k.images for k in K], [x.images for x in I.generators], P.n)
    return GeneratedGroup([Permutation._trusted(g) for g in gens], P.n)


# ---------------------------------------------------------------------------
# covers

@dataclass
class CoverReport:
    K: list
    mode: str
    bound_name: str | None
    bound_value: int | None
    hypotheses_met: bool
    verdict: str

    def to_json(self) -> dict:
        return {
            "K": [p.cycle_decomposition() for p in self.K],
            "size": len(self.K),
            "mode": self.mode,
            "bound": self.bound_name,
            "bound_value": None if self.bound_value is None else str(self.bound_value),
            "hypotheses_met": self.hypotheses_met,
            "verdict": self.verdict,
        }


def closure_cover(H: Sequence[Permutation], P: OrderedPartition, mode: str = "M",
                  I: GeneratedGroup | None = None) -> CoverReport:
    """Greedy K ⊆ H, in element order, whose closure contains H."""
    from .bounds import omega, psi

    if mode not in ("M", "K"):
        raise ValueError("mode must be 'M' or 'K'")
    if mode == "K":
        if I is None:
            raise ValueError("mode K needs I")
        if not has_sp_property(I, P):
            raise ValueError("I lacks the SP-property")

    def close(K):
        if mode == "M":
            return m_closure(K, P)
        return gikp_closure(I, K, P, check_sp=False)

    K: list[Permutation] = []
    C = close(K)
    for h in sorted(set(H)):
        if not C.member(h):
            K.append(h)
            C = close(K)
    sizes = [len(b) for b in P.blocks]
    if mode == "M" and not P.X0 and P.m == 2 and (P.n >= 10 or all(s < 4 for s in sizes) is False):
        name, value = "two_block", 9
        met = P.n >= 10
    elif mode == "M":
        name, value = "psi", psi(len(P.X0), P.m)
        met = all(s >= 4 for s in sizes)
    else:
        name, value = "omega", omega(len(P.X0), P.m)
        met = all(s >= 6 for s in sizes)
    if len(K) <= value:
        verdict = "verified" if met else "vacuous"
    else:
        verdict = "FALSIFIED" if met else "vacuous"
    return CoverReport(K, mode, name, value, met, verdict)


# ---------------------------------------------------------------------------
# pointwise-fixing reduction

@dataclass
class FixReduction:
    K: list
    g: dict  # h -> g_h
    bound: int

    def to_json(self) -> dict:
        return {
            "K": [p.cycle_decomposition() for p in self.K],
            "bound": self.bound,
            "g": [{"h": h.cycle_decomposition(), "g": g.cycle_decomposition()} for h, g in self.g.items()],
        }


def fix_pointwise_reduce(H: Sequence[Permutation], X: Sequence[int], I: GeneratedGroup,
                         P: OrderedPartition) -> FixReduction:
    """K ⊆ H and g_h in the closure of K under I with g_h·h fixing X.

    X is 0-based. Points of X are handled one at a time; images of the
    current point are grouped by block (each X_0 point alone), one member
    of H per group is kept, and the rest are corrected by conjugates of
    the kept element under an SP-supplied n ∈ I.
    """
    n = P.n
    where = P.block_of()
    Xs = sorted(set(X))
    if any(where[x] == 0 for x in Xs):
        raise ValueError("X must lie inside the blocks X_1..X_m")
    for b in P.blocks:
        if len(set(b) - set(Xs)) < 4:
            raise ValueError("every block needs at least 4 points outside X")
    if not has_sp_property(I, P):
        raise ValueError("I lacks the SP-property")
    H = list(dict.fromkeys(H))
    e = ident(n)
    g = {h: e for h in H}
    ell = {h: h.images for h in H}
    K: list[Permutation] = []
    outside = {i: [x for x in b if x not in set(Xs)] for i, b in enumerate(P.blocks, start=1)}
    for x in Xs:
        groups: dict = {}
        for h in H:
            s = ell[h][x]
            if s == x:
                continue
            key = ("b", where[s]) if where[s] else ("p", s)
            groups.setdefault(key, h)
        for rep in groups.values():
            if rep not in K:
                K.append(rep)
        # representatives as they stood before this point's corrections
        frozen = {key: ell[k] for key, k in groups.items()}
        for h in H:
            s = ell[h][x]
            if s == x:
                continue
            key = ("b", where[s]) if where[s] else ("p", s)
            lk = frozen[key]
            si = lk[x]
            if si == s:
                m_h = lk
            else:
                j = where[s]
                pair = list(range(n))
                pair[s], pair[si] = si, s
                trans = []
                for t, pts in outside.items():
                    avail = [y for y in pts if y not in (s, si)]
                    y, z = avail[0], avail[1]
                    tt = list(range(n))
                    tt[y], tt[z] = z, y
                    trans.append(tuple(tt))
                for eps in itertools.product((0, 1), repeat=len(trans)):
                    cand = tuple(pair)
                    for t, on in zip(trans, eps):
                        if on:
                            cand = mul(cand, t)
                    if I.contains_raw(cand):
                        nh = cand
                        break
                else:
                    raise AssertionError("SP-property did not supply a conjugator")
                m_h = mul(mul(nh, lk), inv(nh))
            mi = inv(m_h)
            ell[h] = mul(mi, ell[h])
            g[h] = mul(mi, g[h])
    bound = len(Xs) * (P.m + len(P.X0))
    return FixReduction(K, {h: Permutation._trusted(v) for h, v in g.items()}, bound)
