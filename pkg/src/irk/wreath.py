"""Imprimitive wreath products, subdirect products of S², Hall's
generation criterion, and explicit irredundant sets in S ≀ P.

Block b of S ≀ P occupies points b·|Γ| .. b·|Γ|+|Γ|-1 (0-based), where Γ is
the point set of the base group S.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .groups import DEGREE_CAP, GeneratedGroup, StabChain, is_two_transitive, normal_closure_gens
from .irredundance import can_replace, is_irredundant, is_irredundant_generating
from .perm import Permutation, ident, inv, mul

DIRECT_CHECK_CAP = 10**6
SIMPLE_CHECK_CAP = 10**5


def _embed(g: tuple, block: int, gamma: int, nblocks: int) -> tuple:
    """Base element g acting on one block, identity elsewhere."""
    n = gamma * nblocks
    img = list(range(n))
    off = block * gamma
    for p in range(gamma):
        img[off + p] = off + g[p]
    return tuple(img)


def _embed_vector(vec: Sequence[tuple], gamma: int) -> tuple:
    """(g_1, .., g_k) acting blockwise."""
    img = []
    for b, g in enumerate(vec):
        off = b * gamma
        img.extend(off + g[p] for p in range(gamma))
    return tuple(img)


def _top(pi: tuple, gamma: int) -> tuple:
    """Pure block permutation: point b·|Γ|+p goes to π(b)·|Γ|+p."""
    return tuple(pi[b] * gamma + p for b in range(len(pi)) for p in range(gamma))


def build_wreath(S: GeneratedGroup, P: GeneratedGroup, check_order: bool = True) -> GeneratedGroup:
    gamma, nb = S.degree, P.degree
    n = gamma * nb
    if n > DEGREE_CAP:
        raise ValueError(f"degree {n} exceeds cap {DEGREE_CAP}")
    gens = []
    for orb in P.orbits():
        b = orb[0]
        gens += [_embed(g.images, b, gamma, nb) for g in S.generators]
    gens += [_top(p.images, gamma) for p in P.generators]
    W = GeneratedGroup([Permutation._trusted(g) for g in gens], n,
                       name=f"{S.name or 'S'} wr {P.name or 'P'}")
    if check_order and W.order != S.order ** nb * P.order:
        raise AssertionError("wreath product has the wrong order")
    return W


# ---------------------------------------------------------------------------
# simplicity

def is_nonabelian_simple(S: GeneratedGroup, cap: int = SIMPLE_CHECK_CAP) -> bool:
    """Every nontrivial conjugacy class has normal closure S."""
    gens = [g.images for g in S.generators]
    if all(mul(a, b) == mul(b, a) for a, b in itertools.combinations(gens, 2)):
        return False
    if S.order > cap:
        raise ValueError(f"|S| = {S.order} above simplicity check cap {cap}")
    n = S.degree
    seen: set = set()
    e = ident(n)
    full = S.order
    for g in S.raw_elements():
        if g == e or g in seen:
            continue
        cls = {g}
        stack = [g]
        while stack:
            x = stack.pop()
            for c in gens:
                y = mul(mul(c, x), inv(c))
                if y not in cls:
                    cls.add(y)
                    stack.append(y)
        seen |= cls
        if StabChain(n, normal_closure_gens([g], gens, n)).order() != full:
            return False
    return True


# ---------------------------------------------------------------------------
# Goursat for S × S

@dataclass
class GoursatResult:
    kind: str  # "full" | "graph_of_automorphism" | "not_subdirect" | "other"
    order: int
    phi: dict | None = None
    homomorphism_checked: bool = False

    def to_json(self) -> dict:
        out = {"kind": self.kind, "order": self.order}
        if self.phi is not None:
            out["phi"] = [
                {"s": Permutation._trusted(a).cycle_decomposition(),
                 "phi_s": Permutation._trusted(b).cycle_decomposition()}
                for a, b in sorted(self.phi.items())
            ]
            out["homomorphism_checked"] = self.homomorphism_checked
        return out


def goursat_classify(K: GeneratedGroup, S: GeneratedGroup) -> GoursatResult:
    """K inside S × S acting on two disjoint copies of S's points."""
    gamma = S.degree
    if K.degree != 2 * gamma:
        raise ValueError("K must act on two copies of S's points")
    if S.order > 10**4:
        raise ValueError("|S| above 10^4")
    p1 = [g.images[:gamma] for g in K.generators]
    p2 = [tuple(x - gamma for x in g.images[gamma:]) for g in K.generators]
    for g in K.generators:
        if any(g.images[p] >= gamma for p in range(gamma)):
            raise ValueError("K does not preserve the two copies")
    if not all(S.contains_raw(x) for x in p1 + p2):
        raise ValueError("projections leave S")
    o1 = StabChain(gamma, p1).order()
    o2 = StabChain(gamma, p2).order()
    if o1 != S.order or o2 != S.order:
        return GoursatResult("not_subdirect", K.order)
    if K.order == S.order ** 2:
        return GoursatResult("full", K.order)
    if K.order != S.order:
        return GoursatResult("other", K.order)
    phi = {}
    for k in K.raw_elements():
        a = k[:gamma]
        b = tuple(x - gamma for x in k[gamma:])
        phi[a] = b
    if len(phi) != S.order or len(set(phi.values())) != S.order:
        raise AssertionError("extracted map is not a bijection")
    keys = list(phi)
    pairs = itertools.product(keys, keys) if len(keys) ** 2 <= DIRECT_CHECK_CAP else \
        itertools.product([g.images for g in S.generators], keys)
    for a, b in pairs:
        if phi[mul(a, b)] != mul(phi[a], phi[b]):
            raise AssertionError("extracted map is not a homomorphism")
    return GoursatResult("graph_of_automorphism", K.order, phi, True)


def graph_subgroup(S: GeneratedGroup, conj: Permutation | None = None) -> GeneratedGroup:
    """{(s, c s c^-1)} inside S × S on 2|Γ| points."""
    gamma = S.degree
    c = conj.images if conj is not None else ident(gamma)
    ci = inv(c)
    gens = [_embed_vector([g.images, mul(mul(c, g.images), ci)], gamma) for g in S.generators]
    return GeneratedGroup([Permutation._trusted(g) for g in gens], 2 * gamma)


# ---------------------------------------------------------------------------
# Hall's criterion

@dataclass
class HallResult:
    generates: bool
    reason: str
    direct: bool | None

    def to_json(self) -> dict:
        return {"generates": self.generates, "reason": self.reason, "direct": self.direct,
                "agree": None if self.direct is None else self.direct == self.generates}


def hall_generates(vectors: Sequence[Sequence[Permutation]], S: GeneratedGroup,
                   automorphisms: Sequence[Permutation] | None = None,
                   cross_check: bool = True) -> HallResult:
    """Do x_1..x_k ∈ S^n generate S^n?

    ``vectors[t][i]`` is coordinate i of x_t. Coordinate i contributes the
    tuple (x_1[i], .., x_k[i]). Automorphisms are given as permutations
    acting by conjugation; the default is S's own generators (inner).
    """
    if not vectors:
        raise ValueError("need at least one vector")
    ncoord = len(vectors[0])
    if any(len(v) != ncoord for v in vectors):
        raise ValueError("vectors of different lengths")
    gamma = S.degree
    tuples = [tuple(v[i].images for v in vectors) for i in range(ncoord)]
    auts = [a.images for a in (automorphisms if automorphisms is not None else S.generators)]
    verdict, reason = True, "criterion holds"
    for i, tup in enumerate(tuples):
        if StabChain(gamma, list(tup)).order() != S.order or not all(S.contains_raw(x) for x in tup):
            verdict, reason = False, f"coordinate {i + 1} does not generate S"
            break
    if verdict:
        conj_group = StabChain(gamma, auts).elements() if auts else iter([ident(gamma)])
        conj = list(conj_group)
        for i, j in itertools.combinations(range(ncoord), 2):
            a, b = tuples[i], tuples[j]
            for c in conj:
                ci = inv(c)
                if all(mul(mul(c, x), ci) == y for x, y in zip(a, b)):
                    verdict, reason = False, f"an automorphism maps coordinate {i + 1} onto {j + 1}"
                    break
            if not verdict:
                break
    direct = None
    if cross_check and S.order ** ncoord <= DIRECT_CHECK_CAP:
        gens = [_embed_vector([x.images for x in v], gamma) for v in vectors]
        direct = StabChain(gamma * ncoord, gens).order() == S.order ** ncoord
    return HallResult(verdict, reason, direct)


# ---------------------------------------------------------------------------
# witnesses

@dataclass
class WitnessResult:
    elements: list
    group: GeneratedGroup | None
    irredundant: bool
    generating: bool | None

    def to_json(self) -> dict:
        return {
            "size": len(self.elements),
            "degree": self.elements[0].degree if self.elements else 0,
            "irredundant": self.irredundant,
            "generating": self.generating,
            "elements": [p.cycle_decomposition() for p in self.elements],
        }


def _check_witness_hypotheses(S: GeneratedGroup, P: GeneratedGroup) -> None:
    if P.degree == 2 and P.order == 2:
        raise ValueError("P must not be Z_2")
    if not is_two_transitive(P):
        raise ValueError("P is not 2-transitive")
    if not is_nonabelian_simple(S):
        raise ValueError("S is not a non-abelian simple group")


def m_witness(S_set: Sequence[Permutation], P_set: Sequence[Permutation], n: int,
                  S: GeneratedGroup | None = None, verify: bool = True) -> WitnessResult:
    """{s_i on block 1} ∪ {pure block permutations p_j}, size |S_set| + |P_set|."""
    gamma = S_set[0].degree
    S = S or GeneratedGroup(list(S_set), gamma)
    P = GeneratedGroup(list(P_set), n)
    _check_witness_hypotheses(S, P)
    if not is_irredundant_generating(list(S_set), S):
        raise ValueError("S_set is not an irredundant generating set of S")
    if not is_irredundant_generating(list(P_set), P):
        raise ValueError("P_set is not an irredundant generating set of P")
    raw = [_embed(s.images, 0, gamma, n) for s in S_set] + [_top(p.images, gamma) for p in P_set]
    elems = [Permutation._trusted(g) for g in raw]
    W = build_wreath(S, P)
    if not verify:
        return WitnessResult(elems, W, False, None)
    return WitnessResult(elems, W, is_irredundant(elems), StabChain(W.degree, raw).order() == W.order)


def nonreplacement_witness(T: Sequence[Permutation], t: Permutation, P_set: Sequence[Permutation],
                                 n: int, S: GeneratedGroup | None = None, verify: bool = True) -> WitnessResult:
    """{(t_i, .., t_i)} ∪ {(t, 1, .., 1)} ∪ {p_j}, size |T| + 1 + |P_set|."""
    gamma = T[0].degree
    S = S or GeneratedGroup(list(T), gamma)
    P = GeneratedGroup(list(P_set), n)
    _check_witness_hypotheses(S, P)
    if not is_irredundant_generating(list(T), S):
        raise ValueError("T is not an irredundant generating set of S")
    if t.is_identity() or not S.member(t):
        raise ValueError("t must be a non-identity element of S")
    if can_replace(list(T), t, S):
        raise ValueError("t can replace a member of T; no non-replacement pair")
    raw = [_embed_vector([x.images] * n, gamma) for x in T]
    raw.append(_embed(t.images, 0, gamma, n))
    raw += [_top(p.images, gamma) for p in P_set]
    elems = [Permutation._trusted(g) for g in raw]
    W = build_wreath(S, P)
    if not verify:
        return WitnessResult(elems, W, False, None)
    return WitnessResult(elems, W, is_irredundant(elems), StabChain(W.degree, raw).order() == W.order)


def i_witness(S_set: Sequence[Permutation], n: int, verify: bool = True) -> WitnessResult:
    """(1, .., s_i, .., 1) for every block and every s_i: |S_set|·n elements."""
    gamma = S_set[0].degree
    if gamma * n > DEGREE_CAP:
        raise ValueError(f"degree {gamma * n} exceeds cap {DEGREE_CAP}")
    raw = [_embed(s.images, b, gamma, n) for b in range(n) for s in S_set]
    elems = [Permutation._trusted(g) for g in raw]
    if not verify:
        return WitnessResult(elems, None, False, None)
    return WitnessResult(elems, None, is_irredundant(elems), None)
