"""Element tables and subgroup lattices for small groups.

A :class:`GroupTable` indexes the elements of a group of order at most
``order_cap`` in the global element order (lexicographic on 0-based image
tuples, so the identity has index 0). Subgroups are bitmasks over those
indices, which makes equality, containment and hashing cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .groups import GeneratedGroup, StabChain, big_omega
from .perm import Permutation, inv, mul

ORDER_CAP = 10**4


class CapExceeded(ValueError):
    pass


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass
class SubgroupClass:
    """A conjugacy class of subgroups, stored with every member."""

    rep: int
    gens: tuple
    order: int
    members: list = field(default_factory=list)


class GroupTable:
    def __init__(self, G: GeneratedGroup, order_cap: int = ORDER_CAP):
        if G.order > order_cap:
            raise CapExceeded(f"|G| = {G.order} exceeds order cap {order_cap}")
        self.group = G
        self.n = G.degree
        self.elements: list[tuple] = G.raw_elements()
        self.size = len(self.elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.inverse = [self.index[inv(e)] for e in self.elements]
        self.full = (1 << self.size) - 1
        self.gen_idx = tuple(sorted({self.index[p.images] for p in G.generators} - {0}))
        self._cols: dict[int, list[int]] = {}
        self._gens: dict[int, tuple] = {1: ()}
        self._join: dict[tuple, int] = {}
        self._conj: dict[int, list[int]] = {}
        self._classes: list[SubgroupClass] | None = None
        self._gens[self.full] = self.gen_idx

    # -- element arithmetic on indices
    def col(self, g: int) -> list[int]:
        """Right multiplication by element g: i -> index(e_i ∘ e_g)."""
        c = self._cols.get(g)
        if c is None:
            eg = self.elements[g]
            idx = self.index
            c = [idx[mul(e, eg)] for e in self.elements]
            self._cols[g] = c
        return c

    def mul(self, a: int, b: int) -> int:
        return self.col(b)[a]

    def conj_map(self, g: int) -> list[int]:
        """i -> index(e_g e_i e_g^-1)."""
        c = self._conj.get(g)
        if c is None:
            eg = self.elements[g]
            egi = self.elements[self.inverse[g]]
            idx = self.index
            c = [idx[mul(mul(eg, e), egi)] for e in self.elements]
            self._conj[g] = c
        return c

    def perm(self, i: int) -> Permutation:
        return Permutation._trusted(self.elements[i])

    def idx_of(self, p: Permutation) -> int:
        return self.index[p.images]

    # -- subgroups as masks
    def closure(self, gens: Sequence[int]) -> int:
        gens = [g for g in dict.fromkeys(gens) if g != 0]
        mask = self._extend(1, (), gens)
        return mask

    def _extend(self, hmask: int, hgens: tuple, new: Sequence[int]) -> int:
        """Mask of ⟨H, new⟩ where H (mask, generators) is already a group."""
        gens = list(hgens) + [g for g in new if not (hmask >> g) & 1]
        if len(gens) == len(hgens):
            return hmask
        cols = [self.col(g) for g in gens]
        newcols = [self.col(g) for g in gens[len(hgens):]]
        mask = hmask
        grown = []
        for i in iter_bits(hmask):
            for c in newcols:
                y = c[i]
                if not (mask >> y) & 1:
                    mask |= 1 << y
                    grown.append(y)
        k = 0
        while k < len(grown):
            i = grown[k]
            k += 1
            for c in cols:
                y = c[i]
                if not (mask >> y) & 1:
                    mask |= 1 << y
                    grown.append(y)
        if mask not in self._gens:
            self._gens[mask] = tuple(gens)
        return mask

    def gens_of(self, mask: int) -> tuple:
        return self._gens[mask]

    def subgroup(self, gens: Sequence[int]) -> int:
        mask = self.closure(gens)
        return mask

    def join(self, hmask: int, x: int) -> int:
        """Mask of ⟨H, x⟩, memoized."""
        if (hmask >> x) & 1:
            return hmask
        key = (hmask, x)
        out = self._join.get(key)
        if out is None:
            if len(self._join) > 2_000_000:
                self._join.clear()
            out = self._extend(hmask, self._gens[hmask], [x])
            self._join[key] = out
        return out

    def order_of(self, mask: int) -> int:
        return mask.bit_count()

    def to_group(self, mask: int) -> GeneratedGroup:
        gens = [self.perm(i) for i in self._gens.get(mask) or self._small_gens(mask)]
        return GeneratedGroup(gens, self.n)

    def _small_gens(self, mask: int) -> tuple:
        h, gens = 1, []
        for i in iter_bits(mask):
            if not (h >> i) & 1:
                h = self._extend(h, tuple(gens), [i])
                gens.append(i)
        self._gens[mask] = tuple(gens)
        return tuple(gens)

    def mask_of(self, H: GeneratedGroup) -> int:
        return self.closure([self.index[g.images] for g in H.generators])

    def conjugate_mask(self, mask: int, g: int) -> int:
        c = self.conj_map(g)
        out = 0
        for i in iter_bits(mask):
            out |= 1 << c[i]
        return out

    def element_classes(self, within: int | None = None) -> list[int]:
        """Class id per element under conjugation by the subgroup ``within``.

        Ids follow the index of the class minimum; elements outside get -1.
        """
        within = self.full if within is None else within
        gens = self._gens.get(within) or self._small_gens(within)
        maps = [self.conj_map(g) for g in gens]
        cid = [-1] * self.size
        for i in iter_bits(within):
            if cid[i] >= 0:
                continue
            cid[i] = i
            stack = [i]
            while stack:
                x = stack.pop()
                for c in maps:
                    y = c[x]
                    if cid[y] < 0:
                        cid[y] = i
                        stack.append(y)
        return cid

    # -- lattice
    def cyclic_subgroups(self) -> list[tuple[int, int]]:
        """(mask, generator) for each cyclic subgroup, generator = min index."""
        seen = {}
        for x in range(1, self.size):
            m = self.closure([x])
            if m not in seen:
                seen[m] = x
        return [(m, x) for m, x in seen.items()]

    def subgroup_classes(self) -> list[SubgroupClass]:
        """All conjugacy classes of subgroups by extension with cyclic subgroups.

        Every non-cyclic subgroup K is ⟨L, x⟩ for a proper subgroup L, and a
        conjugate of L is a class representative, so extending each
        representative by every cyclic subgroup reaches every class.
        """
        if self._classes is not None:
            return self._classes
        cyc = self.cyclic_subgroups()
        gmaps = [self.conj_map(g) for g in self.gen_idx]
        seen: dict[int, int] = {}
        classes: list[SubgroupClass] = []

        def register(mask: int, gens: tuple) -> None:
            members = [mask]
            seen[mask] = len(classes)
            k = 0
            while k < len(members):
                m = members[k]
                k += 1
                for c in gmaps:
                    out = 0
                    for i in iter_bits(m):
                        out |= 1 << c[i]
                    if out not in seen:
                        seen[out] = len(classes)
                        members.append(out)
            classes.append(SubgroupClass(mask, gens, mask.bit_count(), sorted(members)))

        register(1, ())
        k = 0
        while k < len(classes):
            H = classes[k]
            k += 1
            for cmask, x in cyc:
                if cmask & H.rep == cmask:
                    continue
                K = self._extend(H.rep, H.gens, [x])
                if K not in seen:
                    register(K, self._gens.get(K, H.gens + (x,)))
        classes.sort(key=lambda c: (c.order, c.rep))
        self.class_of = {m: i for i, cl in enumerate(classes) for m in cl.members}
        self._classes = classes
        return classes

    def all_subgroups(self) -> list[int]:
        out = []
        for cl in self.subgroup_classes():
            out.extend(cl.members)
        return sorted(out, key=lambda m: (m.bit_count(), m))


def enumerate_subgroups(G: GeneratedGroup, order_cap: int = ORDER_CAP) -> list[GeneratedGroup]:
    """Every subgroup of G (up to equality), each with generators."""
    T = GroupTable(G, order_cap)
    return [T.to_group(m) for m in T.all_subgroups()]


def lambda_of_mask(mask: int) -> int:
    return big_omega(mask.bit_count())
