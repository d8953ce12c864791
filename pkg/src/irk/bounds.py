"""Exact bound functions, the ι membership predicate, the length n−k
construction containing a given element, and bound audits.

All values are Python ints or :class:`fractions.Fraction`; nothing is
rounded through floats.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .perm import Permutation


class Infeasible(ValueError):
    """The maximisation range of a bound recursion is empty or too large."""


class TooLarge(Infeasible):
    """A maximisation range exceeds ``F_RANGE_CAP``; the value is not computed."""


F_RANGE_CAP = 10**6


_lock = threading.Lock()
_f_memo: dict[tuple[int, Fraction], int] = {}


def f(k: int, q) -> int:
    """f(1, q) = floor(1/q); f(k, q) = max over integers 1/q < t <= k/q of t·f(k-1, q - 1/t)."""
    q = Fraction(q)
    if k < 1 or q <= 0:
        raise ValueError("f needs k >= 1 and q > 0")
    key = (k, q)
    with _lock:
        if key in _f_memo:
            return _f_memo[key]
    if k == 1:
        val = math.floor(1 / q)
    else:
        lo = math.floor(1 / q) + 1
        hi = math.floor(k / q)
        if hi - lo + 1 > F_RANGE_CAP:
            raise TooLarge(f"f({k}, {q}): range of {hi - lo + 1} values of t exceeds {F_RANGE_CAP}")
        best = None
        for t in range(lo, hi + 1):
            r = q - Fraction(1, t)
            try:
                v = t * f(k - 1, r)
            except TooLarge:
                raise
            except Infeasible:
                continue
            if best is None or v > best:
                best = v
        if best is None:
            raise Infeasible(f"f({k}, {q}): no integer t in (1/q, k/q]")
        val = best
    with _lock:
        _f_memo[key] = val
    return val


def f1(u: int, k: int) -> int:
    """f1(u, k) = k!·Σ_{t=0..k} f(u+t, 1)."""
    if u < 1 or k < 0:
        raise ValueError("f1 needs u >= 1 and k >= 0")
    return math.factorial(k) * sum(f(u + t, 1) for t in range(k + 1))


@lru_cache(maxsize=None)
def _g_sum(j: int, k: int) -> int:
    """Σ over set partitions Q of a j-set of Π f1(|Y|, k).

    Fixing the block of the last element: choose its s-1 companions.
    """
    if j == 0:
        return 1
    return sum(math.comb(j - 1, s - 1) * f1(s, k) * _g_sum(j - s, k) for s in range(1, j + 1))


def g(k: int, mu) -> int:
    """g(k, μ) = k!·Σ_Q Π f1(|Y_i|, k); depends only on |μ|. g(k, ∅) = k!."""
    size = mu if isinstance(mu, int) else len(set(mu))
    return math.factorial(k) * _g_sum(size, k)


def g1(k: int, l: int) -> int:
    """max over μ ⊆ {1..l} (including ∅) of g(k, μ)."""
    return max(g(k, j) for j in range(l + 1))


def phi(k: int, l: int) -> int:
    return (2 * l + 1) * g1(k, l)


def psi(k: int, l: int) -> int:
    return phi(k, l) + k + l


def omega(k: int, l: int) -> int:
    return psi(k, l) + 2 * l * (k + l)


PSI_EVAL_CAP = 12  # largest x for which ω(x, 3) is evaluated


def Psi(k: int, n0: int = 25) -> int:
    """Ψ(1) = 1; Ψ(k) = max{2Ψ(k-1)(k-1), (k + max_{x<=Ψ(k-1), y<=3} ω(x, y))(k-1), n0, k²}.

    Raises :class:`Infeasible` when the inner maximisation needs ω at
    arguments beyond ``PSI_EVAL_CAP``; :func:`Psi_lower_bound` still applies.
    """
    if k < 1 or k > 7:
        raise ValueError("Ψ is defined for 1 <= k <= 7")
    if k == 1:
        return 1
    prev = Psi(k - 1, n0)
    if prev > PSI_EVAL_CAP:
        raise Infeasible(f"Ψ({k}) needs ω(x, y) for x up to {prev}")
    inner = max(omega(x, y) for x in range(prev + 1) for y in range(4))
    return max(2 * prev * (k - 1), (k + inner) * (k - 1), n0, k * k)


def Psi_lower_bound(k: int, n0: int = 25) -> int:
    """A cheap lower bound: Ψ(k) >= max(n0, k²) for k >= 2."""
    if k == 1:
        return 1
    try:
        return Psi(k, n0)
    except Infeasible:
        return max(n0, k * k, 2 * Psi_lower_bound(k - 1, n0) * (k - 1))


# ---------------------------------------------------------------------------
# ι_{n-k}(S_n)

def iota_member(x: Permutation, k: int) -> bool:
    """d(x) <= k, or x even with d(x) = k+1 and k odd."""
    if not 1 <= k <= 5:
        raise ValueError("k must lie in 1..5")
    d = x.displacement()
    return d <= k or (d == k + 1 and k % 2 == 1 and x.is_even())


@dataclass
class DisplacementSet:
    elements: list
    relabel: Permutation  # maps original points to the construction's labels
    variant: str
    verified: bool

    def to_json(self) -> dict:
        return {
            "elements": [p.cycle_decomposition() for p in self.elements],
            "size": len(self.elements),
            "relabel": self.relabel.cycle_decomposition(),
            "variant": self.variant,
            "verified": self.verified,
        }


def _adjacent(a: int, b: int, n: int) -> tuple:
    img = list(range(n))
    img[a], img[b] = b, a
    return tuple(img)


def displacement_construct(x: Permutation, k: int, n: int | None = None,
                      relaxed: bool = False, verify: bool = True) -> DisplacementSet:
    """An irredundant generating set of S_n of length n−k containing x.

    Points are relabelled so the nontrivial cycles of x, longest first,
    occupy 1..d_{m+1} consecutively. With l = n−k+d(x)−1 the set is
    x, the bridges (d_{i+1}, d_{i+1}+1), the run (t, t+1) for
    d_{m+1} <= t < l, and the cycle (l, .., n). For even x with
    d(x) = k+1 and k odd every transposition τ after (1 2) is replaced by
    (1 2)·τ and the run extends to n.

    ``relaxed`` drops the n >= 3k+3 requirement; the result is verified
    either way.
    """
    from .builtins import symmetric
    from .irredundance import is_irredundant_generating

    n = x.degree if n is None else n
    if x.degree != n:
        raise ValueError("degree mismatch")
    if not 1 <= k:
        raise ValueError("k must be positive")
    if not relaxed and n < 3 * k + 3:
        raise ValueError(f"n = {n} < 3k+3 = {3 * k + 3}")
    d = x.displacement()
    if d == 0:
        raise ValueError("the identity lies in no irredundant generating set")
    even_case = d == k + 1 and k % 2 == 1 and x.is_even()
    if d > k and not even_case:
        raise ValueError("x is not admissible: need d(x) <= k, or x even with d(x) = k+1, k odd")
    cyc = sorted(x.cycles(), key=lambda c: (-len(c), c))
    order = [p for c in cyc for p in c]
    order += [p for p in range(n) if p not in set(order)]
    relabel = [0] * n
    for new, old in enumerate(order):
        relabel[old] = new
    relabel = tuple(relabel)
    xr = [0] * n
    for p in range(n):
        xr[relabel[p]] = relabel[x.images[p]]
    xr = tuple(xr)
    bounds = [0]
    for c in cyc:
        bounds.append(bounds[-1] + len(c))
    m = len(cyc)
    dm1 = bounds[-1]
    bridges = [_adjacent(bounds[i] - 1, bounds[i], n) for i in range(1, m)]
    elems: list[tuple] = [xr]
    if not even_case:
        l = n - k + d - 1  # 1-based
        if dm1 > l:
            raise ValueError("no room for the run of adjacent transpositions")
        run = [_adjacent(t - 1, t, n) for t in range(dm1, l)]
        tail = list(range(n))
        pts = list(range(l - 1, n))
        for a, b in zip(pts, pts[1:] + pts[:1]):
            tail[a] = b
        elems += bridges + run + [tuple(tail)]
        variant = "displacement<=k"
    else:
        s = _adjacent(0, 1, n)
        run = [_adjacent(t - 1, t, n) for t in range(dm1, n)]
        from .perm import mul
        elems += [s] + [mul(s, t) for t in bridges + run]
        variant = "even"
    inv_rel = [0] * n
    for old, new in enumerate(relabel):
        inv_rel[new] = old
    out = []
    for e in elems:
        img = [0] * n
        for p in range(n):
            img[inv_rel[p]] = inv_rel[e[p]]
        out.append(Permutation._trusted(tuple(img)))
    if len(out) != n - k:
        raise AssertionError(f"constructed {len(out)} elements, expected {n - k}")
    ok = is_irredundant_generating(out, symmetric(n)) if verify else False
    return DisplacementSet(out, Permutation._trusted(relabel), variant, ok)


# ---------------------------------------------------------------------------
# audits

@dataclass
class BoundAuditReport:
    claim: str
    hypotheses_met: bool
    observed: object
    bound: object
    verdict: str
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "hypotheses_met": self.hypotheses_met,
            "observed": self.observed,
            "bound": self.bound if not isinstance(self.bound, int) else str(self.bound),
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _verdict(met: bool, holds: bool) -> str:
    if holds:
        return "verified" if met else "vacuous"
    return "FALSIFIED" if met else "vacuous"


def _m_value(H, budget):
    from .irredundance import m_search

    res = m_search(H, budget=budget)
    return res.value, res.exact


def audit_block_kernel(H, block_size: int, budget=None) -> BoundAuditReport:
    """H inside S_Γ ≀ S_Δ with blocks {0..b-1}, {b..2b-1}, ...; the block
    kernel must act as S or A on the first block."""
    from .groups import GeneratedGroup

    n = H.degree
    if block_size < 2 or n % block_size:
        raise ValueError("block size must divide the degree")
    nb = n // block_size
    blk = [p // block_size for p in range(n)]
    for g in H.generators:
        for p in range(n):
            for q in range(n):
                if blk[p] == blk[q] and blk[g.images[p]] != blk[g.images[q]]:
                    raise ValueError("H does not preserve the block system")
    kernel = [e for e in H.raw_elements() if all(blk[e[p]] == blk[p] for p in range(n))]
    first = {tuple(e[:block_size]) for e in kernel}
    full = math.factorial(block_size)
    acts = len(first) in (full, full // 2 if block_size >= 2 else full)
    if block_size == 2:
        acts = len(first) == 2
    value, exact = _m_value(H, budget)
    bound = block_size + 2 * nb - 3
    notes = [f"kernel image on first block has order {len(first)}"]
    if not exact:
        notes.append("m search inexact; observed value is a lower bound")
    return BoundAuditReport("block-kernel", acts, value, bound, _verdict(acts, value <= bound), notes)


def audit_pair_blocks(H, k: int, n0: int = 25, budget=None) -> BoundAuditReport:
    """H <= S_2 ≀ S_|Δ| on 2|Δ| points with blocks {0,1}, {2,3}, ..."""
    n = H.degree
    if n % 2:
        raise ValueError("degree must be even")
    delta = n // 2
    value, exact = _m_value(H, budget)
    met = delta >= max(n0, k + 1)
    bound = 2 * delta - k
    notes = ["premise on subgroups of S_n for n >= n0 is not checkable at this scale"]
    return BoundAuditReport("pair-blocks", met, value, bound, _verdict(met, value <= bound), notes)


def audit_transitive(H, budget=None) -> BoundAuditReport:
    from .builtins import alternating

    n = H.degree
    A = alternating(n)
    inside_an = all(A.member(g) for g in H.generators)
    met = (n >= 9) if inside_an and H.order < A.order else n >= 25
    notes = []
    if not H.is_transitive() and not inside_an:
        notes.append("H is intransitive; claim premise fails")
        met = False
    value, exact = _m_value(H, budget)
    bound = n - 4
    return BoundAuditReport("transitive", met, value, bound, _verdict(met, value <= bound), notes)


def audit_displacement(elements: Sequence[Permutation], k: int, n0: int = 25) -> BoundAuditReport:
    """For an irredundant generating set of S_n of length n−k: d(h) <= k+1,
    and d(h) = k+1 forces h even."""
    from .builtins import symmetric
    from .irredundance import is_irredundant_generating

    n = elements[0].degree
    if len(elements) != n - k:
        raise ValueError(f"set has length {len(elements)}, expected n-k = {n - k}")
    if not is_irredundant_generating(list(elements), symmetric(n)):
        raise ValueError("set is not an irredundant generating set of S_n")
    need = Psi_lower_bound(k + 2, n0)
    met = n >= need
    ds = [h.displacement() for h in elements]
    holds = all(dv <= k + 1 and (dv < k + 1 or h.is_even()) for dv, h in zip(ds, elements))
    notes = [f"Ψ({k + 2}) >= {need}"]
    return BoundAuditReport("displacement", met, ds, k + 1, _verdict(met, holds), notes)


def bound_audit(claim: str, target, **params) -> BoundAuditReport:
    claim = claim.lower()
    if claim == "block-kernel":
        return audit_block_kernel(target, params["block_size"], params.get("budget"))
    if claim == "pair-blocks":
        return audit_pair_blocks(target, params.get("k", 1), params.get("n0", 25), params.get("budget"))
    if claim == "transitive":
        return audit_transitive(target, params.get("budget"))
    if claim == "displacement":
        return audit_displacement(target, params["k"], params.get("n0", 25))
    raise ValueError(f"unknown claim {claim!r}")
