import itertools
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from irk import bounds
from irk.builtins import symmetric
from irk.groups import generate
from irk.irredundance import is_irredundant_generating
from irk.perm import Permutation

from conftest import P, closure


# ---------------------------------------------------------------------------
# independent oracles

def oracle_f(k, q):
    """max Π d_i over nondecreasing positive integers with Σ 1/d_i = q.

    Each d_i is bounded by (terms left)/(rest), so the search is finite and
    exact without any cap on the d_i.
    """
    q = Fraction(q)
    best = 0

    def rec(i, lo, rest, prod):
        nonlocal best
        if i == k - 1:
            if rest > 0 and rest.numerator == 1 and rest.denominator >= lo:
                best = max(best, prod * rest.denominator)
            return
        d = lo
        while Fraction(k - i, d) >= rest:
            r = rest - Fraction(1, d)
            if r > 0:
                rec(i + 1, d, r, prod * d)
            d += 1

    rec(0, 1, q, 1)
    return best


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for p in set_partitions(rest):
        yield [[head]] + p
        for i in range(len(p)):
            yield p[:i] + [[head] + p[i]] + p[i + 1:]


def oracle_g(k, mu):
    total = 0
    for Q in set_partitions(sorted(mu)):
        prod = 1
        for Y in Q:
            prod *= bounds.f1(len(Y), k)
        total += prod
    return math.factorial(k) * total


# ---------------------------------------------------------------------------
# f and the tower

def test_f_examples():
    assert bounds.f(1, 1) == 1
    assert bounds.f(2, 1) == 4
    assert bounds.f(3, 1) == 36


@pytest.mark.parametrize("q", [Fraction(2), Fraction(1), Fraction(1, 2), Fraction(1, 3)])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_f_matches_bruteforce(k, q):
    want = oracle_f(k, q)
    if k == 1 and want == 0:
        # floor(1/q) = 0 when no unit fraction equals q
        assert bounds.f(k, q) == 0
    else:
        assert bounds.f(k, q) == want


def test_f_infeasible_and_too_large():
    with pytest.raises(bounds.Infeasible):
        bounds.f(2, 3)
    with pytest.raises(bounds.TooLarge):
        bounds.f(7, 1)


def test_f_rejects_bad_arguments():
    with pytest.raises(ValueError):
        bounds.f(0, 1)
    with pytest.raises(ValueError):
        bounds.f(1, 0)


def test_tower_examples():
    assert bounds.f1(1, 0) == 1
    assert bounds.g(0, {1}) == 1
    assert bounds.g(0, set()) == 1
    assert bounds.g(3, set()) == 6
    assert bounds.phi(0, 1) == 3


def test_f1_definition():
    for u in range(1, 4):
        for k in range(0, 3):
            want = math.factorial(k) * sum(oracle_f(u + t, 1) for t in range(k + 1))
            assert bounds.f1(u, k) == want


def test_g_matches_partition_enumeration():
    for k in range(0, 3):
        for size in range(0, 5):
            if size + k > 6:
                continue
            assert bounds.g(k, set(range(1, size + 1))) == oracle_g(k, range(1, size + 1))


def test_g1_max_over_subsets():
    for k, l in [(0, 2), (1, 2), (2, 3)]:
        want = max(oracle_g(k, S) for r in range(l + 1) for S in itertools.combinations(range(1, l + 1), r))
        assert bounds.g1(k, l) == want


def test_psi_omega_offsets():
    for k in range(0, 4):
        for l in range(0, 4):
            if k + l > 6:
                continue
            assert bounds.psi(k, l) - bounds.phi(k, l) == k + l
            assert bounds.omega(k, l) - bounds.psi(k, l) == 2 * l * (k + l)
            assert bounds.phi(k, l) == (2 * l + 1) * bounds.g1(k, l)


def test_Psi_values():
    assert bounds.Psi(1) == 1
    assert bounds.Psi(1, n0=100) == 1
    inner = max(bounds.omega(x, y) for x in range(2) for y in range(4))
    assert bounds.Psi(2) == max(2, 2 + inner, 25, 4)
    with pytest.raises(bounds.Infeasible):
        bounds.Psi(3)
    assert bounds.Psi_lower_bound(3) >= 25
    with pytest.raises(ValueError):
        bounds.Psi(8)


def test_monotonicity_report():
    """Report (not assert) any decrease of the tower on the feasible grid."""
    viol = []
    for name in ["f1", "g1", "phi", "psi", "omega"]:
        fn = getattr(bounds, name)
        lo = 1 if name == "f1" else 0
        for k in range(lo, 6):
            for l in range(0, 6 - k):
                if k + l + 1 > 6:
                    continue
                v = fn(k, l)
                if fn(k + 1, l) < v or fn(k, l + 1) < v:
                    viol.append((name, k, l))
    fk = [bounds.f(k, 1) for k in range(1, 6)]
    if fk != sorted(fk):
        viol.append(("f", "k"))
    if viol:
        warnings.warn(f"monotonicity violations: {viol}")
    print("monotonicity violations:", viol)


# ---------------------------------------------------------------------------
# displacement sets and their constructor

def test_iota_examples():
    assert bounds.iota_member(P("(1 2)", 4), 1)
    assert bounds.iota_member(P("(1 2 3)", 4), 1)
    assert not bounds.iota_member(P("(1 2 3 4)", 4), 1)
    assert not bounds.iota_member(P("(1 2)(3 4)(5 6)", 6), 1)
    with pytest.raises(ValueError):
        bounds.iota_member(P("(1 2)", 4), 6)


def test_displacement_construct_examples():
    r = bounds.displacement_construct(P("(1 2)", 6), 1, 6)
    want = {P(f"({i} {i + 1})", 6) for i in range(1, 6)}
    assert set(r.elements) == want and r.verified
    r = bounds.displacement_construct(P("(1 2 3)", 6), 1, 6)
    assert len(r.elements) == 5 and P("(1 2 3)", 6) in r.elements
    assert is_irredundant_generating(r.elements, symmetric(6))


def test_displacement_construct_tail_length():
    n, k = 12, 3
    x = P("(1 2)", n)
    r = bounds.displacement_construct(x, k, n)
    l = n - k + x.displacement() - 1
    tail = [e for e in r.elements if max(len(c) for c in e.cycle_decomposition()) == n - l + 1]
    assert tail and n - l + 1 == k - x.displacement() + 2


def test_displacement_construct_rejections():
    with pytest.raises(ValueError):
        bounds.displacement_construct(P("(1 2 3 4)", 8), 1, 8)
    with pytest.raises(ValueError):
        bounds.displacement_construct(Permutation.identity(8), 1, 8)
    with pytest.raises(ValueError):
        bounds.displacement_construct(P("(1 2)", 6), 2, 6)


def test_displacement_construct_random_matches_iota():
    rng = np.random.default_rng(11)
    n = 9
    S = symmetric(n)
    for k in (1, 2):
        for _ in range(15):
            # low-displacement x: product of a few random transpositions
            x = Permutation.identity(n)
            for _ in range(int(rng.integers(1, k + 2))):
                a, b = (int(v) for v in rng.choice(n, 2, replace=False))
                x = x * Permutation.from_cycles([[a + 1, b + 1]], n)
            if x.displacement() == 0:
                continue
            member = bounds.iota_member(x, k)
            try:
                r = bounds.displacement_construct(x, k, n, verify=False)
                built = True
            except ValueError:
                built = False
            assert member == built
            if built:
                assert len(r.elements) == n - k and x in r.elements
                assert is_irredundant_generating(r.elements, S)


# ---------------------------------------------------------------------------
# audits

def test_audit_block_kernel():
    H = generate([P("(1 2)", 6), P("(1 3)(2 4)", 6), P("(1 3 5)(2 4 6)", 6)], 6)
    assert H.order == len(closure([g.images for g in H.generators], 6)) == 48
    r = bounds.bound_audit("block-kernel", H, block_size=2)
    assert r.bound == 5 and r.hypotheses_met
    assert r.observed <= 5 and r.verdict == "verified"


def test_audit_transitive_vacuous():
    r = bounds.bound_audit("transitive", symmetric(4))
    assert not r.hypotheses_met and r.verdict == "vacuous"


def test_audit_displacement_vacuous():
    n, k = 8, 2
    x = P("(1 2)", n)
    elems = bounds.displacement_construct(x, k, n, relaxed=True).elements
    r = bounds.bound_audit("displacement", elems, k=k)
    assert not r.hypotheses_met and r.verdict == "vacuous"
    assert r.observed == [e.displacement() for e in elems]


def test_audit_verdict_rules():
    assert bounds._verdict(True, True) == "verified"
    assert bounds._verdict(True, False) == "FALSIFIED"
    assert bounds._verdict(False, False) == "vacuous"
    assert bounds._verdict(False, True) == "vacuous"
