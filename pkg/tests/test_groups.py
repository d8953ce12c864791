import itertools
import math

import numpy as np
import pytest

from irk.builtins import alternating, builtin, cyclic, dihedral, psl2, symmetric
from irk.groups import (
    GeneratedGroup,
    StabChain,
    generate,
    is_primitive,
    is_transitive,
    is_two_transitive,
    lambda_of,
    member,
    orbits,
    verify_almost_maximal,
)
from irk.lattice import enumerate_subgroups
from irk.perm import Permutation

from conftest import P, closure


def G(texts, n):
    return generate([P(t, n) for t in texts], n)


def test_generate_examples():
    assert G(["(1 2)", "(1 2 3 4)"], 4).order == 24
    assert generate([], 4).order == 1
    assert G(["(1 2 3)", "(3 4 5)"], 5).order == 60


def test_member_examples():
    assert member(G(["(1 2)"], 2), P("(1 2)", 2))
    assert not member(alternating(4), P("(1 2)", 4))
    assert member(G(["(1 2 3 4)"], 4), P("(1 3)(2 4)", 4))


def test_orbits_examples():
    assert orbits(G(["(1 2)"], 4)) == [[1, 2], [3], [4]]
    assert is_transitive(symmetric(4))
    assert orbits(G(["(1 2)(3 4)"], 4)) == [[1, 2], [3, 4]]


def test_lambda_examples():
    assert lambda_of(symmetric(4)) == 4
    assert lambda_of(alternating(5)) == 4
    assert lambda_of(generate([], 3)) == 0


def test_enumerate_subgroups_examples():
    klein = G(["(1 2)(3 4)", "(1 3)(2 4)"], 4)
    assert len(enumerate_subgroups(klein)) == 5
    assert len(enumerate_subgroups(symmetric(3))) == 6
    assert len(enumerate_subgroups(alternating(5))) == 59


def test_subgroup_count_oracle_s4():
    # oracle: closures of all element pairs give every subgroup of S_4
    # (every subgroup of S_4 is 2-generated)
    els = sorted(closure([P("(1 2)", 4).images, P("(1 2 3 4)", 4).images], 4))
    subs = {frozenset(closure([a, b], 4)) for a in els for b in els}
    assert len(enumerate_subgroups(symmetric(4))) == len(subs) == 30


def test_lagrange_and_orbit_refinement():
    S4 = symmetric(4)
    for H in enumerate_subgroups(S4):
        assert S4.order % H.order == 0
        for orb in orbits(H):
            assert any(set(orb) <= set(o) for o in orbits(S4))


def test_order_divides_factorial_and_members():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(2, 9))
        gens = [Permutation(rng.permutation(n).tolist()) for _ in range(int(rng.integers(1, 3)))]
        H = generate(gens, n)
        assert math.factorial(n) % H.order == 0
        assert all(H.member(g) for g in gens)
        assert H.order == len(closure([g.images for g in gens], n))


def test_membership_matches_naive_closure():
    rng = np.random.default_rng(11)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(3, 8))
        gens = [Permutation(rng.permutation(n).tolist()) for _ in range(2)]
        if math.factorial(n) > 5040:
            continue
        H = generate(gens, n)
        ref = closure([g.images for g in gens], n)
        for _ in range(50):
            q = Permutation(rng.permutation(n).tolist())
            assert H.member(q) == (q.images in ref)
            checked += 1


def test_builtins_orders():
    assert cyclic(6).order == 6
    assert dihedral(5).order == 10
    assert psl2(7).order == 168
    assert builtin("PSL2(17)").order == 2448
    assert builtin("builtin:A6").order == 360
    with pytest.raises(KeyError):
        builtin("Q8")


def test_primitivity_and_two_transitivity():
    assert is_two_transitive(symmetric(5))
    assert not is_two_transitive(cyclic(5))
    assert is_primitive(cyclic(5))
    assert not is_primitive(G(["(1 2 3 4)"], 4))


def test_almost_maximal_examples():
    assert verify_almost_maximal(6, [0, 1]).verdict == "maximal"
    r = verify_almost_maximal(6, [0, 1, 2])
    assert r.verdict == "unique_overgroup"
    assert r.overgroup_order == 36  # (S_3 wr S_2) ∩ A_6 has order 72/2
    assert verify_almost_maximal(4, [0]).verdict == "maximal"


def test_almost_maximal_degree_cap():
    with pytest.raises(ValueError):
        verify_almost_maximal(9, [0])


def test_disjoint_support_split_matches_naive_closure(rng):
    """Generators in separate support clusters, some spanning two orbits."""
    n = 10
    for _ in range(20):
        gens = []
        for lo, hi in ((0, 5), (5, 10)):
            for _ in range(2):
                img = list(range(n))
                pts = list(range(lo, hi))
                sub = [int(x) for x in rng.permutation(pts)]
                k = int(rng.integers(2, 4))
                chosen = sub[:k]
                for a, b in zip(chosen, chosen[1:] + chosen[:1]):
                    img[a] = b
                gens.append(tuple(img))
        C = StabChain(n, gens)
        naive = closure(gens, n)
        assert C.order() == len(naive)
        for g in list(naive)[:50]:
            assert C.contains(g)
        outside = tuple([1, 0] + list(range(2, n)))
        assert C.contains(outside) == (outside in naive)
