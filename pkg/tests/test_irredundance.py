import itertools

import numpy as np
import pytest

from irk.builtins import alternating, builtin, cyclic, dihedral, symmetric
from irk.groups import generate, lambda_of
from irk.irredundance import (
    SearchBudget,
    can_replace,
    direct_product_refine,
    i_search,
    is_flat,
    is_irredundant,
    is_irredundant_generating,
    is_strongly_flat,
    m_search,
    redundant_indices,
    replacement_counterexample,
    replacement_property,
    whiston_check,
    whiston_refine,
)
from irk.perm import Permutation

from conftest import P, closure


def G(texts, n):
    return generate([P(t, n) for t in texts], n)


KLEIN = (["(1 2)(3 4)", "(1 3)(2 4)"], 4)


def brute_m(group, max_len=None):
    """Oracle: largest irredundant generating subset by plain subset
    enumeration with naive closures."""
    n = group.degree
    els = [g for g in group.raw_elements() if g != tuple(range(n))]
    order = group.order
    best = 0
    max_len = max_len or lambda_of(group)
    for t in range(1, max_len + 1):
        for S in itertools.combinations(els, t):
            if len(closure(list(S), n)) != order:
                continue
            if all(len(closure(list(S[:j] + S[j + 1:]), n)) < order for j in range(t)):
                best = t
                break
    return best


# is_irredundant

def test_irredundant_examples():
    S4 = symmetric(4)
    cox = [P("(1 2)", 4), P("(2 3)", 4), P("(3 4)", 4)]
    assert is_irredundant(cox) and is_irredundant_generating(cox, S4)
    assert not is_irredundant([P("(1 2 3)", 4), P("(1 3 2)", 4)])
    assert is_irredundant([])
    assert redundant_indices([P("(1 2 3)", 4), P("(1 3 2)", 4)]) == [0, 1]


# m and i

def test_m_examples():
    assert m_search(symmetric(4)).value == 3
    assert m_search(alternating(5)).value == 3
    assert m_search(G(*KLEIN)).value == 2


def test_i_examples():
    assert i_search(G(*KLEIN)).value == 2
    assert i_search(symmetric(4)).value == 3
    v = i_search(alternating(5)).value
    assert 3 <= v <= 4


@pytest.mark.parametrize("name", ["S3", "A4", "D4", "D5", "C6", "S4"])
def test_m_matches_subset_oracle(name):
    H = builtin(name)
    r = m_search(H)
    assert r.exact
    assert r.value == brute_m(H)
    w = r.witness.elements
    assert len(w) == r.value and is_irredundant_generating(w, H)


@pytest.mark.parametrize("name", ["S3", "A4", "S4", "A5", "D4", "C12"])
def test_chain_m_le_i_le_lambda(name):
    H = builtin(name)
    m, i = m_search(H), i_search(H)
    assert m.value <= i.value <= lambda_of(H)
    wit = i.witness.elements
    for t in range(len(wit) + 1):
        for sub in itertools.combinations(wit, t):
            assert is_irredundant(list(sub))


def test_budget_exhaustion_flagged():
    r = m_search(symmetric(5), SearchBudget(node_limit=5))
    assert not r.exact
    assert is_irredundant_generating(r.witness.elements, symmetric(5))


# flatness

def test_flatness_examples():
    assert is_flat(symmetric(4))
    assert is_strongly_flat(generate([], 3))


def test_flatness_oracle_s4():
    from irk.lattice import enumerate_subgroups

    vals = [m_search(H).value for H in enumerate_subgroups(symmetric(4))]
    assert max(vals) == 3
    assert is_strongly_flat(symmetric(4)) == (sorted(vals)[-2] < 3)


# replacement

def test_replacement_examples():
    assert replacement_property(alternating(5)).holds
    assert replacement_property(alternating(4)).holds


@pytest.mark.parametrize("name", ["A4", "S4", "C4", "C12", "D4", "D6", "S3", "PSL2(7)"])
def test_replacement_deciders_agree(name):
    H = builtin(name)
    a, b = replacement_counterexample(H), replacement_property(H)
    assert a.exact and b.exact
    assert (a.holds, a.m) == (b.holds, b.m)
    if not a.holds:
        S, h = a.counterexample_set, a.counterexample_h
        assert is_irredundant_generating(S, H) and len(S) == a.m
        assert can_replace(S, h, H) == []


# whiston

def test_whiston_example():
    S3, A3 = symmetric(3), alternating(3)
    r = whiston_refine([P("(1 2)", 3), P("(1 3)", 3)], A3, S3)
    assert r.k == 1
    assert r.sequence == [P("(1 2)", 3), P("(1 3 2)", 3)]
    assert all(whiston_check(r, A3, S3).values())


def test_whiston_degenerate_normal_subgroups():
    S4 = symmetric(4)
    S = [P("(1 2)", 4), P("(2 3)", 4), P("(3 4)", 4)]
    r = whiston_refine(S, S4, S4)
    assert r.k == 0 and all(S4.member(h) for h in r.sequence)
    r = whiston_refine(S, generate([], 4), S4)
    assert r.k == 3 and r.sequence == S


def test_whiston_rejects_non_normal():
    S4 = symmetric(4)
    with pytest.raises(ValueError):
        whiston_refine([P("(1 2)", 4), P("(2 3)", 4), P("(3 4)", 4)], G(["(1 2)"], 4), S4)


# direct product

def test_direct_product_examples():
    S = [P(t, 6) for t in ("(1 2)", "(1 3)", "(4 5)", "(4 6)")]
    r = direct_product_refine(S, [[0, 1, 2], [3, 4, 5]])
    assert [len(h) for h in r.H] == [2, 2]
    assert [t.order for t in r.T] == [6, 6]
    assert r.certificate["identity_holds"] and r.certificate["inequality_holds"]
    r = direct_product_refine([P("(1 2)(3 4)", 4)], [[0, 1], [2, 3]])
    assert len(r.H[0]) == 1 and len(r.H[1]) <= 1
    S = [P("(1 2)", 3), P("(2 3)", 3)]
    r = direct_product_refine(S, [[0, 1, 2]])
    assert r.H[0] == S and r.T[0].order == 6


def test_direct_product_rejects_non_product():
    with pytest.raises(ValueError):
        direct_product_refine([P("(1 4)", 4)], [[0, 1], [2, 3]])
