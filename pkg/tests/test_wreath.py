import pytest

from irk.builtins import a5_automorphism_generators, alternating, builtin, cyclic, symmetric
from irk.groups import GeneratedGroup
from irk.irredundance import can_replace, replacement_counterexample
from irk.perm import Permutation
from irk.wreath import (
    build_wreath,
    goursat_classify,
    graph_subgroup,
    hall_generates,
    is_nonabelian_simple,
    nonreplacement_witness,
    m_witness,
    i_witness,
)

from conftest import P, closure

A5_SET = ["(3 4 5)", "(2 3)(4 5)", "(1 2)(4 5)"]
S3_SET = ["(2 3)", "(1 2)"]


def perms(texts, n):
    return [P(t, n) for t in texts]


def trivial(n):
    return GeneratedGroup([], n)


# ---------------------------------------------------------------------------
# wreath products

def test_wreath_s2_s2_is_dihedral_of_order_8():
    W = build_wreath(symmetric(2), symmetric(2))
    assert W.order == 8 == len(closure([g.images for g in W.generators], 4))
    g = [x for x in W.generators]
    assert any(a * b != b * a for a in g for b in g)


def test_wreath_a5_s3_order():
    W = build_wreath(alternating(5), symmetric(3))
    assert W.degree == 15 and W.order == 60 ** 3 * 6


def test_wreath_with_trivial_top():
    S = alternating(4)
    W = build_wreath(S, trivial(1))
    assert W.order == S.order and W.degree == 4


def test_wreath_degree_cap():
    with pytest.raises(ValueError):
        build_wreath(symmetric(12), symmetric(12))


# ---------------------------------------------------------------------------
# simplicity

def test_simplicity_examples():
    assert is_nonabelian_simple(alternating(5))
    assert is_nonabelian_simple(builtin("PSL2(7)"))
    assert not is_nonabelian_simple(alternating(4))
    assert not is_nonabelian_simple(symmetric(5))
    assert not is_nonabelian_simple(cyclic(5))


# ---------------------------------------------------------------------------
# Goursat

def test_goursat_diagonal():
    A5 = alternating(5)
    r = goursat_classify(graph_subgroup(A5), A5)
    assert r.kind == "graph_of_automorphism" and r.homomorphism_checked
    assert all(a == b for a, b in r.phi.items())


def test_goursat_full():
    A5 = alternating(5)
    gens = [Permutation(g.images + tuple(range(5, 10))) for g in A5.generators]
    gens += [Permutation(tuple(range(5)) + tuple(x + 5 for x in g.images)) for g in A5.generators]
    r = goursat_classify(GeneratedGroup(gens, 10), A5)
    assert r.kind == "full" and r.order == 3600


def test_goursat_outer_twist():
    A5 = alternating(5)
    c = P("(1 2)", 5)
    r = goursat_classify(graph_subgroup(A5, c), A5)
    assert r.kind == "graph_of_automorphism"
    for a, b in r.phi.items():
        assert (c * Permutation(a) * c.inverse()).images == b
    # the twist is not inner: no even conjugator reproduces it
    inner = A5.raw_elements()
    assert not any(all(tuple(g[a[g.index(x)]] for x in range(5)) == b for a, b in r.phi.items())
                   for g in inner)


def test_goursat_not_subdirect():
    A5 = alternating(5)
    gens = [Permutation(g + tuple(x + 5 for x in g)) for g in [P("(1 2 3)", 5).images, P("(1 2)(4 5)", 5).images]]
    r = goursat_classify(GeneratedGroup(gens, 10), A5)
    assert r.kind == "not_subdirect"


# ---------------------------------------------------------------------------
# Hall's criterion

def test_hall_examples():
    A5 = alternating(5)
    auts = a5_automorphism_generators()
    a, b = P("(1 2 3 4 5)", 5), P("(1 2 3)", 5)
    r = hall_generates([[a, a], [b, b]], A5, auts)
    assert not r.generates and r.direct is False
    r = hall_generates([[a, a], [b, b.inverse()]], A5, auts)
    assert r.generates and r.direct is True
    r = hall_generates([[a, a], [a, b]], A5, auts)
    assert not r.generates and r.direct is False


def test_hall_matches_exhaustive_automorphisms(rng):
    """Pairs of generating pairs: Hall's verdict vs. all 120 automorphisms and direct order."""
    A5 = alternating(5)
    S5 = list(symmetric(5).raw_elements())
    els = A5.raw_elements()
    for _ in range(40):
        vecs = [[Permutation(els[int(rng.integers(0, 60))]) for _ in range(2)] for _ in range(2)]
        r = hall_generates(vecs, A5, a5_automorphism_generators())
        x = (vecs[0][0].images, vecs[1][0].images)
        y = (vecs[0][1].images, vecs[1][1].images)
        gen_x = len(closure(list(x), 5)) == 60
        gen_y = len(closure(list(y), 5)) == 60

        def conj(c, p):
            return tuple(c[p[c.index(i)]] for i in range(5))

        related = any(conj(c, x[0]) == y[0] and conj(c, x[1]) == y[1] for c in S5)
        assert r.generates == (gen_x and gen_y and not related)
        assert r.direct == r.generates


def test_hall_rejects_ragged_vectors():
    A5 = alternating(5)
    with pytest.raises(ValueError):
        hall_generates([[P("(1 2 3)", 5)], [P("(1 2 3)", 5), P("(1 2 3)", 5)]], A5)
    with pytest.raises(ValueError):
        hall_generates([], A5)


# ---------------------------------------------------------------------------
# witness constructions

def test_m_witness_a5_s3():
    w = m_witness(perms(A5_SET, 5), perms(S3_SET, 3), 3, alternating(5))
    assert len(w.elements) == 5 and w.irredundant and w.generating
    assert w.elements[0].degree == 15


def test_m_witness_a5_a5():
    w = m_witness(perms(A5_SET, 5), perms(A5_SET, 5), 5, alternating(5))
    assert len(w.elements) == 6 and w.irredundant and w.generating


def test_m_witness_rejections():
    s5 = perms(A5_SET, 5)
    with pytest.raises(ValueError):
        m_witness(s5, [P("(1 2)", 2)], 2, alternating(5))
    with pytest.raises(ValueError):
        m_witness(s5, [P("(1 2 3 4)", 4)], 4, alternating(5))
    s4 = [P("(1 2 3)", 4), P("(1 2)(3 4)", 4)]
    with pytest.raises(ValueError):
        m_witness(s4, perms(S3_SET, 3), 3, alternating(4))


def test_nonreplacement_witness_rejects_replaceable_t():
    A5 = alternating(5)
    T = perms(A5_SET, 5)
    assert can_replace(T, P("(1 2 3)", 5), A5)
    with pytest.raises(ValueError):
        nonreplacement_witness(T, P("(1 2 3)", 5), perms(S3_SET, 3), 3, A5)


def test_i_witness_a5():
    w = i_witness(perms(A5_SET, 5), 3)
    assert len(w.elements) == 9 and w.irredundant
    w1 = i_witness(perms(A5_SET, 5), 1)
    assert w1.elements == perms(A5_SET, 5)


def test_i_witness_independent_irredundance():
    """Each element lies outside the closure of the others (naive BFS on 10 points)."""
    w = i_witness(perms(A5_SET, 5), 2)
    raw = [e.images for e in w.elements]
    for i in range(len(raw)):
        assert raw[i] not in closure(raw[:i] + raw[i + 1:], 10)


@pytest.mark.slow
def test_nonreplacement_witness_psl2_17():
    G = builtin("PSL2(17)")
    r = replacement_counterexample(G)
    assert not r.holds and r.exact
    w = nonreplacement_witness(r.counterexample_set, r.counterexample_h, perms(S3_SET, 3), 3, G)
    assert len(w.elements) == r.m + 3 == 6
    assert w.elements[0].degree == 54
    assert w.irredundant and w.generating
