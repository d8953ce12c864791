import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irk.perm import (
    Permutation,
    compose,
    cycle_decomposition,
    displacement,
    from_cycles,
    identity,
    inverse,
    parity,
    parse_perm,
    perm_from_json,
    perm_to_json,
)

from conftest import P


def perms(max_n=16):
    return st.integers(1, max_n).flatmap(lambda n: st.permutations(list(range(n)))).map(Permutation)


# examples

def test_compose_right_to_left():
    # (1 2)∘(1 3): 1→3→3, 3→1→2, 2→2→1
    assert compose(P("(1 2)", 3), P("(1 3)", 3)) == P("(1 3 2)", 3)
    p = P("(1 2 3)", 4)
    assert compose(p, identity(4)) == p
    assert compose(P("(1 2)", 2), P("(1 2)", 2)).is_identity()


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(P("(1 2)", 2), P("(1 2)", 3))


def test_parity_examples():
    assert parity(identity(3)) == "even"
    assert parity(P("(1 2)", 2)) == "odd"
    assert parity(P("(1 2 3)", 3)) == "even"


def test_displacement_examples():
    assert displacement(identity(5)) == 0
    assert displacement(P("(1 2 3)", 3)) == 2
    assert displacement(P("(1 2)(3 4 5)", 5)) == 3


def test_canonical_cycles():
    p = P("(3 5 4)(2 1)", 5)
    assert cycle_decomposition(p) == [[1, 2], [3, 5, 4]]


def test_json_encodings():
    p = P("(1 2)(3 4 5)", 5)
    assert perm_to_json(p) == {"n": 5, "cycles": [[1, 2], [3, 4, 5]]}
    assert perm_from_json({"n": 5, "images": [2, 1, 4, 5, 3]}) == p
    assert perm_from_json({"n": 5, "cycles": [[1, 2], [3, 4, 5]]}) == p
    assert perm_from_json("(1 2)(3 4 5)", 5) == p


def test_invalid_images_rejected():
    with pytest.raises(ValueError):
        Permutation([0, 0, 1])
    with pytest.raises(ValueError):
        parse_perm("(1 7)", 5)


# properties

@settings(max_examples=300, deadline=None)
@given(perms())
def test_round_trip_cycles(p):
    assert from_cycles(cycle_decomposition(p), p.degree) == p


def test_round_trip_bulk():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        n = int(rng.integers(1, 17))
        p = Permutation(rng.permutation(n).tolist())
        assert from_cycles(cycle_decomposition(p), n) == p


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.permutations(list(range(n))), st.permutations(list(range(n))))))
def test_parity_homomorphism_and_displacement(pq):
    p, q = Permutation(pq[0]), Permutation(pq[1])
    pq_ = compose(p, q)
    assert (parity(pq_) == "odd") == ((parity(p) == "odd") != (parity(q) == "odd"))
    assert displacement(pq_) <= displacement(p) + displacement(q)
    assert displacement(p) == displacement(inverse(p))
    assert compose(p, inverse(p)).is_identity()
    # d = n minus number of cycles counting fixed points
    assert displacement(p) == p.degree - (len(p.cycles()) + p.degree - len(p.support()))
    # oracle: pointwise evaluation
    assert all(pq_(x) == p(q(x)) for x in range(p.degree))
