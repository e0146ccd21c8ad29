import pytest
from hypothesis import given

from charspace.commutant import is_characteristic, is_hyperinvariant
from charspace.errors import PreconditionError
from charspace.gf2la import Subspace, span, vec_from_str
from charspace.hinv_lattice import (
    count_hinv,
    covering_pairs,
    hinv_subspaces,
    in_lattice,
    lattice_iso_check,
    lattice_json,
    lattice_tuples,
    to_dot,
    w_from_intersections,
    w_subspace,
)
from charspace.nilmod import SegreChar, build_module

from conftest import segres

v = vec_from_str


def test_tuple_examples():
    assert lattice_tuples(SegreChar((1, 3))) == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (1, 3)]
    assert lattice_tuples(SegreChar((4,))) == [(k,) for k in range(5)]
    assert len(lattice_tuples(SegreChar((1, 3, 7, 7)))) == 30


def test_count_examples():
    assert count_hinv(SegreChar((1, 3))) == 6
    assert count_hinv(SegreChar((1, 3, 7, 7))) == 30
    assert count_hinv(SegreChar((9,))) == 10


@given(segres(12))
def test_tuples_satisfy_both_chains(t):
    tuples = lattice_tuples(SegreChar(t))
    assert tuples == sorted(set(tuples))
    for r in tuples:
        assert in_lattice(t, r)
        assert list(r) == sorted(r)
        d = [a - b for a, b in zip(t, r)]
        assert d == sorted(d) and min(d) >= 0


def test_w_examples():
    V = build_module((1, 3))
    assert w_subspace(V, (0, 0)) == Subspace.full(4)
    assert w_subspace(V, (1, 1)) == span([v("0010"), v("0001")], 4)
    assert w_subspace(V, (0, 1)) == span([v("1000"), v("0010"), v("0001")], 4)
    with pytest.raises(PreconditionError):
        w_subspace(V, (1, 0))


@given(segres(9))
def test_w_two_ways_and_hyperinvariant(t):
    V = build_module(t)
    for r, W in hinv_subspaces(V).items():
        assert W == w_from_intersections(V, r)
        assert is_hyperinvariant(V, W) and is_characteristic(V, W)


def test_iso_examples():
    for t in [(1, 3), (5,), (2, 2), (1, 2, 2, 4)]:
        assert lattice_iso_check(build_module(t))


def test_covering_pairs_of_a_chain():
    assert covering_pairs([(0,), (1,), (2,)]) == [((0,), (1,)), ((1,), (2,))]


def test_dot_and_json():
    V = build_module((1, 3))
    dot = to_dot(V)
    assert dot.startswith('digraph "Hinv(1,3)"') and dot.endswith("}\n")
    assert dot.count("->") == len(covering_pairs(lattice_tuples(V.segre)))
    js = lattice_json(V)
    assert js[0] == {"r": [0, 0], "dim": 4, "basis": ["1000", "0100", "0010", "0001"]}
    assert [e["dim"] for e in js] == [4, 3, 2, 2, 1, 0]
