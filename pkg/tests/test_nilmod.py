import pytest
from hypothesis import given, strategies as st

from charspace.gf2la import BitMatrix, DimensionMismatch, Subspace, vec_from_str
from charspace.nilmod import (
    INFINITY,
    NEG_INFINITY,
    NotInvariant,
    SegreChar,
    build_module,
    cyclic,
    exponent,
    has_gap,
    height,
    indicator,
    is_generator,
    min_max_laws_check,
    partitions,
    project,
    segre_of_restriction,
    ulm_invariant,
)

from conftest import module_and_vector, segres

v = vec_from_str


def test_segre_validation_and_parsing():
    assert SegreChar.parse("7, 1,3,7").parts == (1, 3, 7, 7)
    with pytest.raises(ValueError):
        SegreChar((3, 1))
    with pytest.raises(ValueError):
        SegreChar((0, 2))
    with pytest.raises(ValueError):
        build_module(())
    t = SegreChar((1, 3, 7, 7))
    assert (t.m, t.n, t.unrepeated_blocks()) == (4, 18, [0, 1])


def test_partition_counts():
    assert [sum(1 for _ in partitions(n)) for n in range(9)] == [1, 1, 2, 3, 5, 7, 11, 15, 22]


def test_build_module_examples():
    V = build_module((1, 3))
    assert V.f_matrix.to_strings() == ["0000", "0000", "0100", "0010"]
    assert V.generators == (v("1000"), v("0100"))
    assert build_module((1,)).f_matrix == BitMatrix.zero(1, 1)
    W = build_module((2, 2))
    assert not W.f_matrix.is_zero() and W.f_matrix.power(2).is_zero()


@given(segres(10))
def test_f_is_nilpotent_of_order_max_part(t):
    V = build_module(t)
    assert V.f_matrix.power(V.n).is_zero()
    assert V.f_matrix.power(max(t) - 1).rank() > 0 or max(t) == 1
    for x in (1, (1 << V.n) - 1):
        assert V.f_matrix.apply(x) == V.f(x)


def test_exponent_examples():
    V = build_module((1, 3))
    assert exponent(V, v("1000")) == 1
    assert exponent(V, v("0100")) == 3
    assert exponent(V, 0) == 0
    W = build_module((1, 3, 5))
    assert exponent(W, W.gen(0) | W.gen(1, 1) | W.gen(2, 2)) == 3


def test_height_examples():
    V = build_module((1, 3))
    assert height(V, 0) == NEG_INFINITY
    x1, x2 = v("1010"), v("1011")
    assert height(V, x1) == 0 and height(V, x2) == 0
    assert height(V, x1 ^ x2) == 2
    assert height(V, v("0010")) == 1
    # h(x1) = h(x2) = 0 yet h(x1 + x2) = 1
    assert height(V, v("1010") ^ v("1001")) == 1


def test_indicator_examples():
    V = build_module((1, 3))
    H = indicator(V, v("1010"))
    assert H.full(4) == (0, 2, INFINITY, INFINITY)
    assert H.to_json(4) == [0, 2, "inf", "inf"]
    assert H.gaps() == [1] and has_gap(H)
    W = build_module((1, 3, 5))
    z = W.gen(0) | W.gen(1, 1) | W.gen(2, 2)
    assert indicator(W, z).full(5) == (0, 2, 4, INFINITY, INFINITY)
    for i, t in enumerate(W.parts):
        Hu = indicator(W, W.gen(i))
        assert Hu.heights == tuple(range(t)) and not has_gap(Hu)


@given(module_and_vector())
def test_heights_grow_along_f(arg):
    V, x = arg
    H = indicator(V, x)
    if not x:
        return
    for j in range(1, H.exponent):
        assert H.heights[j] >= 1 + H.heights[j - 1]
        assert H.heights[j] >= j + H.heights[0]


def test_ulm_examples():
    V = build_module((1, 3, 7, 7))
    assert [ulm_invariant(V, r) for r in (1, 2, 3, 7)] == [1, 0, 1, 2]
    assert ulm_invariant(build_module((5,)), 5) == 1
    with pytest.raises(ValueError):
        ulm_invariant(V, 0)
    with pytest.raises(ValueError):
        ulm_invariant(V, 19)


def test_ulm_invariants_are_multiplicities():
    for n in range(1, 11):
        for t in partitions(n):
            V = build_module(t)
            assert [ulm_invariant(V, r) for r in range(1, n + 1)] == [
                t.count(r) for r in range(1, n + 1)
            ]


def test_generator_examples():
    V = build_module((1, 3))
    assert is_generator(V, v("0100"))
    assert not is_generator(V, v("1010"))
    assert is_generator(V, v("1100"))
    assert not is_generator(V, 0)


@given(module_and_vector())
def test_generators_have_no_gap(arg):
    V, x = arg
    for u in V.generators:
        assert is_generator(V, u)
    if has_gap(indicator(V, x)):
        assert not is_generator(V, x)


def test_projection_examples():
    V = build_module((1, 3))
    assert project(V, v("1010"), 0) == v("1000")
    assert project(V, v("1010"), 1) == v("0010")
    assert project(V, 0, 1) == 0
    with pytest.raises(IndexError):
        project(V, 1, 2)


def test_cyclic_examples():
    V = build_module((1, 3))
    assert cyclic(V, 0).dim == 0
    assert cyclic(V, v("0100")) == Subspace.coordinate([1, 2, 3], 4)
    W = build_module((1, 3, 5))
    assert cyclic(W, W.gen(0) | W.gen(1, 1) | W.gen(2, 2)).dim == 3


@given(module_and_vector())
def test_cyclic_dimension_is_exponent(arg):
    V, x = arg
    assert cyclic(V, x).dim == exponent(V, x)


def test_min_max_examples():
    V = build_module((1, 3))
    assert min_max_laws_check(V, [v("1000"), v("0010")]) == (0, 2)
    assert min_max_laws_check(V, [0, v("0010")]) == (1, 2)
    W = build_module((1, 3, 7, 7))
    g2 = [W.gen(0), W.gen(1, 1), W.gen(2, 2), W.gen(3, 2)]
    assert min_max_laws_check(W, g2) == (0, 5)
    with pytest.raises(ValueError):
        min_max_laws_check(V, [v("0100"), 0])
    with pytest.raises(ValueError):
        min_max_laws_check(V, [0, 0])


def test_min_max_laws_exhaustive():
    for n in range(1, 9):
        for t in partitions(n):
            V = build_module(t)
            for x in range(1, 1 << n):
                comps = [x & m for m in V.block_masks]
                assert min_max_laws_check(V, comps) == (height(V, x), exponent(V, x))


def test_restriction_examples():
    V = build_module((2, 5))
    assert segre_of_restriction(V, Subspace.full(V.n)) == V.segre
    assert segre_of_restriction(V, Subspace.zero(V.n)).parts == ()
    from charspace.commutant import characteristic_hull

    X = characteristic_hull(V, [V.gen(0, 0) | V.gen(1, 2)])  # (s, q) = (2, 3)
    assert segre_of_restriction(V, X).parts == (1, 3)
    with pytest.raises(NotInvariant):
        segre_of_restriction(V, Subspace.coordinate([0], V.n))
    with pytest.raises(DimensionMismatch):
        segre_of_restriction(V, Subspace.zero(3))


@given(module_and_vector())
def test_restriction_to_cyclic_is_one_block(arg):
    V, x = arg
    e = exponent(V, x)
    assert segre_of_restriction(V, cyclic(V, x)).parts == ((e,) if e else ())
