"""Cyclic words: projection, needle, wedge, embed/retract."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtkv.exactlin import SparseMatrix, rank
from gtkv.cyclic_words import (
    CYCLIC_EMPTY,
    CyclicElement,
    CyclicPair,
    CyclicWord,
    RetractError,
    cyclic_basis,
    cyclic_one,
    embed_tilde_delta,
    format_cyclic,
    needle,
    parse_cyclic,
    project,
    retract_tilde_delta,
    square_project_both,
    square_project_left,
    wedge,
)
from gtkv.tensor_algebra import AlgebraContext, TensorElement, Word, parse_element, tensor

F = Fraction


def test_cyclic_word_canonical_rotation():
    assert CyclicWord((1, 0)) == CyclicWord((0, 1))
    assert tuple(CyclicWord((2, 0, 1))) == (0, 1, 2)
    assert tuple(CyclicWord((1, 0, 1))) == (0, 1, 1)
    assert CyclicWord(()) == CYCLIC_EMPTY


def test_project_identifies_rotations():
    ctx = AlgebraContext(1, 0, 4)
    xy = parse_element(ctx, "x1*y1")
    yx = parse_element(ctx, "y1*x1")
    assert project(xy) == project(yx)
    assert project(xy - yx).is_zero()
    # the unit is not killed
    assert project(ctx.one()) == cyclic_one(ctx)


def test_cyclic_basis_counts():
    ctx = AlgebraContext(1, 0, 4)
    # binary necklaces of lengths 1..4: 2, 3, 4, 6
    assert [len(cyclic_basis(ctx, w)) for w in range(1, 5)] == [2, 3, 4, 6]
    assert cyclic_basis(ctx, 0) == [CYCLIC_EMPTY]


def test_needle_sums_rotations():
    ctx = AlgebraContext(1, 0, 4)
    n = needle(parse_cyclic(ctx, "|x1*y1|"))
    assert n == parse_element(ctx, "x1*y1 + y1*x1")
    # periodic word counts rotations with multiplicity
    n2 = needle(parse_cyclic(ctx, "|x1*x1|"))
    assert n2 == parse_element(ctx, "2*x1*x1")
    assert needle(cyclic_one(ctx)).is_zero()


def test_project_needle_is_length_times_identity():
    ctx = AlgebraContext(1, 1, 5)
    for wt in range(1, 6):
        for cw in cyclic_basis(ctx, wt):
            e = CyclicElement(ctx, {cw: F(1)})
            assert project(needle(e)) == e.scale(len(cw))


def test_needle_injective_up_to_weight_5():
    ctx = AlgebraContext(1, 1, 5)
    for wt in range(1, 6):
        basis = cyclic_basis(ctx, wt)
        words = ctx.basis_words(wt)
        index = {w: i for i, w in enumerate(words)}
        M = SparseMatrix(len(words), len(basis))
        for j, cw in enumerate(basis):
            img = needle(CyclicElement(ctx, {cw: F(1)}))
            for w, c in img.data.items():
                M.set(index[w], j, c)
        assert rank(M) == len(basis)


def test_wedge_antisymmetry():
    ctx = AlgebraContext(1, 1, 4)
    a = parse_cyclic(ctx, "|x1*y1| - 2*|z1|")
    b = parse_cyclic(ctx, "|x1| + |y1*y1|")
    assert wedge(a, b) == -1 * wedge(b, a)
    assert wedge(a, a).is_zero()
    one = cyclic_one(ctx)
    w = wedge(a, one)
    assert w.coeff((CyclicWord((0, 1)), CYCLIC_EMPTY)) == F(1)
    assert w.coeff((CYCLIC_EMPTY, CyclicWord((0, 1)))) == F(-1)


def test_embed_independent_of_representative():
    ctx = AlgebraContext(1, 0, 4)
    # |xy| = |yx|: embedding must agree on both lifts
    lift1 = parse_element(ctx, "x1*y1").tilde_coproduct()
    lift2 = parse_element(ctx, "y1*x1").tilde_coproduct()
    assert square_project_both(lift1) == square_project_both(lift2)


def test_embed_leading_terms():
    ctx = AlgebraContext(1, 0, 4)
    e = parse_cyclic(ctx, "|x1|")
    got = embed_tilde_delta(e)
    x, one = CyclicWord((0,)), CYCLIC_EMPTY
    assert got == CyclicPair(ctx, {(x, one): F(1), (one, x): F(-1)})
    assert embed_tilde_delta(cyclic_one(ctx)) == CyclicPair(
        ctx, {(CYCLIC_EMPTY, CYCLIC_EMPTY): F(1)}
    )


def test_embed_retract_roundtrip():
    ctx = AlgebraContext(1, 1, 5)
    rng = random.Random(11)
    pool = [cw for wt in range(0, 6) for cw in cyclic_basis(ctx, wt)]
    for _ in range(8):
        data = {}
        for _ in range(4):
            cw = rng.choice(pool)
            data[cw] = data.get(cw, F(0)) + F(rng.randint(-3, 3), rng.randint(1, 2))
        e = CyclicElement(ctx, data)
        assert retract_tilde_delta(embed_tilde_delta(e)) == e


def test_retract_failure_carries_residual():
    ctx = AlgebraContext(1, 0, 4)
    bad = CyclicPair(ctx, {(CyclicWord((0,)), CyclicWord((1,))): F(1)})
    with pytest.raises(RetractError) as exc:
        retract_tilde_delta(bad)
    assert not exc.value.residual.is_zero()


def test_half_pair_operations():
    ctx = AlgebraContext(1, 0, 4)
    x, y = ctx.gen(0), ctx.gen(1)
    sq = tensor(x, y)  # x tensor y in A x A
    hl = square_project_left(sq)  # |x| tensor y
    assert hl.coeff((CyclicWord((0,)), Word((1,)))) == F(1)
    hl2 = hl.mul_A_left(x).mul_A_right(y)
    assert hl2.coeff((CyclicWord((0,)), Word((0, 1, 1)))) == F(1)
    cp = hl2.project_A()
    assert cp.coeff((CyclicWord((0,)), CyclicWord((0, 1, 1)))) == F(1)
    hr = hl.flip()
    assert hr.coeff((Word((1,)), CyclicWord((0,)))) == F(1)
    assert hr.flip() == hl
    # counit projections
    one_l = square_project_left(tensor(x, ctx.one()))
    assert one_l.eps_A() == project(x)


def test_cyclic_parse_format_roundtrip():
    ctx = AlgebraContext(1, 1, 4)
    e = parse_cyclic(ctx, "2*|x1*y1| - |z1| + 1/3*|1|")
    assert e.coeff(CyclicWord((0, 1))) == F(2)
    assert e.coeff(CYCLIC_EMPTY) == F(1, 3)
    text = format_cyclic(e)
    assert parse_cyclic(ctx, text) == e
    assert format_cyclic(parse_cyclic(ctx, text)) == text
    with pytest.raises(ValueError):
        parse_cyclic(ctx, "|x1")
    with pytest.raises(ValueError):
        parse_cyclic(ctx, "")


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_property_embed_is_linear_and_injective(seed):
    rng = random.Random(seed)
    ctx = AlgebraContext(1, 1, 4)
    pool = [cw for wt in range(0, 5) for cw in cyclic_basis(ctx, wt)]
    d1 = {rng.choice(pool): F(rng.randint(-2, 2))}
    d2 = {rng.choice(pool): F(rng.randint(-2, 2))}
    a, b = CyclicElement(ctx, d1), CyclicElement(ctx, d2)
    assert embed_tilde_delta(a + b) == embed_tilde_delta(a) + embed_tilde_delta(b)
    if not (a - b).is_zero():
        assert embed_tilde_delta(a) != embed_tilde_delta(b)
