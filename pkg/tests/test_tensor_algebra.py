"""Hopf algebra layer: products, coproducts, exp/log, series, grammar."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtkv.exactlin import SparseMatrix, rank
from gtkv.tensor_algebra import (
    AlgebraContext,
    TensorElement,
    Word,
    ad_series,
    bch,
    commutator,
    format_element,
    outer_commutator,
    parse_element,
    power_series_apply,
    series_g,
    series_h_even,
    series_inverse,
    series_log1p,
    series_product,
    series_r,
    series_s,
    special_elements,
    tensor,
    texp,
    tlog,
)

F = Fraction


def random_element(ctx, rng, max_weight=None, eps_free=False, nterms=4):
    max_weight = ctx.D if max_weight is None else max_weight
    words = [w for w in ctx.basis_words_up_to(max_weight)]
    if eps_free:
        words = [w for w in words if len(w) > 0]
    data = {}
    for _ in range(nterms):
        w = rng.choice(words)
        data[w] = data.get(w, F(0)) + F(rng.randint(-3, 3), rng.randint(1, 3))
    return TensorElement(ctx, data)


def random_primitive(ctx, rng, max_weight=None, nterms=3):
    max_weight = ctx.D if max_weight is None else max_weight
    pool = []
    for w in range(1, max_weight + 1):
        pool.extend(elem for _, elem in ctx.lyndon_basis(w))
    out = ctx.zero()
    for _ in range(nterms):
        out = out + rng.choice(pool).scale(F(rng.randint(-2, 2), rng.randint(1, 3)))
    return out


# ---------------------------------------------------------------------------
# contexts and bases


def test_generator_bookkeeping():
    ctx = AlgebraContext(2, 3, 4)
    assert ctx.num_gens == 7
    names = [ctx.gen_name(i) for i in range(7)]
    assert names == ["x1", "x2", "y1", "y2", "z1", "z2", "z3"]
    for i, nm in enumerate(names):
        assert ctx.gen_index(nm) == i
    assert [ctx.gen_weight(i) for i in range(7)] == [1, 1, 1, 1, 2, 2, 2]
    with pytest.raises(IndexError):
        ctx.x_index(3)
    with pytest.raises(ValueError):
        ctx.gen_index("w1")


def test_basis_counts_weighted():
    # weight-w word counts with two weight-1 and one weight-2 letter satisfy
    # f(w) = 2 f(w-1) + f(w-2)
    ctx = AlgebraContext(1, 1, 6)
    counts = [len(ctx.basis_words(w)) for w in range(7)]
    assert counts[0] == 1 and counts[1] == 2
    for w in range(2, 7):
        assert counts[w] == 2 * counts[w - 1] + counts[w - 2]


def test_lyndon_dimensions_match_witt_formula():
    # genus 2, no punctures: all four letters have weight 1, so weight = length
    # and dim L_k follows the Witt formula (necklace counts): 4, 6, 20, 60.
    ctx = AlgebraContext(2, 0, 4)
    dims = [len(ctx.lyndon_basis(w)) for w in range(1, 5)]
    assert dims == [4, 6, 20, 60]


def test_lyndon_brackets_are_primitive_and_independent():
    ctx = AlgebraContext(1, 1, 4)
    for w in range(1, 5):
        basis = ctx.lyndon_basis(w)
        words = ctx.basis_words(w)
        index = {wd: k for k, wd in enumerate(words)}
        M = SparseMatrix(len(words), len(basis))
        for j, (_, elem) in enumerate(basis):
            assert elem.is_primitive()
            for wd, c in elem.data.items():
                M.set(index[wd], j, c)
        assert rank(M) == len(basis)


# ---------------------------------------------------------------------------
# algebra and truncation


def test_product_truncates_by_weight():
    ctx = AlgebraContext(1, 1, 3)
    z = ctx.gen(ctx.z_index(1))
    x = ctx.gen(ctx.x_index(1))
    assert (z * z).is_zero()  # weight 4 > 3
    zx = z * x
    assert list(zx.data) == [Word((2, 0))]
    assert ctx.word_weight(Word((2, 0))) == 3


def test_weight_multiplicativity():
    ctx = AlgebraContext(1, 1, 6)
    rng = random.Random(1)
    for _ in range(10):
        a = random_element(ctx, rng, max_weight=2, eps_free=True)
        b = random_element(ctx, rng, max_weight=3, eps_free=True)
        ab = a * b
        for w, c in ab.data.items():
            assert ctx.word_weight(w) >= (a.min_weight() or 0) + (b.min_weight() or 0)
    # homogeneous times homogeneous is homogeneous of the sum weight
    a = random_element(ctx, rng, max_weight=2, eps_free=True).component(2)
    b = random_element(ctx, rng, max_weight=2, eps_free=True).component(2)
    for w in (a * b).data:
        assert ctx.word_weight(w) == 4


def test_hopf_axioms():
    ctx = AlgebraContext(1, 1, 4)
    rng = random.Random(2)
    one = ctx.one()
    for _ in range(6):
        a = random_element(ctx, rng)
        D = a.coproduct()
        # counit laws
        assert D.eps_right() == a
        assert D.eps_left() == a
        # coassociativity via triple dictionaries
        left = {}
        for (u, v), c in D.data.items():
            for (u1, u2), c2 in TensorElement(ctx, {u: F(1)}).coproduct().data.items():
                key = (u1, u2, v)
                left[key] = left.get(key, F(0)) + c * c2
        right = {}
        for (u, v), c in D.data.items():
            for (v1, v2), c2 in TensorElement(ctx, {v: F(1)}).coproduct().data.items():
                key = (u, v1, v2)
                right[key] = right.get(key, F(0)) + c * c2
        assert {k: v for k, v in left.items() if v} == {k: v for k, v in right.items() if v}
        # antipode axiom m(S x id)Delta = eps * 1
        acc = ctx.zero()
        for (u, v), c in D.data.items():
            acc = acc + (TensorElement(ctx, {u: F(1)}).antipode() * TensorElement(ctx, {v: F(1)})).scale(c)
        assert acc == one.scale(a.eps())
        # coproduct is an algebra map on a product sample
        b = random_element(ctx, rng, max_weight=2)
        assert (a * b).coproduct() == a.coproduct() * b.coproduct()


def test_antipode_reverses_with_sign():
    ctx = AlgebraContext(1, 0, 4)
    e = parse_element(ctx, "x1*y1*x1 - 2*x1*y1")
    s = e.antipode()
    assert s == parse_element(ctx, "-x1*y1*x1 - 2*y1*x1")


def test_exp_log_roundtrip_and_group_like():
    ctx = AlgebraContext(1, 1, 5)
    rng = random.Random(3)
    for _ in range(5):
        p = random_primitive(ctx, rng)
        e = texp(p)
        assert e.is_group_like()
        assert tlog(e) == p
    # group-like implies primitive logarithm
    for _ in range(5):
        a = random_element(ctx, rng, eps_free=True)
        g = texp(a)
        assert tlog(g) == a
        if not g.is_group_like():
            assert not a.is_primitive()


def test_bch_associativity():
    ctx = AlgebraContext(1, 0, 5)
    rng = random.Random(4)
    for _ in range(3):
        a = random_primitive(ctx, rng, nterms=2)
        b = random_primitive(ctx, rng, nterms=2)
        c = random_primitive(ctx, rng, nterms=2)
        assert bch(a, bch(b, c)) == bch(bch(a, b), c)
    x = ctx.gen(0)
    assert bch(x, -1 * x).is_zero()


def test_bch_low_order_coefficients():
    ctx = AlgebraContext(1, 0, 4)
    x, y = ctx.gen(0), ctx.gen(1)
    val = bch(x, y)
    expected = (
        x + y
        + commutator(x, y).scale(F(1, 2))
        + commutator(x, commutator(x, y)).scale(F(1, 12))
        + commutator(y, commutator(y, x)).scale(F(1, 12))
        - commutator(y, commutator(x, commutator(x, y))).scale(F(1, 24))
    )
    assert val == expected


def test_tilde_coproduct():
    ctx = AlgebraContext(1, 1, 5)
    rng = random.Random(5)
    for _ in range(6):
        a = random_element(ctx, rng)
        td = a.tilde_coproduct()
        assert td.eps_right() == a
    # on a series in one primitive, reduces to f(x x 1 - 1 x x)
    x = ctx.gen(0)
    coeffs = [F(0), F(1), F(1, 2), F(-1, 3), F(2), F(1, 5)]
    f_of_x = power_series_apply(coeffs, x)
    xbar = tensor(x, ctx.one()) - tensor(ctx.one(), x)
    expected = tensor(ctx.one(), ctx.one()).scale(coeffs[0])
    powv = tensor(ctx.one(), ctx.one())
    for k in range(1, len(coeffs)):
        powv = powv * xbar
        expected = expected + powv.scale(coeffs[k])
    assert f_of_x.tilde_coproduct() == expected


def test_ad_series_matches_conjugation():
    ctx = AlgebraContext(1, 1, 5)
    rng = random.Random(6)
    exp_coeffs = [F(1, [1, 1, 2, 6, 24, 120][k]) for k in range(6)]
    for _ in range(4):
        a = random_primitive(ctx, rng, nterms=2)
        b = random_element(ctx, rng, eps_free=True, nterms=3)
        conj = texp(a) * b * texp(-1 * a)
        assert ad_series(exp_coeffs, a, b) == conj


def test_outer_commutator():
    ctx = AlgebraContext(1, 0, 4)
    x, y = ctx.gen(0), ctx.gen(1)
    V = tensor(x, y)
    got = outer_commutator(y, V)
    assert got == tensor(y * x, y) - tensor(x, y * y)


def test_special_elements():
    ctx = AlgebraContext(2, 2, 4)
    sp = special_elements(ctx)
    omega, xi = sp["omega"], sp["xi"]
    x1, y1 = ctx.gen(0), ctx.gen(2)
    x2, y2 = ctx.gen(1), ctx.gen(3)
    z1, z2 = ctx.gen(4), ctx.gen(5)
    assert omega == (
        commutator(x1, y1) + commutator(x2, y2) + z1 + z2
    )
    # xi agrees with omega below weight 3 and is primitive
    assert xi.eps() == 0
    diff = xi - omega
    assert diff.min_weight() is None or diff.min_weight() >= 3
    assert xi.is_primitive()


def test_substitute_is_algebra_map():
    # images of weight >= generator weight keep the map filtered, so the
    # truncated substitution is an exact algebra map
    src = AlgebraContext(0, 2, 4)
    tgt = AlgebraContext(1, 0, 4)
    om = special_elements(tgt)["omega"]
    xy = tgt.gen(0) * tgt.gen(1)
    images = {0: om, 1: xy}
    rng = random.Random(7)
    a = random_element(src, rng, nterms=3)
    b = random_element(src, rng, nterms=3)
    fa = a.substitute(tgt, images)
    fb = b.substitute(tgt, images)
    assert (a * b).substitute(tgt, images) == fa * fb


# ---------------------------------------------------------------------------
# grammar


def test_parse_format_examples():
    ctx = AlgebraContext(1, 1, 4)
    e = parse_element(ctx, "1/2*x1*y1 - z1")
    assert e.coeff(Word((0, 1))) == F(1, 2)
    assert e.coeff(Word((2,))) == F(-1)
    # canonical order: shorter words first, then letter order
    assert format_element(e) == "-z1 + 1/2*x1*y1"
    assert parse_element(ctx, format_element(e)) == e
    assert parse_element(ctx, "0").is_zero()
    assert format_element(ctx.zero()) == "0"
    assert format_element(ctx.one()) == "1"
    assert parse_element(ctx, "3") == ctx.one().scale(3)
    assert parse_element(ctx, "-2/3 + x1") == ctx.one().scale(F(-2, 3)) + ctx.gen(0)


def test_parse_rejects_garbage():
    ctx = AlgebraContext(1, 1, 4)
    with pytest.raises(ValueError):
        parse_element(ctx, "x9")
    with pytest.raises(ValueError):
        parse_element(ctx, "z1*z1*z1")  # weight 6 > 4
    with pytest.raises(ValueError):
        parse_element(ctx, "")
    with pytest.raises(ValueError):
        parse_element(ctx, "x1**y1")


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_grammar_roundtrip_random(seed):
    rng = random.Random(seed)
    ctx = AlgebraContext(rng.randint(0, 2), rng.randint(0, 2), rng.randint(1, 4))
    if ctx.num_gens == 0:
        return
    e = random_element(ctx, rng, nterms=rng.randint(1, 6))
    text = format_element(e)
    back = parse_element(ctx, text)
    assert back == e
    assert format_element(back) == text


# ---------------------------------------------------------------------------
# series coefficients


def test_series_g_values():
    g = series_g(6)
    assert g[0] == 1
    assert g[1] == F(1, 2)
    assert g[2] == F(1, 12)
    assert g[3] == 0
    assert g[4] == F(-1, 720)
    assert g[5] == 0
    assert g[6] == F(1, 30240)


def test_series_r_values():
    r = series_r(6)
    assert r[0] == 0
    assert r[1] == F(1, 2)
    assert r[2] == F(1, 24)
    assert r[3] == 0
    assert r[4] == F(-1, 2880)
    assert r[5] == 0
    assert r[6] == F(1, 181440)


def test_series_s_values():
    s = series_s(4)
    assert s[0] == F(1, 2)
    assert s[1] == F(1, 12)
    assert s[2] == 0
    assert s[3] == F(-1, 720)
    assert s[4] == 0


def test_series_h_even_values():
    h = series_h_even(5)
    assert h[0] == 0 and h[1] == 0
    assert h[2] == F(1, 48)
    assert h[3] == 0
    assert h[4] == F(-1, 5760)
    assert h[5] == 0


def test_series_utilities():
    # inverse and log are mutually consistent: log(1/(1-t)) = -log(1-t)
    one_minus_t = [F(1), F(-1), F(0), F(0), F(0)]
    inv = series_inverse(one_minus_t, 4)
    assert inv == [F(1)] * 5
    lg = series_log1p([F(0), F(-1), F(0), F(0), F(0)], 4)
    assert lg == [F(0), F(-1), F(-1, 2), F(-1, 3), F(-1, 4)]
    prod = series_product(one_minus_t, inv, 4)
    assert prod == [F(1), F(0), F(0), F(0), F(0)]


def test_exp_of_series_relation():
    # r(s) identity: e^{r(s)} * s = e^s - 1, checked on coefficients
    order = 8
    r = series_r(order)
    # exponentiate the series exactly
    expr = [F(0)] * (order + 1)
    expr[0] = F(1)
    term = [F(0)] * (order + 1)
    term[0] = F(1)
    fact = 1
    for k in range(1, order + 1):
        term = series_product(term, r, order)
        fact *= k
        for i in range(order + 1):
            expr[i] += term[i] / fact
    lhs = [F(0)] + expr[:-1]  # multiply by s
    import math

    rhs = [F(0)] + [F(1, math.factorial(k)) for k in range(1, order + 1)]
    assert lhs == rhs
