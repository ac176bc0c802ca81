"""Free group ring of a surface with boundary, and its loop operations.

Generators a_i, b_i (handles) and c_j (boundary loops), with the outer
boundary word c_0 = prod a_i b_i a_i^{-1} b_i^{-1} prod c_j derived from the
relation rather than stored as a generator.  The double bracket kappa and the
framed single bracket mu are defined by their values on generator pairs plus
the two Leibniz product rules; values on inverse letters are forced by
kappa(1, -) = 0 and mu(1) = 0.

Conjugacy classes are stored as cyclically reduced words in minimal-rotation
form, which makes equality in the trace space exact without passing to the
completed tensor algebra.  Expansions (exponential, standard, and twisted by
a tangential automorphism) embed the group ring into the tensor algebra and
realize the weight filtration.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .cyclic_words import CyclicElement, CyclicPair, HalfPairL, HalfPairR, project
from .derivations import TAutElement, rebase_taut
from .tensor_algebra import AlgebraContext, TensorElement, TensorSquare, Word, tensor, texp

F = Fraction
_ZERO = F(0)

# a letter is (generator index, +1 | -1) in the tensor-algebra indexing


def _reduce(letters) -> tuple:
    out: list = []
    for idx, s in letters:
        if out and out[-1][0] == idx and out[-1][1] == -s:
            out.pop()
        else:
            out.append((idx, s))
    return tuple(out)


class FreeGroupWord(tuple):
    """Freely reduced word; the empty word is the identity."""

    def __new__(cls, letters=()):
        return super().__new__(cls, _reduce(letters))

    def inverse(self) -> "FreeGroupWord":
        return FreeGroupWord(tuple((i, -s) for i, s in reversed(self)))

    def concat(self, other) -> "FreeGroupWord":
        return FreeGroupWord(tuple(self) + tuple(other))


class ConjClassWord(tuple):
    """Cyclically reduced minimal-rotation representative of a class."""

    def __new__(cls, letters=()):
        w = list(_reduce(letters))
        while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
            w = w[1:-1]
        t = tuple(w)
        if t:
            t = min(t[k:] + t[:k] for k in range(len(t)))
        return super().__new__(cls, t)


CLASS_ONE_WORD = ConjClassWord(())


def _accum(data: dict, key, c: Fraction):
    nv = data.get(key, _ZERO) + c
    if nv == 0:
        data.pop(key, None)
    else:
        data[key] = nv


class GroupRingElement:
    __slots__ = ("ctx", "data")

    def __init__(self, ctx: AlgebraContext, data: dict | None = None):
        self.ctx = ctx
        self.data = {w: c for w, c in (data or {}).items() if c != 0}

    @classmethod
    def one(cls, ctx) -> "GroupRingElement":
        return cls(ctx, {FreeGroupWord(): F(1)})

    @classmethod
    def from_word(cls, ctx, w: FreeGroupWord) -> "GroupRingElement":
        return cls(ctx, {w: F(1)})

    def is_zero(self) -> bool:
        return not self.data

    def coeff(self, w) -> Fraction:
        return self.data.get(w, _ZERO)

    def __add__(self, other):
        if not isinstance(other, GroupRingElement) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        data = dict(self.data)
        for w, c in other.data.items():
            _accum(data, w, c)
        return GroupRingElement(self.ctx, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "GroupRingElement":
        c = F(c)
        return GroupRingElement(self.ctx, {w: cc * c for w, cc in self.data.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GroupRingElement) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        data: dict = {}
        for w1, c1 in self.data.items():
            for w2, c2 in other.data.items():
                _accum(data, w1.concat(w2), c1 * c2)
        return GroupRingElement(self.ctx, data)

    def inverse_of_word(self) -> "GroupRingElement":
        """Inverse of a single group element (one word, coefficient 1)."""
        if len(self.data) != 1:
            raise ValueError("only single group words invert")
        (w, c), = self.data.items()
        if c != 1:
            raise ValueError("only coefficient-1 group words invert")
        return GroupRingElement(self.ctx, {w.inverse(): F(1)})

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElement)
            and self.ctx == other.ctx
            and self.data == other.data
        )

    def __repr__(self):
        return f"GroupRingElement({format_group_element(self)})"


class ConjugacyClassElement:
    __slots__ = ("ctx", "data")

    def __init__(self, ctx: AlgebraContext, data: dict | None = None):
        self.ctx = ctx
        self.data = {w: c for w, c in (data or {}).items() if c != 0}

    @classmethod
    def one(cls, ctx) -> "ConjugacyClassElement":
        return cls(ctx, {CLASS_ONE_WORD: F(1)})

    def is_zero(self) -> bool:
        return not self.data

    def coeff(self, w) -> Fraction:
        return self.data.get(w, _ZERO)

    def __add__(self, other):
        if not isinstance(other, ConjugacyClassElement) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        data = dict(self.data)
        for w, c in other.data.items():
            _accum(data, w, c)
        return ConjugacyClassElement(self.ctx, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ConjugacyClassElement":
        c = F(c)
        return ConjugacyClassElement(self.ctx, {w: cc * c for w, cc in self.data.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, ConjugacyClassElement)
            and self.ctx == other.ctx
            and self.data == other.data
        )

    def __repr__(self):
        return f"ConjugacyClassElement({format_class_element(self)})"


def project_group(e: GroupRingElement) -> ConjugacyClassElement:
    data: dict = {}
    for w, c in e.data.items():
        _accum(data, ConjClassWord(w), c)
    return ConjugacyClassElement(e.ctx, data)


# ---------------------------------------------------------------------------
# generators and the derived boundary word


def group_generator(ctx: AlgebraContext, index: int, sign: int = 1) -> GroupRingElement:
    if not 0 <= index < ctx.num_gens:
        raise ValueError("generator index out of range")
    return GroupRingElement(ctx, {FreeGroupWord(((index, 1 if sign >= 0 else -1),)): F(1)})


def alpha(ctx: AlgebraContext, i: int, sign: int = 1) -> GroupRingElement:
    return group_generator(ctx, ctx.x_index(i), sign)


def beta(ctx: AlgebraContext, i: int, sign: int = 1) -> GroupRingElement:
    return group_generator(ctx, ctx.y_index(i), sign)


def gamma(ctx: AlgebraContext, j: int, sign: int = 1) -> GroupRingElement:
    return group_generator(ctx, ctx.z_index(j), sign)


def boundary_word(ctx: AlgebraContext, j: int = 0) -> FreeGroupWord:
    """gamma_j for j >= 1; the derived outer boundary word for j = 0."""
    if j > 0:
        return FreeGroupWord(((ctx.z_index(j), 1),))
    letters = []
    for i in range(1, ctx.g + 1):
        xi, yi = ctx.x_index(i), ctx.y_index(i)
        letters += [(xi, 1), (yi, 1), (xi, -1), (yi, -1)]
    for jj in range(1, ctx.n + 1):
        letters.append((ctx.z_index(jj), 1))
    return FreeGroupWord(tuple(letters))


# ---------------------------------------------------------------------------
# pair containers


class GroupTensorSquare:
    """Element of (group ring) x (group ring)."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx, data: dict | None = None):
        self.ctx = ctx
        self.data = {k: c for k, c in (data or {}).items() if c != 0}

    def is_zero(self):
        return not self.data

    def __add__(self, other):
        if not isinstance(other, GroupTensorSquare) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        data = dict(self.data)
        for k, c in other.data.items():
            _accum(data, k, c)
        return GroupTensorSquare(self.ctx, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = F(c)
        return GroupTensorSquare(self.ctx, {k: cc * c for k, cc in self.data.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GroupTensorSquare)
            and self.ctx == other.ctx
            and self.data == other.data
        )

    def flip(self) -> "GroupTensorSquare":
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (b, a), c)
        return GroupTensorSquare(self.ctx, data)

    def lmul(self, l: GroupRingElement, r: GroupRingElement) -> "GroupTensorSquare":
        """(l x r) . V, componentwise."""
        data: dict = {}
        for (a, b), c in self.data.items():
            for wl, cl in l.data.items():
                for wr, cr in r.data.items():
                    _accum(data, (wl.concat(a), wr.concat(b)), c * cl * cr)
        return GroupTensorSquare(self.ctx, data)

    def rmul(self, l: GroupRingElement, r: GroupRingElement) -> "GroupTensorSquare":
        """V . (l x r), componentwise."""
        data: dict = {}
        for (a, b), c in self.data.items():
            for wl, cl in l.data.items():
                for wr, cr in r.data.items():
                    _accum(data, (a.concat(wl), b.concat(wr)), c * cl * cr)
        return GroupTensorSquare(self.ctx, data)

    def collapse(self) -> GroupRingElement:
        """Multiply the two slots (first times second)."""
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, a.concat(b), c)
        return GroupRingElement(self.ctx, data)

    def project_first(self) -> "GroupMixedPairL":
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (ConjClassWord(a), b), c)
        return GroupMixedPairL(self.ctx, data)

    def project_second(self) -> "GroupMixedPairR":
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (a, ConjClassWord(b)), c)
        return GroupMixedPairR(self.ctx, data)

    def __repr__(self):
        bits = [
            f"{c}*({format_group_word(a)} (x) {format_group_word(b)})"
            for (a, b), c in sorted(self.data.items())
        ]
        return " + ".join(bits) if bits else "0"


class GroupMixedPairL:
    """Element of |group ring| x (group ring)."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx, data: dict | None = None):
        self.ctx = ctx
        self.data = {k: c for k, c in (data or {}).items() if c != 0}

    def is_zero(self):
        return not self.data

    def __add__(self, other):
        if not isinstance(other, GroupMixedPairL) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        data = dict(self.data)
        for k, c in other.data.items():
            _accum(data, k, c)
        return GroupMixedPairL(self.ctx, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = F(c)
        return GroupMixedPairL(self.ctx, {k: cc * c for k, cc in self.data.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GroupMixedPairL)
            and self.ctx == other.ctx
            and self.data == other.data
        )

    def sandwich_second(self, left: FreeGroupWord, right: FreeGroupWord) -> "GroupMixedPairL":
        """(1 x left) . V . (1 x right)."""
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (a, left.concat(b).concat(right)), c)
        return GroupMixedPairL(self.ctx, data)

    def flip(self) -> "GroupMixedPairR":
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (b, a), c)
        return GroupMixedPairR(self.ctx, data)

    def project_second(self) -> "GroupCyclicPair":
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (a, ConjClassWord(b)), c)
        return GroupCyclicPair(self.ctx, data)

    def __repr__(self):
        bits = [
            f"{c}*(|{format_group_word(a)}| (x) {format_group_word(b)})"
            for (a, b), c in sorted(self.data.items())
        ]
        return " + ".join(bits) if bits else "0"


class GroupMixedPairR:
    """Element of (group ring) x |group ring|."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx, data: dict | None = None):
        self.ctx = ctx
        self.data = {k: c for k, c in (data or {}).items() if c != 0}

    def is_zero(self):
        return not self.data

    def __add__(self, other):
        if not isinstance(other, GroupMixedPairR) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        data = dict(self.data)
        for k, c in other.data.items():
            _accum(data, k, c)
        return GroupMixedPairR(self.ctx, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = F(c)
        return GroupMixedPairR(self.ctx, {k: cc * c for k, cc in self.data.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GroupMixedPairR)
            and self.ctx == other.ctx
            and self.data == other.data
        )

    def sandwich_first(self, left: FreeGroupWord, right: FreeGroupWord) -> "GroupMixedPairR":
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (left.concat(a).concat(right), b), c)
        return GroupMixedPairR(self.ctx, data)

    def flip(self) -> "GroupMixedPairL":
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (b, a), c)
        return GroupMixedPairL(self.ctx, data)

    def __repr__(self):
        bits = [
            f"{c}*({format_group_word(a)} (x) |{format_group_word(b)}|)"
            for (a, b), c in sorted(self.data.items())
        ]
        return " + ".join(bits) if bits else "0"


class GroupCyclicPair:
    """Element of |group ring| x |group ring|."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx, data: dict | None = None):
        self.ctx = ctx
        self.data = {k: c for k, c in (data or {}).items() if c != 0}

    def is_zero(self):
        return not self.data

    def __add__(self, other):
        if not isinstance(other, GroupCyclicPair) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        data = dict(self.data)
        for k, c in other.data.items():
            _accum(data, k, c)
        return GroupCyclicPair(self.ctx, data)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = F(c)
        return GroupCyclicPair(self.ctx, {k: cc * c for k, cc in self.data.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GroupCyclicPair)
            and self.ctx == other.ctx
            and self.data == other.data
        )

    def flip(self):
        data: dict = {}
        for (a, b), c in self.data.items():
            _accum(data, (b, a), c)
        return GroupCyclicPair(self.ctx, data)

    def alt(self):
        return self - self.flip()

    def __repr__(self):
        bits = [
            f"{c}*(|{format_group_word(a)}| (x) |{format_group_word(b)}|)"
            for (a, b), c in sorted(self.data.items())
        ]
        return " + ".join(bits) if bits else "0"


def class_wedge(a: ConjugacyClassElement, b: ConjugacyClassElement) -> GroupCyclicPair:
    data: dict = {}
    for wa, ca in a.data.items():
        for wb, cb in b.data.items():
            _accum(data, (wa, wb), ca * cb)
            _accum(data, (wb, wa), -ca * cb)
    return GroupCyclicPair(a.ctx, data)


# ---------------------------------------------------------------------------
# the double bracket kappa


def _block(ctx: AlgebraContext, idx: int) -> int:
    """Handle blocks first (a_i, b_i share block i), then one block per c_j."""
    if idx < ctx.g:
        return idx
    if idx < 2 * ctx.g:
        return idx - ctx.g
    return ctx.g + (idx - 2 * ctx.g)


def _sq(ctx, pairs) -> GroupTensorSquare:
    data: dict = {}
    for a, b, c in pairs:
        _accum(data, (FreeGroupWord(a), FreeGroupWord(b)), F(c))
    return GroupTensorSquare(ctx, data)


def _kappa_letters(ctx: AlgebraContext, s: tuple, t: tuple) -> GroupTensorSquare:
    si, ss = s
    ti, ts = t
    if ss < 0:
        inner = _kappa_letters(ctx, (si, 1), t)
        inv = GroupRingElement(ctx, {FreeGroupWord(((si, -1),)): F(1)})
        one = GroupRingElement.one(ctx)
        return inner.lmul(one, inv).rmul(inv, one).scale(-1)
    if ts < 0:
        inner = _kappa_letters(ctx, s, (ti, 1))
        inv = GroupRingElement(ctx, {FreeGroupWord(((ti, -1),)): F(1)})
        one = GroupRingElement.one(ctx)
        return inner.lmul(inv, one).rmul(one, inv).scale(-1)
    u = ((si, 1),)
    v = ((ti, 1),)
    g = ctx.g
    if si == ti:
        if si < g or si >= 2 * g:
            # a- and c-type diagonal: u x u - 1 x u^2
            return _sq(ctx, [(u, u, 1), ((), u + u, -1)])
        # b-type diagonal: u x u - u^2 x 1
        return _sq(ctx, [(u, u, 1), (u + u, (), -1)])
    bu, bv = _block(ctx, si), _block(ctx, ti)
    if bu == bv:
        # same handle: the (a_i, b_i) pair
        if si < g:
            return _sq(ctx, [(v, u, 1)])
        return _sq(ctx, [(v, u, 1), (u + v, (), -1), ((), u + v, -1)])
    if bu < bv:
        return GroupTensorSquare(ctx, {})
    return _sq(ctx, [(v, u, 1), (u, v, 1), (v + u, (), -1), ((), u + v, -1)])


def _kappa_words(ctx: AlgebraContext, wu: FreeGroupWord, wv: FreeGroupWord) -> GroupTensorSquare:
    out = GroupTensorSquare(ctx, {})
    for i, lu in enumerate(wu):
        for j, lv in enumerate(wv):
            core = _kappa_letters(ctx, lu, lv)
            if core.is_zero():
                continue
            left_l = GroupRingElement.from_word(ctx, FreeGroupWord(wv[:j]))
            left_r = GroupRingElement.from_word(ctx, FreeGroupWord(wu[:i]))
            right_l = GroupRingElement.from_word(ctx, FreeGroupWord(wu[i + 1:]))
            right_r = GroupRingElement.from_word(ctx, FreeGroupWord(wv[j + 1:]))
            out = out + core.lmul(left_l, left_r).rmul(right_l, right_r)
    return out


def kappa(u: GroupRingElement, v: GroupRingElement) -> GroupTensorSquare:
    """The double bracket, determined by generator values and Leibniz rules."""
    if u.ctx != v.ctx:
        raise ValueError("context mismatch")
    out = GroupTensorSquare(u.ctx, {})
    for wu, cu in u.data.items():
        for wv, cv in v.data.items():
            out = out + _kappa_words(u.ctx, wu, wv).scale(cu * cv)
    return out


def goldman(a: ConjugacyClassElement, b: ConjugacyClassElement) -> ConjugacyClassElement:
    """{|a|, |b|}: apply kappa to representatives, multiply, take classes."""
    if a.ctx != b.ctx:
        raise ValueError("context mismatch")
    data: dict = {}
    for wa, ca in a.data.items():
        for wb, cb in b.data.items():
            sq = _kappa_words(a.ctx, FreeGroupWord(wa), FreeGroupWord(wb))
            for (s, t), c in sq.data.items():
                _accum(data, ConjClassWord(s.concat(t)), c * ca * cb)
    return ConjugacyClassElement(a.ctx, data)


def goldman_action(c: ConjugacyClassElement, u: GroupRingElement) -> GroupRingElement:
    """{|c|, u}: derivation of the group ring in the second variable."""
    if c.ctx != u.ctx:
        raise ValueError("context mismatch")
    data: dict = {}
    for wc, cc in c.data.items():
        for wu, cu in u.data.items():
            sq = _kappa_words(u.ctx, FreeGroupWord(wc), FreeGroupWord(wu))
            for (s, t), k in sq.data.items():
                _accum(data, s.concat(t), k * cc * cu)
    return GroupRingElement(u.ctx, data)


# ---------------------------------------------------------------------------
# framings and the framed bracket mu


class Framing:
    """Deviation of a framing from the adapted one, as a linear form.

    p holds the values on the handle generators (indexed like x_i, y_i in the
    tensor algebra); q[j-1] = rot(|c_j|) + 1 holds the boundary values.  The
    adapted framing is p = 0, q = 0.
    """

    __slots__ = ("ctx", "p", "q")

    def __init__(self, ctx: AlgebraContext, p: dict | None = None, q: list | None = None):
        self.ctx = ctx
        self.p = {i: int(v) for i, v in (p or {}).items() if v}
        for i in self.p:
            if not 0 <= i < 2 * ctx.g:
                raise ValueError("p is supported on the handle generators")
        self.q = [int(v) for v in (q or [0] * ctx.n)]
        if len(self.q) != ctx.n:
            raise ValueError(f"expected {ctx.n} boundary values")

    @classmethod
    def adapted(cls, ctx) -> "Framing":
        return cls(ctx)

    def is_adapted(self) -> bool:
        return not self.p and not any(self.q)

    def chi_letter(self, idx: int, sign: int) -> int:
        if idx < 2 * self.ctx.g:
            return sign * self.p.get(idx, 0)
        return sign * self.q[idx - 2 * self.ctx.g]

    def chi_word(self, w) -> int:
        return sum(self.chi_letter(i, s) for i, s in w)

    def __eq__(self, other):
        return (
            isinstance(other, Framing)
            and self.ctx == other.ctx
            and self.p == other.p
            and self.q == other.q
        )

    def __repr__(self):
        return f"Framing(p={self.p}, q={self.q})"


def _mu_letter(ctx: AlgebraContext, letter: tuple) -> GroupMixedPairL:
    idx, sign = letter
    if sign > 0:
        if idx < ctx.g:
            # mu(a_i) = 1-class x a_i
            return GroupMixedPairL(ctx, {(CLASS_ONE_WORD, FreeGroupWord(((idx, 1),))): F(1)})
        if idx < 2 * ctx.g:
            # mu(b_i) = -|b_i| x 1
            return GroupMixedPairL(
                ctx, {(ConjClassWord(((idx, 1),)), FreeGroupWord()): F(-1)}
            )
        return GroupMixedPairL(ctx, {})
    # mu(a^{-1}) = -[(1 x a^{-1}) mu(a) + (|.| x 1) kappa(a^{-1}, a)] (1 x a^{-1})
    pos = _mu_letter(ctx, (idx, 1))
    winv = FreeGroupWord(((idx, -1),))
    part = pos.sandwich_second(winv, FreeGroupWord())
    ksq = _kappa_letters(ctx, (idx, -1), (idx, 1))
    part = part + ksq.project_first()
    return part.sandwich_second(FreeGroupWord(), winv).scale(-1)


def _mu_adapted_word(ctx: AlgebraContext, w: FreeGroupWord) -> GroupMixedPairL:
    out = GroupMixedPairL(ctx, {})
    for i, letter in enumerate(w):
        pre = FreeGroupWord(w[:i])
        post = FreeGroupWord(w[i + 1:])
        lm = _mu_letter(ctx, letter)
        if not lm.is_zero():
            out = out + lm.sandwich_second(pre, post)
        if i > 0:
            ks = _kappa_words(ctx, pre, FreeGroupWord((letter,)))
            if not ks.is_zero():
                out = out + ks.project_first().sandwich_second(FreeGroupWord(), post)
    return out


def mu_f(u: GroupRingElement, f: Framing) -> GroupMixedPairL:
    """The framed bracket with the base point before the loop."""
    ctx = u.ctx
    if f.ctx != ctx:
        raise ValueError("context mismatch")
    out = GroupMixedPairL(ctx, {})
    for w, c in u.data.items():
        part = _mu_adapted_word(ctx, w)
        chi = f.chi_word(w)
        if chi:
            part = part + GroupMixedPairL(ctx, {(CLASS_ONE_WORD, w): F(chi)})
        out = out + part.scale(c)
    return out


def mu_star_bullet(u: GroupRingElement, f: Framing) -> GroupMixedPairR:
    """The other-side bracket: -mu(w)^flip + w x 1-class - 1 x |w| per word."""
    ctx = u.ctx
    out = GroupMixedPairR(ctx, {})
    for w, c in u.data.items():
        single = GroupRingElement.from_word(ctx, w)
        part = mu_f(single, f).flip().scale(-1)
        part = part + GroupMixedPairR(ctx, {(w, CLASS_ONE_WORD): F(1)})
        part = part + GroupMixedPairR(ctx, {(FreeGroupWord(), ConjClassWord(w)): F(-1)})
        out = out + part.scale(c)
    return out


def delta_f(c: ConjugacyClassElement, f: Framing) -> GroupCyclicPair:
    """Framed cobracket on conjugacy classes."""
    ctx = c.ctx
    out = GroupCyclicPair(ctx, {})
    for w, coeff in c.data.items():
        word = FreeGroupWord(w)
        m = mu_f(GroupRingElement.from_word(ctx, word), f)
        part = m.project_second().alt()
        part = part + GroupCyclicPair(
            ctx, {(ConjClassWord(w), CLASS_ONE_WORD): F(1), (CLASS_ONE_WORD, ConjClassWord(w)): F(-1)}
        )
        out = out + part.scale(coeff)
    return out


def delta_action(c: ConjugacyClassElement, pair: GroupCyclicPair) -> GroupCyclicPair:
    """|c| acting on a pair by the Goldman bracket in each slot."""
    ctx = c.ctx
    out = GroupCyclicPair(ctx, {})
    for (a, b), k in pair.data.items():
        ea = ConjugacyClassElement(ctx, {a: F(1)})
        eb = ConjugacyClassElement(ctx, {b: F(1)})
        for w, cw in goldman(c, ea).data.items():
            _accum(out.data, (w, b), k * cw)
        for w, cw in goldman(c, eb).data.items():
            _accum(out.data, (a, w), k * cw)
    out.data = {kk: vv for kk, vv in out.data.items() if vv != 0}
    return out


# ---------------------------------------------------------------------------
# expansions into the tensor algebra


class Expansion:
    """Group homomorphism into the group-like elements of the tensor algebra.

    kinds: "exp" sends each generator to the exponential of its letter;
    "std" sends it to 1 + letter; "twisted" postcomposes the exponential
    expansion with the inverse of a tangential automorphism.
    """

    __slots__ = ("ctx", "kind", "F", "_Finv", "_cache")

    def __init__(self, ctx: AlgebraContext, kind: str = "exp", F: TAutElement | None = None):
        if kind not in ("exp", "std", "twisted"):
            raise ValueError(f"unknown expansion kind: {kind}")
        if kind == "twisted":
            if F is None:
                raise ValueError("twisted expansion needs an automorphism")
            if F.ctx != ctx:
                F = rebase_taut(F, ctx)
        self.ctx = ctx
        self.kind = kind
        self.F = F
        self._Finv = None
        self._cache: dict = {}

    def _letter_image(self, idx: int, sign: int) -> TensorElement:
        key = (idx, sign)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        ctx = self.ctx
        gen = ctx.gen(idx)
        if self.kind == "std":
            if sign > 0:
                img = ctx.one() + gen
            else:
                img = ctx.zero()
                term = ctx.one()
                wt = ctx.gen_weight(idx)
                for k in range(0, ctx.D // wt + 1):
                    img = img + term.scale(F((-1) ** k))
                    term = term * gen
        else:
            img = texp(gen if sign > 0 else -1 * gen)
            if self.kind == "twisted":
                if self._Finv is None:
                    self._Finv = self.F.invert()
                img = self._Finv.apply(img)
        self._cache[key] = img
        return img

    def apply(self, u: GroupRingElement) -> TensorElement:
        ctx = self.ctx
        out = ctx.zero()
        for w, c in u.data.items():
            img = ctx.one()
            for idx, sign in w:
                img = img * self._letter_image(idx, sign)
            out = out + img.scale(c)
        return out

    def apply_class(self, c: ConjugacyClassElement) -> CyclicElement:
        out = CyclicElement(self.ctx, {})
        for w, coeff in c.data.items():
            img = self.apply(GroupRingElement.from_word(self.ctx, FreeGroupWord(w)))
            out = out + project(img).scale(coeff)
        return out


def apply_expansion(theta: Expansion, u: GroupRingElement, D: int | None = None) -> TensorElement:
    if D is not None and D != theta.ctx.D:
        ctx = AlgebraContext(theta.ctx.g, theta.ctx.n, D)
        theta = Expansion(ctx, theta.kind, theta.F)
    return theta.apply(u)


def expand_square(theta: Expansion, sq: GroupTensorSquare) -> TensorSquare:
    ctx = theta.ctx
    out = TensorSquare(ctx, {})
    for (a, b), c in sq.data.items():
        ea = theta.apply(GroupRingElement.from_word(ctx, a))
        eb = theta.apply(GroupRingElement.from_word(ctx, b))
        out = out + tensor(ea, eb).scale(c)
    return out


def expand_mixed_l(theta: Expansion, mp: GroupMixedPairL) -> HalfPairL:
    ctx = theta.ctx
    out = HalfPairL(ctx, {})
    for (a, b), c in mp.data.items():
        ca = theta.apply_class(ConjugacyClassElement(ctx, {a: F(1)}))
        eb = theta.apply(GroupRingElement.from_word(ctx, b))
        for cw, c1 in ca.data.items():
            for w, c2 in eb.data.items():
                if ctx.word_weight(cw) + ctx.word_weight(w) <= ctx.D:
                    _accum(out.data, (cw, w), c * c1 * c2)
    out.data = {k: v for k, v in out.data.items() if v != 0}
    return out


def expand_mixed_r(theta: Expansion, mp: GroupMixedPairR) -> HalfPairR:
    ctx = theta.ctx
    out = HalfPairR(ctx, {})
    for (a, b), c in mp.data.items():
        ea = theta.apply(GroupRingElement.from_word(ctx, a))
        cb = theta.apply_class(ConjugacyClassElement(ctx, {b: F(1)}))
        for w, c1 in ea.data.items():
            for cw, c2 in cb.data.items():
                if ctx.word_weight(w) + ctx.word_weight(cw) <= ctx.D:
                    _accum(out.data, (w, cw), c * c1 * c2)
    out.data = {k: v for k, v in out.data.items() if v != 0}
    return out


def expand_cyclic_pair(theta: Expansion, pair: GroupCyclicPair) -> CyclicPair:
    ctx = theta.ctx
    out = CyclicPair(ctx, {})
    for (a, b), c in pair.data.items():
        ca = theta.apply_class(ConjugacyClassElement(ctx, {a: F(1)}))
        cb = theta.apply_class(ConjugacyClassElement(ctx, {b: F(1)}))
        for cw1, c1 in ca.data.items():
            for cw2, c2 in cb.data.items():
                if ctx.word_weight(cw1) + ctx.word_weight(cw2) <= ctx.D:
                    _accum(out.data, (cw1, cw2), c * c1 * c2)
    out.data = {k: v for k, v in out.data.items() if v != 0}
    return out


def weight_of(u: GroupRingElement, D: int = 6) -> int:
    """Filtration weight, detected through the standard expansion.

    Returns D when the image vanishes below the truncation bound (meaning
    "at least D").
    """
    if u.is_zero():
        return D
    ctx = AlgebraContext(u.ctx.g, u.ctx.n, D)
    theta = Expansion(ctx, "std")
    rebased = GroupRingElement(ctx, dict(u.data))
    img = theta.apply(rebased)
    if img.is_zero():
        return D
    return img.min_weight()


# ---------------------------------------------------------------------------
# grammar: a/b/c with capitals for inverses, e.g. "a1*b1*A1*B1*c1"

_LETTER_RE = re.compile(r"([abcABC])(\d+)$")


def format_group_word(w) -> str:
    if len(w) == 0:
        return "1"
    bits = []
    for idx, sign in w:
        ctx_letter = None
        # recover the printable name from the index layout lazily: the word
        # does not carry its context, so infer from stored index at print time
        bits.append((idx, sign))
    return "*".join(_letter_str(i, s) for i, s in w)


_PRINT_CTX: dict = {}


def _letter_str(idx: int, sign: int) -> str:
    g, n = _PRINT_CTX.get("g", 0), _PRINT_CTX.get("n", 0)
    if g or n:
        if idx < g:
            name, num = "a", idx + 1
        elif idx < 2 * g:
            name, num = "b", idx - g + 1
        else:
            name, num = "c", idx - 2 * g + 1
    else:
        name, num = "g", idx
    return (name.upper() if sign < 0 else name) + str(num)


def set_print_context(ctx: AlgebraContext):
    _PRINT_CTX["g"], _PRINT_CTX["n"] = ctx.g, ctx.n


def word_str(ctx: AlgebraContext, w) -> str:
    if len(w) == 0:
        return "1"
    bits = []
    for idx, sign in w:
        if idx < ctx.g:
            name, num = "a", idx + 1
        elif idx < 2 * ctx.g:
            name, num = "b", idx - ctx.g + 1
        else:
            name, num = "c", idx - 2 * ctx.g + 1
        bits.append((name.upper() if sign < 0 else name) + str(num))
    return "*".join(bits)


def parse_group_word(ctx: AlgebraContext, text: str) -> FreeGroupWord:
    text = text.strip()
    if text == "1":
        return FreeGroupWord()
    letters = []
    for tok in text.split("*"):
        tok = tok.strip()
        m = _LETTER_RE.match(tok)
        if not m:
            raise ValueError(f"bad group letter: {tok!r}")
        name, num = m.group(1), int(m.group(2))
        sign = -1 if name.isupper() else 1
        name = name.lower()
        if name == "a":
            idx = ctx.x_index(num)
        elif name == "b":
            idx = ctx.y_index(num)
        else:
            idx = ctx.z_index(num)
        letters.append((idx, sign))
    return FreeGroupWord(tuple(letters))


_TERM_SPLIT = re.compile(r"(?=[+-])")


def format_group_element(e: GroupRingElement) -> str:
    if not e.data:
        return "0"
    bits = []
    for w in sorted(e.data, key=lambda w: (len(w), w)):
        c = e.data[w]
        body = word_str(e.ctx, w)
        if c == 1:
            term = body
        elif c == -1:
            term = f"-{body}"
        else:
            term = f"{c}*{body}"
        bits.append(term)
    out = " + ".join(bits).replace("+ -", "- ")
    return out


def parse_group_element(ctx: AlgebraContext, text: str) -> GroupRingElement:
    text = text.strip()
    if text == "0":
        return GroupRingElement(ctx, {})
    chunks = [c for c in _TERM_SPLIT.split(text.replace(" ", "")) if c]
    data: dict = {}
    for chunk in chunks:
        sign = F(1)
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = F(-1)
            chunk = chunk[1:]
        m = re.match(r"^(\d+(?:/\d+)?)\*(.*)$", chunk)
        if m:
            coeff = sign * F(m.group(1))
            body = m.group(2)
        else:
            coeff = sign
            body = chunk
        _accum(data, parse_group_word(ctx, body), coeff)
    return GroupRingElement(ctx, data)


def format_class_element(e: ConjugacyClassElement) -> str:
    if not e.data:
        return "0"
    bits = []
    for w in sorted(e.data, key=lambda w: (len(w), w)):
        c = e.data[w]
        body = f"|{word_str(e.ctx, w)}|"
        if c == 1:
            term = body
        elif c == -1:
            term = f"-{body}"
        else:
            term = f"{c}*{body}"
        bits.append(term)
    return " + ".join(bits).replace("+ -", "- ")


def parse_class_element(ctx: AlgebraContext, text: str) -> ConjugacyClassElement:
    text = text.strip()
    if text == "0":
        return ConjugacyClassElement(ctx, {})
    data: dict = {}
    pos = 0
    compact = text.replace(" ", "")
    pattern = re.compile(r"([+-]?)((?:\d+(?:/\d+)?)\*)?\|([^|]*)\|")
    while pos < len(compact):
        m = pattern.match(compact, pos)
        if not m:
            raise ValueError(f"bad class element near: {compact[pos:]!r}")
        sign = F(-1) if m.group(1) == "-" else F(1)
        coeff = sign * (F(m.group(2)[:-1]) if m.group(2) else F(1))
        _accum(data, ConjClassWord(parse_group_word(ctx, m.group(3))), coeff)
        pos = m.end()
    return ConjugacyClassElement(ctx, data)
