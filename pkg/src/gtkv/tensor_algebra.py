"""Truncated free tensor algebra over Q with its Hopf structure.

The model algebra A for a surface of genus g with n+1 boundary components is
the completed free associative algebra on x_1..x_g, y_1..y_g, z_1..z_n,
graded by weight: wt(x_i) = wt(y_i) = 1, wt(z_j) = 2.  Everything here is
truncated at a fixed total weight D and computed exactly over Fraction.

Generators are primitive for the coproduct.  The module also provides the
one-variable power series (as exact coefficient lists) used throughout:
g(t) = t/(1-e^{-t}), r(s) = log((e^s-1)/s), s(z) = 1/(1-e^{-z}) - 1/z.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

F = Fraction
_ZERO = F(0)
_ONE = F(1)


class Word(tuple):
    """A basis word of the free algebra: a tuple of generator indices."""

    def __new__(cls, letters=()):
        return super().__new__(cls, tuple(int(c) for c in letters))

    def concat(self, other) -> "Word":
        return Word(tuple(self) + tuple(other))

    def reversed(self) -> "Word":
        return Word(tuple(self)[::-1])


EMPTY = Word()


def word_key(w) -> tuple:
    """Canonical order on basis words: length first, then letter indices."""
    return (len(w), tuple(w))


class AlgebraContext:
    """Fixed surface type (g, n) and truncation weight D.

    Generator indices: 0..g-1 are the x_i, g..2g-1 the y_i, 2g..2g+n-1 the
    z_j.  x and y have weight 1, z has weight 2.
    """

    __slots__ = ("g", "n", "D", "_basis_cache", "_lyndon_cache")

    def __init__(self, g: int, n: int, D: int):
        if g < 0 or n < 0 or D < 0:
            raise ValueError("g, n, D must be nonnegative")
        self.g = g
        self.n = n
        self.D = D
        self._basis_cache: dict[int, list[Word]] = {}
        self._lyndon_cache: dict[int, list] = {}

    # identity of a context is its parameters
    def __eq__(self, other):
        return (
            isinstance(other, AlgebraContext)
            and (self.g, self.n, self.D) == (other.g, other.n, other.D)
        )

    def __hash__(self):
        return hash((self.g, self.n, self.D))

    def __repr__(self):
        return f"AlgebraContext(g={self.g}, n={self.n}, D={self.D})"

    @property
    def num_gens(self) -> int:
        return 2 * self.g + self.n

    def gen_weight(self, i: int) -> int:
        if not 0 <= i < self.num_gens:
            raise IndexError(f"generator index {i} out of range")
        return 2 if i >= 2 * self.g else 1

    def word_weight(self, w) -> int:
        return sum(self.gen_weight(c) for c in w)

    def x_index(self, i: int) -> int:
        if not 1 <= i <= self.g:
            raise IndexError(f"x{i} not present at genus {self.g}")
        return i - 1

    def y_index(self, i: int) -> int:
        if not 1 <= i <= self.g:
            raise IndexError(f"y{i} not present at genus {self.g}")
        return self.g + i - 1

    def z_index(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise IndexError(f"z{j} not present with n={self.n}")
        return 2 * self.g + j - 1

    def gen_name(self, i: int) -> str:
        g = self.g
        if i < g:
            return f"x{i + 1}"
        if i < 2 * g:
            return f"y{i - g + 1}"
        if i < self.num_gens:
            return f"z{i - 2 * g + 1}"
        raise IndexError(f"generator index {i} out of range")

    def gen_index(self, name: str) -> int:
        m = re.fullmatch(r"([xyz])(\d+)", name)
        if not m:
            raise ValueError(f"not a generator name: {name!r}")
        kind, num = m.group(1), int(m.group(2))
        try:
            if kind == "x":
                return self.x_index(num)
            if kind == "y":
                return self.y_index(num)
            return self.z_index(num)
        except IndexError as exc:
            raise ValueError(str(exc)) from None

    def gen(self, i: int) -> "TensorElement":
        self.gen_weight(i)
        return TensorElement(self, {Word((i,)): _ONE})

    def gens(self) -> list["TensorElement"]:
        return [self.gen(i) for i in range(self.num_gens)]

    def one(self) -> "TensorElement":
        return TensorElement(self, {EMPTY: _ONE})

    def zero(self) -> "TensorElement":
        return TensorElement(self, {})

    def basis_words(self, weight: int) -> list[Word]:
        """All basis words of exact weight, in canonical order."""
        if weight < 0:
            return []
        cached = self._basis_cache.get(weight)
        if cached is not None:
            return cached
        if weight == 0:
            out = [EMPTY]
        else:
            out = []
            for i in range(self.num_gens):
                rem = weight - self.gen_weight(i)
                if rem < 0:
                    continue
                for tail in self.basis_words(rem):
                    out.append(Word((i,) + tuple(tail)))
            out.sort(key=word_key)
        self._basis_cache[weight] = out
        return out

    def basis_words_up_to(self, max_weight: int) -> list[Word]:
        out = []
        for w in range(max_weight + 1):
            out.extend(self.basis_words(w))
        return out

    def lyndon_basis(self, weight: int) -> list[tuple[Word, "TensorElement"]]:
        """Lyndon-word basis of the primitive (free Lie) part in one weight.

        Returns (word, bracketing) pairs sorted by the canonical word order;
        the bracketing is the standard-factorization iterated commutator.
        """
        cached = self._lyndon_cache.get(weight)
        if cached is not None:
            return cached
        out = []
        for w in _lyndon_words(self.num_gens, weight, self.gen_weight):
            out.append((Word(w), _lyndon_bracket(self, w)))
        out.sort(key=lambda p: word_key(p[0]))
        self._lyndon_cache[weight] = out
        return out


def _lyndon_words(k: int, weight: int, wt) -> list[tuple[int, ...]]:
    """Lyndon words over 0..k-1 of given total weight (Duval's algorithm)."""
    if k == 0 or weight <= 0:
        return []
    maxlen = weight  # each letter has weight >= 1
    words = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if sum(wt(c) for c in w) == weight:
            words.append(tuple(w))
        # extend periodically up to maxlen
        while len(w) < maxlen:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return sorted(words)


def _lyndon_bracket(ctx: AlgebraContext, w: tuple) -> "TensorElement":
    if len(w) == 1:
        return ctx.gen(w[0])
    # standard factorization: w = uv with v the longest proper Lyndon suffix
    for i in range(1, len(w)):
        v = w[i:]
        if all(v < v[j:] for j in range(1, len(v))):
            left = _lyndon_bracket(ctx, w[:i])
            right = _lyndon_bracket(ctx, v)
            return left * right - right * left
    raise AssertionError(f"no standard factorization for {w}")


class LinearCombination:
    """Shared base for exact sparse linear combinations keyed by basis data."""

    __slots__ = ("ctx", "data")

    def __init__(self, ctx, data: dict | None = None):
        self.ctx = ctx
        self.data = {}
        if data:
            for k, v in data.items():
                fv = Fraction(v)
                if fv != 0:
                    self.data[k] = fv

    def _new(self, data: dict):
        obj = object.__new__(type(self))
        obj.ctx = self.ctx
        obj.data = data
        return obj

    def _check(self, other):
        if type(other) is not type(self) or other.ctx != self.ctx:
            raise ValueError(
                f"operands must share type and context: {type(self).__name__}/{self.ctx} "
                f"vs {type(other).__name__}/{getattr(other, 'ctx', None)}"
            )

    def is_zero(self) -> bool:
        return not self.data

    def coeff(self, key) -> Fraction:
        return self.data.get(key, _ZERO)

    def __add__(self, other):
        self._check(other)
        data = dict(self.data)
        for k, v in other.data.items():
            nv = data.get(k, _ZERO) + v
            if nv == 0:
                data.pop(k, None)
            else:
                data[k] = nv
        return self._new(data)

    def __sub__(self, other):
        self._check(other)
        data = dict(self.data)
        for k, v in other.data.items():
            nv = data.get(k, _ZERO) - v
            if nv == 0:
                data.pop(k, None)
            else:
                data[k] = nv
        return self._new(data)

    def __neg__(self):
        return self._new({k: -v for k, v in self.data.items()})

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return self._new({})
        return self._new({k: c * v for k, v in self.data.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.ctx == other.ctx
            and self.data == other.data
        )

    def __hash__(self):
        raise TypeError(f"{type(self).__name__} is unhashable")


class TensorElement(LinearCombination):
    """Element of the truncated free algebra A."""

    def terms(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.data.items(), key=lambda kv: word_key(kv[0]))

    def weight_components(self) -> dict[int, "TensorElement"]:
        out: dict[int, dict] = {}
        for w, c in self.data.items():
            out.setdefault(self.ctx.word_weight(w), {})[w] = c
        return {k: self._new(d) for k, d in sorted(out.items())}

    def component(self, weight: int) -> "TensorElement":
        return self._new(
            {w: c for w, c in self.data.items() if self.ctx.word_weight(w) == weight}
        )

    def min_weight(self) -> int | None:
        """Lowest weight with a nonzero component, or None for zero."""
        if not self.data:
            return None
        return min(self.ctx.word_weight(w) for w in self.data)

    def truncate(self, max_weight: int) -> "TensorElement":
        return self._new(
            {w: c for w, c in self.data.items() if self.ctx.word_weight(w) <= max_weight}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        ctx = self.ctx
        D = ctx.D
        data: dict = {}
        for w1, c1 in self.data.items():
            wt1 = ctx.word_weight(w1)
            for w2, c2 in other.data.items():
                if wt1 + ctx.word_weight(w2) > D:
                    continue
                key = Word(tuple(w1) + tuple(w2))
                nv = data.get(key, _ZERO) + c1 * c2
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return self._new(data)

    def eps(self) -> Fraction:
        """Counit: the coefficient of the empty word."""
        return self.data.get(EMPTY, _ZERO)

    def antipode(self) -> "TensorElement":
        return self._new(
            {Word(tuple(w)[::-1]): (c if len(w) % 2 == 0 else -c) for w, c in self.data.items()}
        )

    def coproduct(self) -> "TensorSquare":
        """Coproduct with every generator primitive (unshuffle over subsets)."""
        ctx = self.ctx
        data: dict = {}
        for w, c in self.data.items():
            k = len(w)
            for mask in range(1 << k):
                left = tuple(w[i] for i in range(k) if mask & (1 << i))
                right = tuple(w[i] for i in range(k) if not mask & (1 << i))
                key = (Word(left), Word(right))
                nv = data.get(key, _ZERO) + c
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return TensorSquare(ctx, data)

    def tilde_coproduct(self) -> "TensorSquare":
        """Reduced variant (1 x antipode) after the coproduct."""
        ctx = self.ctx
        data: dict = {}
        for w, c in self.data.items():
            k = len(w)
            for mask in range(1 << k):
                left = tuple(w[i] for i in range(k) if mask & (1 << i))
                right = tuple(w[i] for i in range(k) if not mask & (1 << i))
                sign = -1 if len(right) % 2 else 1
                key = (Word(left), Word(right[::-1]))
                nv = data.get(key, _ZERO) + sign * c
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return TensorSquare(ctx, data)

    def is_primitive(self) -> bool:
        if self.eps() != 0:
            return False
        target = tensor(self, self.ctx.one()) + tensor(self.ctx.one(), self)
        return self.coproduct() == target

    def is_group_like(self) -> bool:
        if self.eps() != 1:
            return False
        return self.coproduct() == tensor(self, self)

    def substitute(self, target_ctx: AlgebraContext, images: dict[int, "TensorElement"]) -> "TensorElement":
        """Algebra map determined by generator images (letterwise product).

        Every generator index appearing in self must have an image living in
        target_ctx; products are truncated at target_ctx.D.  This commutes
        with products exactly only when each image has weight at least the
        weight of its generator (otherwise deepen the source truncation).
        """
        one = target_ctx.one()
        out = target_ctx.zero()
        for w, c in self.data.items():
            acc = one
            for letter in w:
                if letter not in images:
                    raise KeyError(f"no image for generator index {letter}")
                acc = acc * images[letter]
                if acc.is_zero():
                    break
            out = out + acc.scale(c)
        return out

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"TensorElement({format_element(self)})"


class TensorSquare(LinearCombination):
    """Element of A tensor A, truncated by total weight."""

    def pair_weight(self, key) -> int:
        return self.ctx.word_weight(key[0]) + self.ctx.word_weight(key[1])

    def terms(self):
        return sorted(
            self.data.items(), key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1]))
        )

    def component(self, weight: int) -> "TensorSquare":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) == weight}
        )

    def flip(self) -> "TensorSquare":
        """(u tensor v) -> (v tensor u)."""
        data: dict = {}
        for (a, b), c in self.data.items():
            key = (b, a)
            data[key] = data.get(key, _ZERO) + c
        return self._new({k: v for k, v in data.items() if v != 0})

    def __mul__(self, other):
        """Componentwise product (u tensor v)(u' tensor v') = uu' tensor vv'."""
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        ctx = self.ctx
        D = ctx.D
        data: dict = {}
        for (a1, b1), c1 in self.data.items():
            w1 = ctx.word_weight(a1) + ctx.word_weight(b1)
            for (a2, b2), c2 in other.data.items():
                if w1 + ctx.word_weight(a2) + ctx.word_weight(b2) > D:
                    continue
                key = (Word(tuple(a1) + tuple(a2)), Word(tuple(b1) + tuple(b2)))
                nv = data.get(key, _ZERO) + c1 * c2
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return self._new(data)

    def diamond(self, other: "TensorSquare") -> "TensorSquare":
        """Insertion product: (a' x a'') diamond (b' x b'') = a'b' x b''a''."""
        self._check(other)
        ctx = self.ctx
        D = ctx.D
        data: dict = {}
        for (a1, a2), c1 in self.data.items():
            w1 = ctx.word_weight(a1) + ctx.word_weight(a2)
            for (b1, b2), c2 in other.data.items():
                if w1 + ctx.word_weight(b1) + ctx.word_weight(b2) > D:
                    continue
                key = (Word(tuple(a1) + tuple(b1)), Word(tuple(b2) + tuple(a2)))
                nv = data.get(key, _ZERO) + c1 * c2
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return self._new(data)

    def collapse(self) -> TensorElement:
        """Multiplication map A tensor A -> A."""
        ctx = self.ctx
        data: dict = {}
        for (a, b), c in self.data.items():
            key = Word(tuple(a) + tuple(b))
            nv = data.get(key, _ZERO) + c
            if nv == 0:
                data.pop(key, None)
            else:
                data[key] = nv
        return TensorElement(ctx, data)

    def eps_right(self) -> TensorElement:
        """(id tensor counit)."""
        data: dict = {}
        for (a, b), c in self.data.items():
            if len(b) == 0:
                data[a] = data.get(a, _ZERO) + c
        return TensorElement(self.ctx, {k: v for k, v in data.items() if v != 0})

    def eps_left(self) -> TensorElement:
        """(counit tensor id)."""
        data: dict = {}
        for (a, b), c in self.data.items():
            if len(a) == 0:
                data[b] = data.get(b, _ZERO) + c
        return TensorElement(self.ctx, {k: v for k, v in data.items() if v != 0})

    def truncate(self, max_weight: int) -> "TensorSquare":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) <= max_weight}
        )

    def __str__(self):
        if not self.data:
            return "0"
        parts = []
        for (a, b), c in self.terms():
            sa = _format_single_word(self.ctx, a)
            sb = _format_single_word(self.ctx, b)
            parts.append((c, f"({sa})@({sb})"))
        return _join_terms(parts)

    def __repr__(self):
        return f"TensorSquare({self})"


def tensor(a: TensorElement, b: TensorElement) -> TensorSquare:
    if a.ctx != b.ctx:
        raise ValueError("tensor factors must share a context")
    ctx = a.ctx
    D = ctx.D
    data: dict = {}
    for w1, c1 in a.data.items():
        wt1 = ctx.word_weight(w1)
        for w2, c2 in b.data.items():
            if wt1 + ctx.word_weight(w2) > D:
                continue
            data[(w1, w2)] = c1 * c2
    return TensorSquare(ctx, data)


def outer_commutator(g: TensorElement, V: TensorSquare) -> TensorSquare:
    """[g, V] = (g tensor 1) V - V (1 tensor g), acting on the outer slots."""
    one = g.ctx.one()
    return tensor(g, one) * V - V * tensor(one, g)


def commutator(a: TensorElement, b: TensorElement) -> TensorElement:
    return a * b - b * a


def ad_series(coeffs, a: TensorElement, b: TensorElement) -> TensorElement:
    """Apply f(ad_a) to b for f given by its coefficient list."""
    out = a.ctx.zero()
    term = b
    for k, c in enumerate(coeffs):
        if k > 0:
            term = commutator(a, term)
            if term.is_zero():
                break
        if c != 0:
            out = out + term.scale(c)
    return out


def texp(a: TensorElement) -> TensorElement:
    """Exponential of an augmentation-free element, truncated."""
    if a.eps() != 0:
        raise ValueError("exp requires vanishing constant term")
    ctx = a.ctx
    out = ctx.one()
    term = ctx.one()
    for k in range(1, ctx.D + 1):
        term = term * a
        if term.is_zero():
            break
        out = out + term.scale(F(1, _factorial(k)))
    return out


def tlog(a: TensorElement) -> TensorElement:
    """Logarithm of an element with constant term 1, truncated."""
    if a.eps() != 1:
        raise ValueError("log requires constant term 1")
    ctx = a.ctx
    m = a - ctx.one()
    out = ctx.zero()
    term = ctx.one()
    for k in range(1, ctx.D + 1):
        term = term * m
        if term.is_zero():
            break
        out = out + term.scale(F((-1) ** (k + 1), k))
    return out


def bch(a: TensorElement, b: TensorElement) -> TensorElement:
    """Baker-Campbell-Hausdorff product log(e^a e^b)."""
    return tlog(texp(a) * texp(b))


def power_series_apply(coeffs, u: TensorElement) -> TensorElement:
    """f(u) = sum_k coeffs[k] u^k for an augmentation-free u."""
    ctx = u.ctx
    if u.eps() != 0 and len(coeffs) > ctx.D + 1:
        raise ValueError("series substitution needs vanishing constant term")
    out = ctx.zero()
    term = ctx.one()
    for k, c in enumerate(coeffs):
        if k > 0:
            term = term * u
            if term.is_zero():
                break
        if c != 0:
            out = out + term.scale(c)
    return out


def special_elements(ctx: AlgebraContext) -> dict[str, TensorElement]:
    """The quadratic boundary element omega and its group-like refinement xi.

    omega = sum_i [x_i, y_i] + sum_j z_j;  xi is the logarithm of the product
    of commutators of exponentials times the exponentials of the z_j, and
    agrees with omega up to weight 2.
    """
    omega = ctx.zero()
    prod = ctx.one()
    for i in range(1, ctx.g + 1):
        x = ctx.gen(ctx.x_index(i))
        y = ctx.gen(ctx.y_index(i))
        omega = omega + commutator(x, y)
        prod = prod * texp(x) * texp(y) * texp(-1 * x) * texp(-1 * y)
    for j in range(1, ctx.n + 1):
        z = ctx.gen(ctx.z_index(j))
        omega = omega + z
        prod = prod * texp(z)
    xi = tlog(prod)
    return {"omega": omega, "xi": xi}


# ---------------------------------------------------------------------------
# printing and parsing


def _format_coeff(c: Fraction) -> str:
    return str(c)


def _format_single_word(ctx: AlgebraContext, w) -> str:
    if len(w) == 0:
        return "1"
    return "*".join(ctx.gen_name(i) for i in w)


def _join_terms(parts: list[tuple[Fraction, str]]) -> str:
    out = []
    for c, body in parts:
        mag = -c if c < 0 else c
        if body == "1":
            piece = _format_coeff(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{_format_coeff(mag)}*{body}"
        if not out:
            out.append(piece if c > 0 else f"-{piece}")
        else:
            out.append(f"+ {piece}" if c > 0 else f"- {piece}")
    return " ".join(out)


def format_element(elem: TensorElement) -> str:
    if not elem.data:
        return "0"
    parts = [
        (c, _format_single_word(elem.ctx, w))
        for w, c in sorted(elem.data.items(), key=lambda kv: word_key(kv[0]))
    ]
    return _join_terms(parts)


_TERM_SPLIT = re.compile(r"(?=[+-])")
_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")


def parse_element(ctx: AlgebraContext, text: str) -> TensorElement:
    """Parse the textual element grammar, e.g. '1/2*x1*y1 - z1 + 3'."""
    s = text.strip()
    if not s:
        raise ValueError("empty element string")
    if s == "0":
        return ctx.zero()
    compact = s.replace(" ", "")
    out = ctx.zero()
    for chunk in _TERM_SPLIT.split(compact):
        if not chunk:
            continue
        sign = _ONE
        body = chunk
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        if not body:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = sign
        word: list[int] = []
        for tok in body.split("*"):
            if not tok:
                raise ValueError(f"empty factor in {text!r}")
            if _RATIONAL.fullmatch(tok):
                coeff *= Fraction(tok)
            elif tok == "1":
                continue
            else:
                word.append(ctx.gen_index(tok))
        w = Word(word)
        if ctx.word_weight(w) > ctx.D:
            raise ValueError(f"word {body!r} exceeds truncation weight {ctx.D}")
        out = out + TensorElement(ctx, {w: coeff})
    return out


@lru_cache(maxsize=None)
def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# exact one-variable power series on coefficient lists


def series_product(a: list[Fraction], b: list[Fraction], order: int) -> list[Fraction]:
    out = [_ZERO] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            out[i + j] += ai * bj
    return out


def series_inverse(a: list[Fraction], order: int) -> list[Fraction]:
    if not a or a[0] == 0:
        raise ValueError("series inverse needs nonzero constant term")
    out = [_ZERO] * (order + 1)
    out[0] = 1 / a[0]
    for k in range(1, order + 1):
        acc = _ZERO
        for i in range(1, k + 1):
            if i < len(a):
                acc += a[i] * out[k - i]
        out[k] = -acc / a[0]
    return out


def series_log1p(u: list[Fraction], order: int) -> list[Fraction]:
    """log(1 + u(t)) for u with u[0] = 0."""
    if u and u[0] != 0:
        raise ValueError("series log needs vanishing constant term")
    out = [_ZERO] * (order + 1)
    power = [_ZERO] * (order + 1)
    power[0] = _ONE  # u^0
    for k in range(1, order + 1):
        power = series_product(power, u, order)
        c = F((-1) ** (k + 1), k)
        for i in range(order + 1):
            out[i] += c * power[i]
    return out


def series_g(order: int) -> list[Fraction]:
    """g(t) = t/(1 - e^{-t}) = 1 + t/2 + t^2/12 - t^4/720 + ..."""
    denom = [F((-1) ** k, _factorial(k + 1)) for k in range(order + 1)]
    # denom = (1 - e^{-t})/t
    return series_inverse(denom, order)


def series_r(order: int) -> list[Fraction]:
    """r(s) = log((e^s - 1)/s) = s/2 + s^2/24 - s^4/2880 + ..."""
    u = [F(1, _factorial(k + 1)) for k in range(order + 1)]
    u[0] = _ZERO  # (e^s-1)/s - 1
    return series_log1p(u, order)


def series_s(order: int) -> list[Fraction]:
    """s(z) = 1/(1-e^{-z}) - 1/z = 1/2 + z/12 - z^3/720 + ..."""
    g = series_g(order + 1)
    return [g[k + 1] for k in range(order + 1)]


def series_h_even(order: int) -> list[Fraction]:
    """(r(s) - s/2)/2 = s^2/48 - s^4/5760 + ...; even part of r/2."""
    r = series_r(order)
    out = [c / 2 for c in r]
    if order >= 1:
        out[1] -= F(1, 4)
    return out
