"""Cyclic quotient |A| = A/[A,A] and its pairings with A.

A basis of |A| is given by necklaces: words up to cyclic rotation, stored as
the lexicographically least rotation.  The empty cyclic word is kept as an
ordinary basis element (written |1|); nothing is quotiented away in weight 0.

Containers:
  CyclicElement   linear combination of cyclic words          (|A|)
  CyclicPair      combination of pairs of cyclic words        (|A| x |A|)
  HalfPairL       cyclic word tensor ordinary word            (|A| x A)
  HalfPairR       ordinary word tensor cyclic word            (A x |A|)

The embedding of |A| into |A| x |A| induced by the reduced coproduct is
injective weight by weight; retracting along it is an exact linear solve and
failure reports the nonzero residual.
"""
from __future__ import annotations

from fractions import Fraction

from .exactlin import SparseMatrix, solve_affine
from .tensor_algebra import (
    AlgebraContext,
    LinearCombination,
    TensorElement,
    TensorSquare,
    Word,
    word_key,
    _join_terms,
)

F = Fraction
_ZERO = F(0)


class CyclicWord(tuple):
    """A necklace: tuple of generator indices, least rotation stored."""

    def __new__(cls, letters=()):
        t = tuple(int(c) for c in letters)
        if t:
            t = min(t[k:] + t[:k] for k in range(len(t)))
        return super().__new__(cls, t)


CYCLIC_EMPTY = CyclicWord()


def rotations(w) -> list[tuple]:
    t = tuple(w)
    return [t[k:] + t[:k] for k in range(len(t))]


class CyclicElement(LinearCombination):
    """Element of |A|."""

    def terms(self):
        return sorted(self.data.items(), key=lambda kv: word_key(kv[0]))

    def weight_components(self) -> dict[int, "CyclicElement"]:
        out: dict[int, dict] = {}
        for w, c in self.data.items():
            out.setdefault(self.ctx.word_weight(w), {})[w] = c
        return {k: self._new(d) for k, d in sorted(out.items())}

    def component(self, weight: int) -> "CyclicElement":
        return self._new(
            {w: c for w, c in self.data.items() if self.ctx.word_weight(w) == weight}
        )

    def min_weight(self) -> int | None:
        if not self.data:
            return None
        return min(self.ctx.word_weight(w) for w in self.data)

    def truncate(self, max_weight: int) -> "CyclicElement":
        return self._new(
            {w: c for w, c in self.data.items() if self.ctx.word_weight(w) <= max_weight}
        )

    def __str__(self):
        return format_cyclic(self)

    def __repr__(self):
        return f"CyclicElement({format_cyclic(self)})"


class CyclicPair(LinearCombination):
    """Element of |A| tensor |A|, truncated by total weight."""

    def terms(self):
        return sorted(
            self.data.items(), key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1]))
        )

    def pair_weight(self, key) -> int:
        return self.ctx.word_weight(key[0]) + self.ctx.word_weight(key[1])

    def component(self, weight: int) -> "CyclicPair":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) == weight}
        )

    def truncate(self, max_weight: int) -> "CyclicPair":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) <= max_weight}
        )

    def flip(self) -> "CyclicPair":
        data: dict = {}
        for (a, b), c in self.data.items():
            key = (b, a)
            data[key] = data.get(key, _ZERO) + c
        return self._new({k: v for k, v in data.items() if v != 0})

    def alt(self) -> "CyclicPair":
        """Antisymmetrization a x b - b x a."""
        return self - self.flip()

    def __str__(self):
        if not self.data:
            return "0"
        parts = []
        for (a, b), c in self.terms():
            parts.append((c, f"(|{_word_body(self.ctx, a)}|)@(|{_word_body(self.ctx, b)}|)"))
        return _join_terms(parts)

    def __repr__(self):
        return f"CyclicPair({self})"


class HalfPairL(LinearCombination):
    """Element of |A| tensor A: keys (CyclicWord, Word)."""

    def pair_weight(self, key) -> int:
        return self.ctx.word_weight(key[0]) + self.ctx.word_weight(key[1])

    def terms(self):
        return sorted(
            self.data.items(), key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1]))
        )

    def component(self, weight: int) -> "HalfPairL":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) == weight}
        )

    def mul_A_left(self, u: TensorElement) -> "HalfPairL":
        """(1 tensor u) . self: multiply the ordinary slot on the left."""
        ctx = self.ctx
        data: dict = {}
        for (cy, w), c in self.data.items():
            base = ctx.word_weight(cy)
            for uw, uc in u.data.items():
                if base + ctx.word_weight(uw) + ctx.word_weight(w) > ctx.D:
                    continue
                key = (cy, Word(tuple(uw) + tuple(w)))
                nv = data.get(key, _ZERO) + c * uc
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return self._new(data)

    def mul_A_right(self, u: TensorElement) -> "HalfPairL":
        """self . (1 tensor u): multiply the ordinary slot on the right."""
        ctx = self.ctx
        data: dict = {}
        for (cy, w), c in self.data.items():
            base = ctx.word_weight(cy)
            for uw, uc in u.data.items():
                if base + ctx.word_weight(uw) + ctx.word_weight(w) > ctx.D:
                    continue
                key = (cy, Word(tuple(w) + tuple(uw)))
                nv = data.get(key, _ZERO) + c * uc
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return self._new(data)

    def project_A(self) -> CyclicPair:
        """Close the ordinary slot cyclically."""
        data: dict = {}
        for (cy, w), c in self.data.items():
            key = (cy, CyclicWord(w))
            data[key] = data.get(key, _ZERO) + c
        return CyclicPair(self.ctx, {k: v for k, v in data.items() if v != 0})

    def flip(self) -> "HalfPairR":
        data = {}
        for (cy, w), c in self.data.items():
            data[(w, cy)] = data.get((w, cy), _ZERO) + c
        return HalfPairR(self.ctx, {k: v for k, v in data.items() if v != 0})

    def eps_A(self) -> CyclicElement:
        """(id tensor counit)."""
        data: dict = {}
        for (cy, w), c in self.data.items():
            if len(w) == 0:
                data[cy] = data.get(cy, _ZERO) + c
        return CyclicElement(self.ctx, {k: v for k, v in data.items() if v != 0})

    def truncate(self, max_weight: int) -> "HalfPairL":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) <= max_weight}
        )

    def __str__(self):
        if not self.data:
            return "0"
        parts = []
        for (cy, w), c in self.terms():
            parts.append((c, f"(|{_word_body(self.ctx, cy)}|)@({_word_body(self.ctx, w)})"))
        return _join_terms(parts)

    def __repr__(self):
        return f"HalfPairL({self})"


class HalfPairR(LinearCombination):
    """Element of A tensor |A|: keys (Word, CyclicWord)."""

    def pair_weight(self, key) -> int:
        return self.ctx.word_weight(key[0]) + self.ctx.word_weight(key[1])

    def terms(self):
        return sorted(
            self.data.items(), key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1]))
        )

    def component(self, weight: int) -> "HalfPairR":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) == weight}
        )

    def mul_A_left(self, u: TensorElement) -> "HalfPairR":
        ctx = self.ctx
        data: dict = {}
        for (w, cy), c in self.data.items():
            base = ctx.word_weight(cy)
            for uw, uc in u.data.items():
                if base + ctx.word_weight(uw) + ctx.word_weight(w) > ctx.D:
                    continue
                key = (Word(tuple(uw) + tuple(w)), cy)
                nv = data.get(key, _ZERO) + c * uc
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return self._new(data)

    def mul_A_right(self, u: TensorElement) -> "HalfPairR":
        ctx = self.ctx
        data: dict = {}
        for (w, cy), c in self.data.items():
            base = ctx.word_weight(cy)
            for uw, uc in u.data.items():
                if base + ctx.word_weight(uw) + ctx.word_weight(w) > ctx.D:
                    continue
                key = (Word(tuple(w) + tuple(uw)), cy)
                nv = data.get(key, _ZERO) + c * uc
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
        return self._new(data)

    def project_A(self) -> CyclicPair:
        data: dict = {}
        for (w, cy), c in self.data.items():
            key = (CyclicWord(w), cy)
            data[key] = data.get(key, _ZERO) + c
        return CyclicPair(self.ctx, {k: v for k, v in data.items() if v != 0})

    def flip(self) -> "HalfPairL":
        data = {}
        for (w, cy), c in self.data.items():
            data[(cy, w)] = data.get((cy, w), _ZERO) + c
        return HalfPairL(self.ctx, {k: v for k, v in data.items() if v != 0})

    def eps_A(self) -> CyclicElement:
        data: dict = {}
        for (w, cy), c in self.data.items():
            if len(w) == 0:
                data[cy] = data.get(cy, _ZERO) + c
        return CyclicElement(self.ctx, {k: v for k, v in data.items() if v != 0})

    def truncate(self, max_weight: int) -> "HalfPairR":
        return self._new(
            {k: c for k, c in self.data.items() if self.pair_weight(k) <= max_weight}
        )

    def __str__(self):
        if not self.data:
            return "0"
        parts = []
        for (w, cy), c in self.terms():
            parts.append((c, f"({_word_body(self.ctx, w)})@(|{_word_body(self.ctx, cy)}|)"))
        return _join_terms(parts)

    def __repr__(self):
        return f"HalfPairR({self})"


# ---------------------------------------------------------------------------
# maps


def project(elem: TensorElement) -> CyclicElement:
    """|.| : A -> |A|."""
    data: dict = {}
    for w, c in elem.data.items():
        key = CyclicWord(w)
        nv = data.get(key, _ZERO) + c
        if nv == 0:
            data.pop(key, None)
        else:
            data[key] = nv
    return CyclicElement(elem.ctx, data)


def cyclic_one(ctx: AlgebraContext) -> CyclicElement:
    return CyclicElement(ctx, {CYCLIC_EMPTY: F(1)})


def needle(elem: CyclicElement) -> TensorElement:
    """N(|w_1..w_l|) = sum_k w_k..w_l w_1..w_{k-1}; N(|1|) = 0.

    All l rotations are summed, with multiplicity for periodic words, so
    projecting back multiplies by the length.
    """
    data: dict = {}
    for cy, c in elem.data.items():
        for rot in rotations(cy):
            key = Word(rot)
            nv = data.get(key, _ZERO) + c
            if nv == 0:
                data.pop(key, None)
            else:
                data[key] = nv
    return TensorElement(elem.ctx, data)


def wedge(a: CyclicElement, b: CyclicElement) -> CyclicPair:
    """a wedge b = a x b - b x a."""
    if a.ctx != b.ctx:
        raise ValueError("wedge operands must share a context")
    ctx = a.ctx
    data: dict = {}
    for wa, ca in a.data.items():
        for wb, cb in b.data.items():
            if ctx.word_weight(wa) + ctx.word_weight(wb) > ctx.D:
                continue
            for key, sgn in (((wa, wb), 1), ((wb, wa), -1)):
                nv = data.get(key, _ZERO) + sgn * ca * cb
                if nv == 0:
                    data.pop(key, None)
                else:
                    data[key] = nv
    return CyclicPair(ctx, data)


def square_project_both(sq: TensorSquare) -> CyclicPair:
    data: dict = {}
    for (a, b), c in sq.data.items():
        key = (CyclicWord(a), CyclicWord(b))
        nv = data.get(key, _ZERO) + c
        if nv == 0:
            data.pop(key, None)
        else:
            data[key] = nv
    return CyclicPair(sq.ctx, data)


def square_project_left(sq: TensorSquare) -> HalfPairL:
    """(|.| tensor 1) on an element of A tensor A."""
    data: dict = {}
    for (a, b), c in sq.data.items():
        key = (CyclicWord(a), b)
        nv = data.get(key, _ZERO) + c
        if nv == 0:
            data.pop(key, None)
        else:
            data[key] = nv
    return HalfPairL(sq.ctx, data)


def square_project_right(sq: TensorSquare) -> HalfPairR:
    """(1 tensor |.|) on an element of A tensor A."""
    data: dict = {}
    for (a, b), c in sq.data.items():
        key = (a, CyclicWord(b))
        nv = data.get(key, _ZERO) + c
        if nv == 0:
            data.pop(key, None)
        else:
            data[key] = nv
    return HalfPairR(sq.ctx, data)


def cyclic_basis(ctx: AlgebraContext, weight: int) -> list[CyclicWord]:
    """All necklaces of the given weight, canonical order."""
    seen: dict[CyclicWord, None] = {}
    for w in ctx.basis_words(weight):
        seen.setdefault(CyclicWord(w), None)
    return sorted(seen, key=word_key)


def embed_tilde_delta(elem: CyclicElement) -> CyclicPair:
    """The map |A| -> |A| x |A| induced by the reduced coproduct.

    Independent of the chosen word representative, and injective weight by
    weight (the image of |a| has leading term |a| x |1|).
    """
    out = CyclicPair(elem.ctx, {})
    for cy, c in elem.data.items():
        lift = TensorElement(elem.ctx, {Word(cy): F(1)})
        out = out + square_project_both(lift.tilde_coproduct()).scale(c)
    return out


class RetractError(ValueError):
    """Raised when a pair is not in the image of the cyclic embedding."""

    def __init__(self, message: str, residual: CyclicPair):
        super().__init__(message)
        self.residual = residual


def retract_tilde_delta(pair: CyclicPair) -> CyclicElement:
    """Inverse of embed_tilde_delta on its image; exact solve per weight."""
    ctx = pair.ctx
    out = CyclicElement(ctx, {})
    residual_data: dict = {}
    weights = sorted({pair.pair_weight(k) for k in pair.data})
    for wt in weights:
        part = pair.component(wt)
        basis = cyclic_basis(ctx, wt)
        images = [embed_tilde_delta(CyclicElement(ctx, {b: F(1)})) for b in basis]
        keys: dict = {}
        for img in images:
            for k in img.data:
                keys.setdefault(k, len(keys))
        for k in part.data:
            keys.setdefault(k, len(keys))
        M = SparseMatrix(len(keys), len(basis))
        for j, img in enumerate(images):
            for k, v in img.data.items():
                M.set(keys[k], j, v)
        b = [_ZERO] * len(keys)
        for k, v in part.data.items():
            b[keys[k]] = v
        sol = solve_affine(M, b)
        if sol.particular is None:
            inv_keys = {i: k for k, i in keys.items()}
            for i, r in enumerate(sol.residual):
                if r != 0:
                    residual_data[inv_keys[i]] = r
            continue
        for j, coeff in enumerate(sol.particular):
            if coeff != 0:
                out = out + CyclicElement(ctx, {basis[j]: coeff})
    if residual_data:
        raise RetractError(
            "pair is not in the image of the cyclic embedding",
            CyclicPair(ctx, residual_data),
        )
    return out


# ---------------------------------------------------------------------------
# printing and parsing


def _word_body(ctx: AlgebraContext, w) -> str:
    if len(w) == 0:
        return "1"
    return "*".join(ctx.gen_name(i) for i in w)


def format_cyclic(elem: CyclicElement) -> str:
    if not elem.data:
        return "0"
    parts = [(c, f"|{_word_body(elem.ctx, w)}|") for w, c in elem.terms()]
    return _join_terms(parts)


def parse_cyclic(ctx: AlgebraContext, text: str) -> CyclicElement:
    """Parse combinations of |w| terms, e.g. '2*|x1*y1| - |z1|'."""
    s = text.strip()
    if not s:
        raise ValueError("empty cyclic element string")
    if s == "0":
        return CyclicElement(ctx, {})
    import re as _re

    out = CyclicElement(ctx, {})
    compact = s.replace(" ", "")
    # split at +/- signs that are not inside a |...| body
    pieces = []
    depth = 0
    cur = ""
    for ch in compact:
        if ch == "|":
            depth ^= 1
            cur += ch
        elif ch in "+-" and depth == 0 and cur:
            pieces.append(cur)
            cur = ch
        else:
            cur += ch
    if cur:
        pieces.append(cur)
    for piece in pieces:
        sign = F(1)
        body = piece
        while body and body[0] in "+-":
            if body[0] == "-":
                sign = -sign
            body = body[1:]
        coeff = sign
        m = _re.fullmatch(r"(?:(\d+(?:/\d+)?)\*)?\|([^|]*)\|", body)
        if not m:
            raise ValueError(f"bad cyclic term {piece!r} in {text!r}")
        if m.group(1):
            coeff *= F(m.group(1))
        wbody = m.group(2)
        letters = []
        if wbody != "1":
            for tok in wbody.split("*"):
                letters.append(ctx.gen_index(tok))
        w = CyclicWord(letters)
        if ctx.word_weight(w) > ctx.D:
            raise ValueError(f"cyclic word {wbody!r} exceeds truncation weight {ctx.D}")
        out = out + CyclicElement(ctx, {w: coeff})
    return out
