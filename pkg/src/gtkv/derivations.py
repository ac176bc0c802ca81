"""Tangential derivations, tangential automorphisms, double derivations.

A tangential derivation is a derivation u of the free Lie algebra (extended
to A by Leibniz) together with chosen elements u_j implementing the action on
the boundary generators: u(z_j) = [z_j, u_j].  A tangential automorphism F
stores generator images plus conjugators f_j with F(z_j) = e^{-f_j} z_j
e^{f_j}.  The conjugator data is part of the structure; composition uses BCH,
inversion pushes the data through F^{-1}.

The structural maps between surface types live here as well: the pants
insertions (z_k substituted by the boundary elements of two glued blocks),
the elliptic maps onto the once-holed torus (z_1 -> e^x y e^{-x}, z_2 -> -y),
the automorphism phi of the torus algebra, and the derivations delta_2n.
"""
from __future__ import annotations

from fractions import Fraction

from .exactlin import SparseMatrix, solve_affine
from .cyclic_words import CyclicElement, CyclicPair
from .tensor_algebra import (
    AlgebraContext,
    TensorElement,
    TensorSquare,
    Word,
    ad_series,
    bch,
    commutator,
    format_element,
    parse_element,
    series_g,
    series_r,
    special_elements,
    tensor,
    texp,
    tlog,
)

F = Fraction
_ZERO = F(0)


def conjugate_by_exp(f: TensorElement, a: TensorElement) -> TensorElement:
    """e^{-f} a e^{f} = e^{-ad_f}(a), exact at truncation."""
    ctx = a.ctx
    out = a
    term = a
    fact = 1
    for k in range(1, ctx.D + 2):
        term = commutator(term, f)  # ad_{-f} iterated: [a, f] = -[f, a]
        if term.is_zero():
            break
        fact *= k
        out = out + term.scale(F(1, fact))
    return out


class TangentialDerivation:
    """Derivation data (images of x_i, y_i; components u_j)."""

    __slots__ = ("ctx", "images", "components")

    def __init__(self, ctx: AlgebraContext, images: dict[int, TensorElement] | None = None,
                 components: list[TensorElement] | None = None):
        self.ctx = ctx
        self.images: dict[int, TensorElement] = {}
        for i in range(2 * ctx.g):
            img = (images or {}).get(i)
            if img is None:
                img = ctx.zero()
            if img.ctx != ctx:
                raise ValueError("image context mismatch")
            self.images[i] = img
        comps = list(components or [])
        if len(comps) < ctx.n:
            comps = comps + [ctx.zero()] * (ctx.n - len(comps))
        if len(comps) != ctx.n:
            raise ValueError(f"expected {ctx.n} tangential components")
        for c in comps:
            if c.ctx != ctx:
                raise ValueError("component context mismatch")
        self.components = comps

    @classmethod
    def zero(cls, ctx: AlgebraContext) -> "TangentialDerivation":
        return cls(ctx)

    def component(self, j: int) -> TensorElement:
        """u_j for j = 1..n."""
        return self.components[j - 1]

    def image_of(self, i: int) -> TensorElement:
        ctx = self.ctx
        if i < 2 * ctx.g:
            return self.images[i]
        j = i - 2 * ctx.g
        z = ctx.gen(i)
        return commutator(z, self.components[j])

    def apply(self, a: TensorElement) -> TensorElement:
        if a.ctx != self.ctx:
            raise ValueError("context mismatch")
        ctx = self.ctx
        imgs = [self.image_of(i) for i in range(ctx.num_gens)]
        out = ctx.zero()
        for w, c in a.data.items():
            for i, letter in enumerate(w):
                img = imgs[letter]
                if img.is_zero():
                    continue
                left = TensorElement(ctx, {Word(w[:i]): F(1)})
                right = TensorElement(ctx, {Word(w[i + 1:]): F(1)})
                out = out + (left * img * right).scale(c)
        return out

    def apply_square(self, V: TensorSquare) -> TensorSquare:
        """u . (a x b) = u(a) x b + a x u(b), termwise."""
        if V.ctx != self.ctx:
            raise ValueError("context mismatch")
        ctx = self.ctx
        out = TensorSquare(ctx, {})
        for (a, b), c in V.data.items():
            ea = TensorElement(ctx, {a: F(1)})
            eb = TensorElement(ctx, {b: F(1)})
            out = out + (tensor(self.apply(ea), eb) + tensor(ea, self.apply(eb))).scale(c)
        return out

    def apply_cyclic(self, e: CyclicElement) -> CyclicElement:
        """Action on |A| via any word representative (well defined)."""
        from .cyclic_words import project

        if e.ctx != self.ctx:
            raise ValueError("context mismatch")
        out = CyclicElement(self.ctx, {})
        for cw, c in e.data.items():
            lift = TensorElement(self.ctx, {Word(cw): F(1)})
            out = out + project(self.apply(lift)).scale(c)
        return out

    def apply_cyclic_pair(self, p: CyclicPair) -> CyclicPair:
        if p.ctx != self.ctx:
            raise ValueError("context mismatch")
        out = CyclicPair(self.ctx, {})
        for (a, b), c in p.data.items():
            ea = CyclicElement(self.ctx, {a: F(1)})
            eb = CyclicElement(self.ctx, {b: F(1)})
            ua = self.apply_cyclic(ea)
            ub = self.apply_cyclic(eb)
            for cw, cc in ua.data.items():
                if self.ctx.word_weight(cw) + self.ctx.word_weight(b) <= self.ctx.D:
                    out = out + CyclicPair(self.ctx, {(cw, b): cc * c})
            for cw, cc in ub.data.items():
                if self.ctx.word_weight(a) + self.ctx.word_weight(cw) <= self.ctx.D:
                    out = out + CyclicPair(self.ctx, {(a, cw): cc * c})
        return out

    def __add__(self, other: "TangentialDerivation") -> "TangentialDerivation":
        if not isinstance(other, TangentialDerivation) or other.ctx != self.ctx:
            raise ValueError("context mismatch")
        return TangentialDerivation(
            self.ctx,
            {i: self.images[i] + other.images[i] for i in self.images},
            [a + b for a, b in zip(self.components, other.components)],
        )

    def __sub__(self, other: "TangentialDerivation") -> "TangentialDerivation":
        return self + other.scale(-1)

    def scale(self, c) -> "TangentialDerivation":
        return TangentialDerivation(
            self.ctx,
            {i: self.images[i].scale(c) for i in self.images},
            [u.scale(c) for u in self.components],
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TangentialDerivation)
            and self.ctx == other.ctx
            and self.images == other.images
            and self.components == other.components
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.images.values()) and all(
            u.is_zero() for u in self.components
        )

    def degree_components(self) -> dict[int, "TangentialDerivation"]:
        """Split by derivation degree: degree d moves weight w to w + d."""
        degrees: set[int] = set()
        for i, img in self.images.items():
            for w in img.data:
                degrees.add(self.ctx.word_weight(w) - 1)
        for u in self.components:
            for w in u.data:
                degrees.add(self.ctx.word_weight(w))
        out = {}
        for d in sorted(degrees):
            out[d] = TangentialDerivation(
                self.ctx,
                {i: img.component(d + 1) for i, img in self.images.items()},
                [u.component(d) for u in self.components],
            )
        return out

    def is_positive(self) -> bool:
        """Strictly weight-increasing: only degrees >= 1 occur."""
        return all(d >= 1 for d in self.degree_components())

    def is_lie(self) -> bool:
        """All defining data primitive (the Lie-algebra model tder)."""
        return all(img.is_primitive() or img.is_zero() for img in self.images.values()) and all(
            u.is_primitive() or u.is_zero() for u in self.components
        )

    def is_special(self) -> bool:
        """Kills the boundary element omega."""
        omega = special_elements(self.ctx)["omega"]
        return self.apply(omega).is_zero()

    def to_json(self) -> dict:
        ctx = self.ctx
        return {
            "type": "tangential_derivation",
            "g": ctx.g,
            "n": ctx.n,
            "D": ctx.D,
            "images": {ctx.gen_name(i): format_element(self.images[i]) for i in range(2 * ctx.g)},
            "u_j": [format_element(u) for u in self.components],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TangentialDerivation":
        if payload.get("type") != "tangential_derivation":
            raise ValueError("not a tangential_derivation payload")
        ctx = AlgebraContext(payload["g"], payload["n"], payload["D"])
        images = {
            ctx.gen_index(name): parse_element(ctx, text)
            for name, text in payload.get("images", {}).items()
        }
        comps = [parse_element(ctx, text) for text in payload.get("u_j", [])]
        return cls(ctx, images, comps)

    def __repr__(self):
        bits = [f"{self.ctx.gen_name(i)} -> {format_element(img)}" for i, img in self.images.items()]
        bits += [f"u_{j + 1} = {format_element(u)}" for j, u in enumerate(self.components)]
        return "TangentialDerivation(" + "; ".join(bits) + ")"


def tder_bracket(u: TangentialDerivation, v: TangentialDerivation) -> TangentialDerivation:
    """[u, v] with components w_j = u(v_j) - v(u_j) + [u_j, v_j].

    The defining identity [u,v](z_j) = [z_j, w_j] is asserted.
    """
    if u.ctx != v.ctx:
        raise ValueError("context mismatch")
    ctx = u.ctx
    images = {}
    for i in range(2 * ctx.g):
        gen = ctx.gen(i)
        images[i] = u.apply(v.apply(gen)) - v.apply(u.apply(gen))
    comps = []
    for j in range(ctx.n):
        w_j = u.apply(v.components[j]) - v.apply(u.components[j]) + commutator(
            u.components[j], v.components[j]
        )
        comps.append(w_j)
    out = TangentialDerivation(ctx, images, comps)
    for j in range(1, ctx.n + 1):
        z = ctx.gen(ctx.z_index(j))
        direct = u.apply(v.apply(z)) - v.apply(u.apply(z))
        assert direct == commutator(z, out.component(j)), (
            f"component formula inconsistent for z_{j}"
        )
    return out


# ---------------------------------------------------------------------------
# double derivations


class DoubleDerivation:
    """Derivation with values in A x A (outer bimodule)."""

    __slots__ = ("ctx", "images")

    def __init__(self, ctx: AlgebraContext, images: dict[int, TensorSquare]):
        self.ctx = ctx
        self.images = {}
        for i in range(ctx.num_gens):
            img = images.get(i)
            self.images[i] = img if img is not None else TensorSquare(ctx, {})
            if self.images[i].ctx != ctx:
                raise ValueError("image context mismatch")

    def apply(self, a: TensorElement) -> TensorSquare:
        """Leibniz into the outer bimodule: d(uv) = d(u)(1 x v) + (u x 1)d(v)."""
        if a.ctx != self.ctx:
            raise ValueError("context mismatch")
        ctx = self.ctx
        one = ctx.one()
        out = TensorSquare(ctx, {})
        for w, c in a.data.items():
            for i, letter in enumerate(w):
                img = self.images[letter]
                if not img.data:
                    continue
                left = TensorElement(ctx, {Word(w[:i]): F(1)})
                right = TensorElement(ctx, {Word(w[i + 1:]): F(1)})
                out = out + (tensor(left, one) * img * tensor(one, right)).scale(c)
        return out

    def __repr__(self):
        return f"DoubleDerivation({self.ctx})"


def double_partial(ctx: AlgebraContext, gen_index: int) -> DoubleDerivation:
    """d/d(gen): sends the generator to 1 x 1 and the others to 0."""
    one = ctx.one()
    return DoubleDerivation(ctx, {gen_index: tensor(one, one)})


def partial(a: TensorElement, gen_index: int) -> TensorSquare:
    """da/d(gen) in A x A: sum over occurrences, prefix x suffix."""
    ctx = a.ctx
    data: dict = {}
    for w, c in a.data.items():
        for i, letter in enumerate(w):
            if letter != gen_index:
                continue
            key = (Word(w[:i]), Word(w[i + 1:]))
            nv = data.get(key, _ZERO) + c
            if nv == 0:
                data.pop(key, None)
            else:
                data[key] = nv
    return TensorSquare(ctx, data)


def apply_double(dd: DoubleDerivation, a: TensorElement) -> TensorSquare:
    return dd.apply(a)


def phi_zero(ctx: AlgebraContext) -> DoubleDerivation:
    """The double derivation a -> 1 x a - a x 1 on generators."""
    one = ctx.one()
    return DoubleDerivation(
        ctx,
        {
            i: tensor(one, ctx.gen(i)) - tensor(ctx.gen(i), one)
            for i in range(ctx.num_gens)
        },
    )


# ---------------------------------------------------------------------------
# tangential automorphisms


class TAutElement:
    """Automorphism data: images of x_i, y_i plus conjugators f_j."""

    __slots__ = ("ctx", "images", "conjugators", "_z_cache")

    def __init__(self, ctx: AlgebraContext, images: dict[int, TensorElement] | None = None,
                 conjugators: list[TensorElement] | None = None):
        self.ctx = ctx
        self.images: dict[int, TensorElement] = {}
        for i in range(2 * ctx.g):
            img = (images or {}).get(i)
            if img is None:
                img = ctx.gen(i)
            if img.ctx != ctx:
                raise ValueError("image context mismatch")
            self.images[i] = img
        conj = list(conjugators or [])
        if len(conj) < ctx.n:
            conj = conj + [ctx.zero()] * (ctx.n - len(conj))
        if len(conj) != ctx.n:
            raise ValueError(f"expected {ctx.n} conjugators")
        for f in conj:
            if f.ctx != ctx:
                raise ValueError("conjugator context mismatch")
        self.conjugators = conj
        self._z_cache: dict[int, TensorElement] = {}

    @classmethod
    def identity(cls, ctx: AlgebraContext) -> "TAutElement":
        return cls(ctx)

    def conjugator(self, j: int) -> TensorElement:
        """f_j for j = 1..n."""
        return self.conjugators[j - 1]

    def image_of(self, i: int) -> TensorElement:
        ctx = self.ctx
        if i < 2 * ctx.g:
            return self.images[i]
        j = i - 2 * ctx.g
        cached = self._z_cache.get(j)
        if cached is None:
            cached = conjugate_by_exp(self.conjugators[j], ctx.gen(i))
            self._z_cache[j] = cached
        return cached

    def apply(self, a: TensorElement) -> TensorElement:
        if a.ctx != self.ctx:
            raise ValueError("context mismatch")
        images = {i: self.image_of(i) for i in range(self.ctx.num_gens)}
        return a.substitute(self.ctx, images)

    def apply_cyclic(self, e: CyclicElement) -> CyclicElement:
        from .cyclic_words import project

        out = CyclicElement(self.ctx, {})
        for cw, c in e.data.items():
            lift = TensorElement(self.ctx, {Word(cw): F(1)})
            out = out + project(self.apply(lift)).scale(c)
        return out

    def apply_cyclic_pair(self, p: CyclicPair) -> CyclicPair:
        from .cyclic_words import project

        out = CyclicPair(self.ctx, {})
        for (a, b), c in p.data.items():
            ea = project(self.apply(TensorElement(self.ctx, {Word(a): F(1)})))
            eb = project(self.apply(TensorElement(self.ctx, {Word(b): F(1)})))
            for cwa, ca in ea.data.items():
                for cwb, cb in eb.data.items():
                    if self.ctx.word_weight(cwa) + self.ctx.word_weight(cwb) > self.ctx.D:
                        continue
                    out = out + CyclicPair(self.ctx, {(cwa, cwb): ca * cb * c})
        return out

    def compose(self, other: "TAutElement") -> "TAutElement":
        """(self o other)(a) = self(other(a)); conjugators by BCH."""
        if other.ctx != self.ctx:
            raise ValueError("context mismatch")
        ctx = self.ctx
        images = {i: self.apply(other.images[i]) for i in range(2 * ctx.g)}
        conj = [
            bch(self.conjugators[j], self.apply(other.conjugators[j]))
            for j in range(ctx.n)
        ]
        return TAutElement(ctx, images, conj)

    def linear_part(self) -> SparseMatrix:
        """Matrix of the weight-1 action on the x/y generators."""
        ctx = self.ctx
        m = SparseMatrix(2 * ctx.g, 2 * ctx.g)
        for i in range(2 * ctx.g):
            img = self.images[i].component(1)
            for w, c in img.data.items():
                if len(w) == 1 and w[0] < 2 * ctx.g:
                    m.set(w[0], i, c)
        return m

    def invert(self) -> "TAutElement":
        """Degree-by-degree inverse; supports a unipotent linear part."""
        ctx = self.ctx
        n_xy = 2 * ctx.g
        # invert the linear part on the span of x, y
        L = self.linear_part()
        lin_inv_images: dict[int, TensorElement] = {}
        for i in range(n_xy):
            rhs = [F(1) if k == i else F(0) for k in range(n_xy)]
            sol = solve_affine(L, rhs)
            if sol.particular is None:
                raise ValueError("linear part is not invertible")
            lin_inv_images[i] = TensorElement(
                ctx, {Word((k,)): v for k, v in enumerate(sol.particular) if v != 0}
            )
        for j in range(ctx.n):
            zi = n_xy + j
            if self.image_of(zi).component(2) != ctx.gen(zi):
                raise ValueError("z-image must be z_j to leading order")
            lin_inv_images[zi] = ctx.gen(zi)

        def linv(e: TensorElement) -> TensorElement:
            return e.substitute(ctx, lin_inv_images)

        images: dict[int, TensorElement] = {i: linv(ctx.gen(i)) for i in range(n_xy)}
        for m in range(2, ctx.D + 1):
            for i in range(n_xy):
                defect = (ctx.gen(i) - self.apply(images[i])).component(m)
                if not defect.is_zero():
                    images[i] = images[i] + linv(defect)
        for i in range(n_xy):
            assert self.apply(images[i]) == ctx.gen(i), "inversion failed"
        # (F^{-1})_j = -F^{-1}(f_j); applying F^{-1} to f_j needs the inverse's
        # own conjugators on z-letters, but only at strictly lower weight, so a
        # few fixed-point passes settle the data exactly
        conj = [ctx.zero()] * ctx.n
        for _ in range(ctx.D // 2 + 2):
            trial = TAutElement(ctx, images, conj)
            new_conj = [-1 * trial.apply(self.conjugators[j]) for j in range(ctx.n)]
            if new_conj == conj:
                break
            conj = new_conj
        return TAutElement(ctx, images, conj)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TAutElement)
            and self.ctx == other.ctx
            and self.images == other.images
            and self.conjugators == other.conjugators
        )

    def is_identity(self) -> bool:
        return self == TAutElement.identity(self.ctx)

    def to_json(self) -> dict:
        ctx = self.ctx
        return {
            "type": "taut_element",
            "g": ctx.g,
            "n": ctx.n,
            "D": ctx.D,
            "images": {ctx.gen_name(i): format_element(self.images[i]) for i in range(2 * ctx.g)},
            "f_j": [format_element(f) for f in self.conjugators],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "TAutElement":
        if payload.get("type") != "taut_element":
            raise ValueError("not a taut_element payload")
        ctx = AlgebraContext(payload["g"], payload["n"], payload["D"])
        images = {
            ctx.gen_index(name): parse_element(ctx, text)
            for name, text in payload.get("images", {}).items()
        }
        conj = [parse_element(ctx, text) for text in payload.get("f_j", [])]
        return cls(ctx, images, conj)

    def __repr__(self):
        bits = [f"{self.ctx.gen_name(i)} -> {format_element(img)}" for i, img in self.images.items()]
        bits += [f"f_{j + 1} = {format_element(f)}" for j, f in enumerate(self.conjugators)]
        return "TAutElement(" + "; ".join(bits) + ")"


def _rebase(e: TensorElement, new_ctx: AlgebraContext) -> TensorElement:
    """Re-key an element into another depth of the same (g, n) context."""
    data = {w: c for w, c in e.data.items() if new_ctx.word_weight(w) <= new_ctx.D}
    return TensorElement(new_ctx, data)


def rebase_tder(u: TangentialDerivation, new_ctx: AlgebraContext) -> TangentialDerivation:
    return TangentialDerivation(
        new_ctx,
        {i: _rebase(img, new_ctx) for i, img in u.images.items()},
        [_rebase(c, new_ctx) for c in u.components],
    )


def rebase_taut(Fel: TAutElement, new_ctx: AlgebraContext) -> TAutElement:
    return TAutElement(
        new_ctx,
        {i: _rebase(img, new_ctx) for i, img in Fel.images.items()},
        [_rebase(f, new_ctx) for f in Fel.conjugators],
    )


def _solve_bracket_with_z(ctx: AlgebraContext, j: int, rhs: TensorElement, weight: int,
                          pin: Fraction | None) -> TensorElement:
    """Solve [z_j, X] = rhs for X in the weight-m free Lie part.

    The kernel of ad_{z_j} on the Lie algebra is spanned by z_j itself (only
    relevant at weight 2); pin fixes that coefficient when given.
    """
    z_idx = ctx.z_index(j)
    z = ctx.gen(z_idx)
    basis = ctx.lyndon_basis(weight)
    target_words = ctx.basis_words(weight + 2)
    index = {w: k for k, w in enumerate(target_words)}
    z_col = None
    nrows = len(target_words) + 1
    M = SparseMatrix(nrows, len(basis))
    for col, (lw, elem) in enumerate(basis):
        if len(lw) == 1 and lw[0] == z_idx:
            z_col = col
        img = commutator(z, elem)
        for w, c in img.data.items():
            M.set(index[w], col, c)
    b = [_ZERO] * nrows
    for w, c in rhs.data.items():
        if index.get(w) is None:
            raise ValueError("right-hand side outside the expected weight")
        b[index[w]] = c
    if pin is not None and z_col is not None:
        M.set(nrows - 1, z_col, 1)
        b[nrows - 1] = pin
    sol = solve_affine(M, b)
    if sol.particular is None:
        raise ValueError(f"no tangential solution at weight {weight} for z_{j}")
    out = ctx.zero()
    for col, coeff in enumerate(sol.particular):
        if coeff != 0:
            out = out + basis[col][1].scale(coeff)
    return out


def exp_tder(u: TangentialDerivation) -> TAutElement:
    """Exponential of a tangential derivation, with conjugator data.

    The derivation must preserve the weight filtration; a degree-0 part is
    tolerated when nilpotent.  The conjugators are solved degree by degree
    from e^{-f_j} z_j e^{f_j} = (exp u)(z_j); the z_j-linear coefficient of
    f_j (the only ad_{z_j}-kernel direction) is pinned to the z_j-coefficient
    of u_j.  The solve runs in a context two weights deeper, since the
    weight-m part of f_j is visible only at weight m + 2; derivations whose
    degree components stay below D - 1 round-trip with log_taut exactly.
    """
    ctx = u.ctx
    if any(d < 0 for d in u.degree_components()):
        raise ValueError("exp_tder requires a filtration-preserving derivation")

    def exp_apply(host: TangentialDerivation, e: TensorElement) -> TensorElement:
        # a degree-0 part is allowed when nilpotent (the series still stops)
        acc = e
        term = e
        fact = 1
        for k in range(1, 200):
            term = host.apply(term)
            if term.is_zero():
                break
            fact *= k
            acc = acc + term.scale(F(1, fact))
        else:
            raise ValueError("exponential did not terminate; degree-0 part not nilpotent")
        return acc

    images = {i: exp_apply(u, ctx.gen(i)) for i in range(2 * ctx.g)}
    conj = []
    if ctx.n:
        big = AlgebraContext(ctx.g, ctx.n, ctx.D + 2)
        ub = rebase_tder(u, big)
        for j in range(1, ctx.n + 1):
            zi = ctx.z_index(j)
            z = big.gen(zi)
            target = exp_apply(ub, z)
            pin_val = u.components[j - 1].coeff(Word((zi,)))
            f = big.zero()
            for m in range(1, ctx.D + 1):
                current = conjugate_by_exp(f, z)
                defect = (target - current).component(m + 2)
                if defect.is_zero() and m != 2:
                    continue
                pin = pin_val if m == 2 else None
                f = f + _solve_bracket_with_z(big, j, defect, m, pin)
            assert (conjugate_by_exp(f, z) - target).truncate(ctx.D + 2).is_zero(), (
                "conjugator solve failed"
            )
            conj.append(_rebase(f, ctx))
    return TAutElement(ctx, images, conj)


def log_taut(Fel: TAutElement) -> TangentialDerivation:
    """Logarithm of a tangential automorphism, recovering component data.

    u = log(F) as a filtered operator; u_j solved from u(z_j) = [z_j, u_j]
    in a context two weights deeper (the weight-m part of u_j shows up only
    at weight m + 2), with the z_j-coefficient of u_j pinned to that of f_j
    so that exp/log round-trip on the conjugator data as well.
    """
    ctx = Fel.ctx

    def log_apply(host: TAutElement, e: TensorElement) -> TensorElement:
        # with a unipotent weight-1 action N = F - id is not weight-raising,
        # but its per-weight blocks are nilpotent, so the series still stops
        out = e.ctx.zero()
        term = e
        for k in range(1, 200):
            term = host.apply(term) - term
            if term.is_zero():
                break
            out = out + term.scale(F((-1) ** (k + 1), k))
        else:
            raise ValueError("logarithm did not terminate; not unipotent")
        return out

    images = {i: log_apply(Fel, ctx.gen(i)) for i in range(2 * ctx.g)}
    comps = []
    if ctx.n:
        big = AlgebraContext(ctx.g, ctx.n, ctx.D + 2)
        Fb = rebase_taut(Fel, big)
        for j in range(1, ctx.n + 1):
            zi = ctx.z_index(j)
            uz = log_apply(Fb, big.gen(zi))
            pin_val = Fel.conjugators[j - 1].coeff(Word((zi,)))
            u_j = big.zero()
            for m in range(1, ctx.D + 1):
                part = uz.component(m + 2)
                if part.is_zero() and m != 2:
                    continue
                pin = pin_val if m == 2 else None
                u_j = u_j + _solve_bracket_with_z(big, j, part, m, pin)
            comps.append(_rebase(u_j, ctx))
    return TangentialDerivation(ctx, images, comps)


def apply_tder(u: TangentialDerivation, a: TensorElement) -> TensorElement:
    return u.apply(a)


def apply_taut(Fel: TAutElement, a: TensorElement) -> TensorElement:
    return Fel.apply(a)


def conj_tder(Fel: TAutElement, u: TangentialDerivation) -> TangentialDerivation:
    """F u F^{-1} as a tangential derivation.

    Component data: with h = -F^{-1}(f_j),
    v_j = e^{ad_{f_j}}(F(u_j)) + F( ((1 - e^{-ad_h})/ad_h)(u(h)) ).
    """
    if Fel.ctx != u.ctx:
        raise ValueError("context mismatch")
    ctx = u.ctx
    Finv = Fel.invert()
    images = {}
    for i in range(2 * ctx.g):
        gen = ctx.gen(i)
        images[i] = Fel.apply(u.apply(Finv.apply(gen)))
    exp_coeffs = [F(1, _fact(k)) for k in range(ctx.D + 2)]
    dexp_coeffs = [F((-1) ** k, _fact(k + 1)) for k in range(ctx.D + 2)]
    comps = []
    for j in range(1, ctx.n + 1):
        f_j = Fel.conjugators[j - 1]
        h = -1 * Finv.apply(f_j)
        part1 = ad_series(exp_coeffs, f_j, Fel.apply(u.components[j - 1]))
        part2 = Fel.apply(ad_series(dexp_coeffs, h, u.apply(h)))
        comps.append(part1 + part2)
    out = TangentialDerivation(ctx, images, comps)
    for j in range(1, ctx.n + 1):
        z = ctx.gen(ctx.z_index(j))
        direct = Fel.apply(u.apply(Finv.apply(z)))
        assert direct == commutator(z, out.component(j)), "conjugated component data inconsistent"
    return out


# ---------------------------------------------------------------------------
# block embeddings and direct products


def block_gen_map(g1: int, n1: int, g2: int, n2: int, block: int) -> dict[int, int]:
    """Generator index map for embedding one factor into the glued context."""
    G = g1 + g2
    if block == 1:
        out = {i: i for i in range(g1)}
        out.update({g1 + i: G + i for i in range(g1)})
        out.update({2 * g1 + j: 2 * G + j for j in range(n1)})
        return out
    out = {i: g1 + i for i in range(g2)}
    out.update({g2 + i: G + g1 + i for i in range(g2)})
    out.update({2 * g2 + j: 2 * G + n1 + j for j in range(n2)})
    return out


def embed_element(e: TensorElement, tgt: AlgebraContext, gen_map: dict[int, int]) -> TensorElement:
    data = {}
    for w, c in e.data.items():
        nw = Word(gen_map[i] for i in w)
        if tgt.word_weight(nw) <= tgt.D:
            data[nw] = data.get(nw, _ZERO) + c
    return TensorElement(tgt, data)


def block_omegas(tgt: AlgebraContext, g1: int, n1: int, g2: int, n2: int):
    """Boundary elements of the two blocks inside the glued context."""
    om1 = tgt.zero()
    for i in range(1, g1 + 1):
        om1 = om1 + commutator(tgt.gen(tgt.x_index(i)), tgt.gen(tgt.y_index(i)))
    for j in range(1, n1 + 1):
        om1 = om1 + tgt.gen(tgt.z_index(j))
    om2 = tgt.zero()
    for i in range(g1 + 1, g1 + g2 + 1):
        om2 = om2 + commutator(tgt.gen(tgt.x_index(i)), tgt.gen(tgt.y_index(i)))
    for j in range(n1 + 1, n1 + n2 + 1):
        om2 = om2 + tgt.gen(tgt.z_index(j))
    return om1, om2


def block_xis(tgt: AlgebraContext, g1: int, n1: int, g2: int, n2: int):
    """Group-like boundary logs of the two blocks inside the glued context."""

    def xi_for(xs, ys, zs):
        prod = tgt.one()
        for xi_, yi_ in zip(xs, ys):
            x = tgt.gen(xi_)
            y = tgt.gen(yi_)
            prod = prod * texp(x) * texp(y) * texp(-1 * x) * texp(-1 * y)
        for zi_ in zs:
            prod = prod * texp(tgt.gen(zi_))
        return tlog(prod)

    G = g1 + g2
    xi1 = xi_for(range(0, g1), range(G, G + g1), range(2 * G, 2 * G + n1))
    xi2 = xi_for(range(g1, G), range(G + g1, 2 * G), range(2 * G + n1, 2 * G + n1 + n2))
    return xi1, xi2


def tder_block_sum(u1: TangentialDerivation, u2: TangentialDerivation,
                   D: int | None = None) -> TangentialDerivation:
    """u_1 x u_2 acting blockwise on the glued context."""
    g1, n1 = u1.ctx.g, u1.ctx.n
    g2, n2 = u2.ctx.g, u2.ctx.n
    D = D if D is not None else max(u1.ctx.D, u2.ctx.D)
    tgt = AlgebraContext(g1 + g2, n1 + n2, D)
    m1 = block_gen_map(g1, n1, g2, n2, 1)
    m2 = block_gen_map(g1, n1, g2, n2, 2)
    images = {}
    for i in range(2 * g1):
        images[m1[i]] = embed_element(u1.images[i], tgt, m1)
    for i in range(2 * g2):
        images[m2[i]] = embed_element(u2.images[i], tgt, m2)
    comps = [tgt.zero()] * (n1 + n2)
    for j in range(n1):
        comps[j] = embed_element(u1.components[j], tgt, m1)
    for j in range(n2):
        comps[n1 + j] = embed_element(u2.components[j], tgt, m2)
    return TangentialDerivation(tgt, images, comps)


def taut_block_product(F1: TAutElement, F2: TAutElement, D: int | None = None) -> TAutElement:
    """F_1 x F_2 on the glued context (blockwise action)."""
    g1, n1 = F1.ctx.g, F1.ctx.n
    g2, n2 = F2.ctx.g, F2.ctx.n
    D = D if D is not None else max(F1.ctx.D, F2.ctx.D)
    tgt = AlgebraContext(g1 + g2, n1 + n2, D)
    m1 = block_gen_map(g1, n1, g2, n2, 1)
    m2 = block_gen_map(g1, n1, g2, n2, 2)
    images = {}
    for i in range(2 * g1):
        images[m1[i]] = embed_element(F1.images[i], tgt, m1)
    for i in range(2 * g2):
        images[m2[i]] = embed_element(F2.images[i], tgt, m2)
    conj = [tgt.zero()] * (n1 + n2)
    for j in range(n1):
        conj[j] = embed_element(F1.conjugators[j], tgt, m1)
    for j in range(n2):
        conj[n1 + j] = embed_element(F2.conjugators[j], tgt, m2)
    return TAutElement(tgt, images, conj)


# ---------------------------------------------------------------------------
# pants maps (source: three-holed sphere, context (0, 2))


def _check_pants_source(ctx: AlgebraContext):
    if (ctx.g, ctx.n) != (0, 2):
        raise ValueError("pants source must be the three-holed sphere context (g=0, n=2)")


def pants_tder(u: TangentialDerivation, g1: int, n1: int, g2: int, n2: int,
               D: int | None = None) -> TangentialDerivation:
    """Insert u_k(z_1, z_2) with z_k replaced by the block boundary elements.

    Every generator of block k maps to [gen, u_k(omega_1, omega_2)].
    """
    _check_pants_source(u.ctx)
    D = D if D is not None else u.ctx.D
    tgt = AlgebraContext(g1 + g2, n1 + n2, D)
    om1, om2 = block_omegas(tgt, g1, n1, g2, n2)
    subst = {u.ctx.z_index(1): om1, u.ctx.z_index(2): om2}
    uk = [u.components[0].substitute(tgt, subst), u.components[1].substitute(tgt, subst)]
    images = {}
    G = g1 + g2
    for i in range(2 * G):
        k = 0 if (i < g1 or G <= i < G + g1) else 1
        images[i] = commutator(tgt.gen(i), uk[k])
    comps = []
    for j in range(n1 + n2):
        k = 0 if j < n1 else 1
        comps.append(uk[k])
    return TangentialDerivation(tgt, images, comps)


def pants_taut(F: TAutElement, g1: int, n1: int, g2: int, n2: int,
               D: int | None = None) -> TAutElement:
    """Group-level pants map: conjugate block k by e^{f_k(omega_1, omega_2)}."""
    _check_pants_source(F.ctx)
    D = D if D is not None else F.ctx.D
    tgt = AlgebraContext(g1 + g2, n1 + n2, D)
    om1, om2 = block_omegas(tgt, g1, n1, g2, n2)
    subst = {F.ctx.z_index(1): om1, F.ctx.z_index(2): om2}
    fk = [F.conjugators[0].substitute(tgt, subst), F.conjugators[1].substitute(tgt, subst)]
    images = {}
    G = g1 + g2
    for i in range(2 * G):
        k = 0 if (i < g1 or G <= i < G + g1) else 1
        images[i] = conjugate_by_exp(fk[k], tgt.gen(i))
    conj = []
    for j in range(n1 + n2):
        k = 0 if j < n1 else 1
        conj.append(fk[k])
    return TAutElement(tgt, images, conj)


def pants_conj(F: TAutElement, g1: int, n1: int, g2: int, n2: int,
               D: int | None = None) -> TAutElement:
    """Twisted pants map: conjugate block k by e^{f_k(xi_1, xi_2)}."""
    _check_pants_source(F.ctx)
    D = D if D is not None else F.ctx.D
    tgt = AlgebraContext(g1 + g2, n1 + n2, D)
    xi1, xi2 = block_xis(tgt, g1, n1, g2, n2)
    subst = {F.ctx.z_index(1): xi1, F.ctx.z_index(2): xi2}
    fk = [F.conjugators[0].substitute(tgt, subst), F.conjugators[1].substitute(tgt, subst)]
    images = {}
    G = g1 + g2
    for i in range(2 * G):
        k = 0 if (i < g1 or G <= i < G + g1) else 1
        images[i] = conjugate_by_exp(fk[k], tgt.gen(i))
    conj = []
    for j in range(n1 + n2):
        k = 0 if j < n1 else 1
        conj.append(fk[k])
    return TAutElement(tgt, images, conj)


# ---------------------------------------------------------------------------
# elliptic maps (target: once-holed torus, context (1, 0))


def elliptic_psi(tgt: AlgebraContext) -> tuple[TensorElement, TensorElement]:
    """psi_1 = e^x y e^{-x}, psi_2 = -y in the torus algebra."""
    x, y = tgt.gen(0), tgt.gen(1)
    return texp(x) * y * texp(-1 * x), -1 * y


def _elliptic_target(src: AlgebraContext) -> AlgebraContext:
    if (src.g, src.n) != (0, 2):
        raise ValueError("elliptic source must be the three-holed sphere context (g=0, n=2)")
    # z has weight 2 but psi has weight 1, so the source must be resolved to
    # twice the target depth for the substitution to be exact
    return AlgebraContext(1, 0, src.D // 2)


def elliptic_tder(u: TangentialDerivation, D: int | None = None) -> TangentialDerivation:
    """The Lie homomorphism tder(0,3) -> Der+ of the torus algebra.

    u^ell(y) = [y, u_2(psi)];
    u^ell(x) = g(ad_x)(u_2(psi) - e^{-ad_x} u_1(psi)).
    """
    tgt = _elliptic_target(u.ctx)
    if D is not None:
        if D > tgt.D:
            raise ValueError(f"source depth supports target D <= {tgt.D}")
        tgt = AlgebraContext(1, 0, D)
    psi1, psi2 = elliptic_psi(tgt)
    subst = {u.ctx.z_index(1): psi1, u.ctx.z_index(2): psi2}
    u1 = u.components[0].substitute(tgt, subst)
    u2 = u.components[1].substitute(tgt, subst)
    x, y = tgt.gen(0), tgt.gen(1)
    g_coeffs = series_g(tgt.D + 1)
    exp_neg = [F((-1) ** k, _fact(k)) for k in range(tgt.D + 2)]
    img_y = commutator(y, u2)
    img_x = ad_series(g_coeffs, x, u2 - ad_series(exp_neg, x, u1))
    return TangentialDerivation(tgt, {0: img_x, 1: img_y}, [])


def elliptic_taut(Fel: TAutElement, D: int | None = None) -> TAutElement:
    """The group homomorphism TAut(0,3) -> Aut of the torus algebra.

    alpha -> e^{-f_1(psi)} alpha e^{f_2(psi)}, beta -> e^{-f_2(psi)} beta
    e^{f_2(psi)} on the group-like generators; on logarithms:
    F^ell(x) = bch(-f_1(psi), bch(x, f_2(psi))), F^ell(y) = e^{-ad_{f_2(psi)}}(y).
    """
    tgt = _elliptic_target(Fel.ctx)
    if D is not None:
        if D > tgt.D:
            raise ValueError(f"source depth supports target D <= {tgt.D}")
        tgt = AlgebraContext(1, 0, D)
    psi1, psi2 = elliptic_psi(tgt)
    subst = {Fel.ctx.z_index(1): psi1, Fel.ctx.z_index(2): psi2}
    f1 = Fel.conjugators[0].substitute(tgt, subst)
    f2 = Fel.conjugators[1].substitute(tgt, subst)
    x, y = tgt.gen(0), tgt.gen(1)
    img_x = bch(-1 * f1, bch(x, f2))
    img_y = conjugate_by_exp(f2, y)
    return TAutElement(tgt, {0: img_x, 1: img_y}, [])


# ---------------------------------------------------------------------------
# torus automorphism phi and the derivations delta_2n


def _check_torus(ctx: AlgebraContext):
    if (ctx.g, ctx.n) != (1, 0):
        raise ValueError("requires the once-holed torus context (g=1, n=0)")


def phi_auto(ctx: AlgebraContext) -> TAutElement:
    """phi: x -> x, y -> ((e^{ad_x} - 1)/ad_x) y; the exp of y -> r(ad_x) y."""
    _check_torus(ctx)
    x, y = ctx.gen(0), ctx.gen(1)
    coeffs = [F(1, _fact(k + 1)) for k in range(ctx.D + 1)]  # (e^s - 1)/s
    return TAutElement(ctx, {0: x, 1: ad_series(coeffs, x, y)}, [])


def phi_log_derivation(ctx: AlgebraContext) -> TangentialDerivation:
    """The derivation x -> 0, y -> r(ad_x) y whose exponential is phi."""
    _check_torus(ctx)
    x, y = ctx.gen(0), ctx.gen(1)
    return TangentialDerivation(ctx, {0: ctx.zero(), 1: ad_series(series_r(ctx.D), x, y)}, [])


def delta2n(ctx: AlgebraContext, n: int) -> TangentialDerivation:
    """delta_{2n}: x -> ad_x^{2n}(y), y -> sum_i (-1)^i [ad_x^i y, ad_x^{2n-1-i} y]."""
    _check_torus(ctx)
    if n < 1:
        raise ValueError("n must be a positive integer")
    x, y = ctx.gen(0), ctx.gen(1)
    ad_pows = [y]
    for _ in range(2 * n):
        ad_pows.append(commutator(x, ad_pows[-1]))
    img_x = ad_pows[2 * n]
    img_y = ctx.zero()
    for i in range(n):
        img_y = img_y + commutator(ad_pows[i], ad_pows[2 * n - 1 - i]).scale((-1) ** i)
    return TangentialDerivation(ctx, {0: img_x, 1: img_y}, [])


def _fact(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out
