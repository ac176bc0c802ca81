"""Shared builders for randomized checks across the test modules."""
from fractions import Fraction

from gtkv.tensor_algebra import TensorElement
from gtkv.derivations import TangentialDerivation, exp_tder


def random_element(ctx, rng, max_weight=None, eps_free=True, nterms=4):
    """Sparse random combination of basis words."""
    max_weight = max_weight if max_weight is not None else ctx.D
    words = ctx.basis_words_up_to(max_weight)
    if eps_free:
        words = [w for w in words if len(w) > 0]
    data = {}
    for _ in range(nterms):
        w = words[rng.randrange(len(words))]
        c = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        if c:
            data[w] = data.get(w, Fraction(0)) + c
    return TensorElement(ctx, {w: c for w, c in data.items() if c != 0})


def random_lie(ctx, rng, weight, nterms=2):
    """Random element of the weight-homogeneous free Lie part."""
    basis = ctx.lyndon_basis(weight)
    out = ctx.zero()
    if not basis:
        return out
    for _ in range(nterms):
        _, elem = basis[rng.randrange(len(basis))]
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        out = out + elem.scale(c)
    return out


def random_primitive(ctx, rng, max_weight=None, nterms=3):
    max_weight = max_weight if max_weight is not None else ctx.D
    out = ctx.zero()
    for _ in range(nterms):
        w = rng.randint(1, max_weight)
        out = out + random_lie(ctx, rng, w, nterms=1)
    return out


def random_tangential(ctx, rng, degrees=(1, 2), nterms=1):
    """Random tangential derivation supported in the given degrees."""
    images = {}
    for i in range(2 * ctx.g):
        img = ctx.zero()
        for d in degrees:
            if d + 1 <= ctx.D:
                img = img + random_lie(ctx, rng, d + 1, nterms=nterms)
        images[i] = img
    comps = []
    for _ in range(ctx.n):
        u_j = ctx.zero()
        for d in degrees:
            if d <= ctx.D:
                u_j = u_j + random_lie(ctx, rng, d, nterms=nterms)
        comps.append(u_j)
    return TangentialDerivation(ctx, images, comps)


def random_taut(ctx, rng, degrees=(1, 2), nterms=1):
    """Random tangential automorphism (exponential of a positive derivation)."""
    return exp_tder(random_tangential(ctx, rng, degrees=degrees, nterms=nterms))
