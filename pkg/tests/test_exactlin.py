"""Exact sparse linear solver: correctness and determinism."""
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtkv.exactlin import SparseMatrix, in_span, nullspace_basis, rank, solve_affine

F = Fraction


def test_identity_system():
    M = SparseMatrix.identity(4)
    b = [F(1), F(-2), F(3, 7), F(0)]
    sol = solve_affine(M, b)
    assert sol.consistent
    assert sol.particular == b
    assert sol.nullspace == []
    assert sol.pivot_columns == [0, 1, 2, 3]


def test_single_equation_free_variable():
    # x0 + x1 = 1: free-vars-zero particular, one-dimensional kernel.
    M = SparseMatrix.from_rows([[1, 1]])
    sol = solve_affine(M, [1])
    assert sol.particular == [F(1), F(0)]
    assert len(sol.nullspace) == 1
    v = sol.nullspace[0]
    assert M.matvec(v) == [F(0)]
    # spans the same line as (1, -1)
    assert v[0] * (-1) == v[1] * 1


def test_inconsistent_residual_nonzero():
    M = SparseMatrix.from_rows([[1, 0], [1, 0]])
    sol = solve_affine(M, [1, 2])
    assert sol.particular is None
    assert any(r != 0 for r in sol.residual)
    # residual is b - M x_hat with x_hat from the pivot rows
    assert sol.residual == [F(0), F(1)]


def test_zero_matrix():
    M = SparseMatrix(2, 3)
    sol = solve_affine(M, [0, 0])
    assert sol.consistent
    assert sol.particular == [F(0)] * 3
    assert len(sol.nullspace) == 3
    bad = solve_affine(M, [0, 5])
    assert bad.particular is None
    assert bad.residual == [F(0), F(5)]


def test_rank_and_nullspace_dimensions():
    M = SparseMatrix.from_rows([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(M) == 2
    ns = nullspace_basis(M)
    assert len(ns) == 1
    assert M.matvec(ns[0]) == [F(0)] * 3


def _random_matrix(rng: random.Random, rows: int, cols: int, density: float):
    M = SparseMatrix(rows, cols)
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                M.set(i, j, F(rng.randint(-5, 5), rng.randint(1, 4)))
    return M


def test_random_solvable_systems():
    rng = random.Random(20260822)
    for _ in range(25):
        rows, cols = rng.randint(1, 20), rng.randint(1, 30)
        M = _random_matrix(rng, rows, cols, 0.3)
        x = [F(rng.randint(-3, 3)) for _ in range(cols)]
        b = M.matvec(x)
        sol = solve_affine(M, b)
        assert sol.consistent
        assert M.matvec(sol.particular) == b
        for v in sol.nullspace:
            assert M.matvec(v) == [F(0)] * rows
        # kernel dimension matches rank-nullity
        assert len(sol.nullspace) == cols - rank(M)


def test_nullspace_linear_independence():
    rng = random.Random(7)
    M = _random_matrix(rng, 8, 14, 0.35)
    ns = nullspace_basis(M)
    # each vector has a 1 in a free coordinate where the others vanish
    if ns:
        frees = []
        for v in ns:
            ones = [j for j, val in enumerate(v) if val == 1]
            frees.append(set(ones))
        for k, v in enumerate(ns):
            private = frees[k] - set().union(*(frees[i] for i in range(len(ns)) if i != k)) if len(ns) > 1 else frees[k]
            assert private, "nullspace vectors must be independent by construction"


def test_determinism_repeat_calls():
    rng = random.Random(99)
    M = _random_matrix(rng, 12, 18, 0.4)
    b = [F(rng.randint(-4, 4)) for _ in range(12)]
    s1 = solve_affine(M, b)
    s2 = solve_affine(M.copy(), list(b))
    assert s1.particular == s2.particular
    assert s1.nullspace == s2.nullspace
    assert s1.pivot_columns == s2.pivot_columns
    assert s1.residual == s2.residual


def test_in_span():
    v1 = [F(1), F(0), F(1)]
    v2 = [F(0), F(1), F(1)]
    assert in_span([v1, v2], [F(2), F(3), F(5)]) == [F(2), F(3)]
    assert in_span([v1, v2], [F(0), F(0), F(1)]) is None
    assert in_span([], [F(0), F(0)]) == []
    assert in_span([], [F(1), F(0)]) is None


@st.composite
def _matrix_and_vector(draw):
    rows = draw(st.integers(min_value=1, max_value=6))
    cols = draw(st.integers(min_value=1, max_value=6))
    ents = draw(
        st.lists(
            st.tuples(
                st.integers(0, rows - 1),
                st.integers(0, cols - 1),
                st.integers(-4, 4),
            ),
            max_size=12,
        )
    )
    M = SparseMatrix(rows, cols)
    for i, j, v in ents:
        M.set(i, j, M.get(i, j) + v)
    x = draw(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols))
    return M, x


@given(_matrix_and_vector())
@settings(max_examples=60, deadline=None)
def test_property_solution_reproduces_rhs(mx):
    M, x = mx
    b = M.matvec(x)
    sol = solve_affine(M, b)
    assert sol.consistent
    assert M.matvec(sol.particular) == b
    for v in sol.nullspace:
        assert all(c == 0 for c in M.matvec(v))


@given(_matrix_and_vector(), st.lists(st.integers(-3, 3), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_property_inconsistent_has_witness(mx, braw):
    M, _ = mx
    b = (braw * M.rows)[: M.rows]
    sol = solve_affine(M, b)
    if sol.particular is None:
        assert any(r != 0 for r in sol.residual)
    else:
        assert M.matvec(sol.particular) == [Fraction(v) for v in b]


def test_bad_shapes_raise():
    M = SparseMatrix(2, 2)
    with pytest.raises(ValueError):
        solve_affine(M, [1, 2, 3])
    with pytest.raises(IndexError):
        M.set(5, 0, 1)
