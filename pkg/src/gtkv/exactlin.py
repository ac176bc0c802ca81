"""Sparse exact linear algebra over the rationals.

Everything downstream (degree-by-degree equation solving, kernel
computations, span membership) reduces to affine systems M x = b with
Fraction entries.  The elimination uses a fixed pivot rule so that repeated
runs on the same input produce byte-identical output: pivots are chosen by
smallest column index first, and among candidate rows by smallest row index.
Free variables are set to zero in the particular solution.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SparseMatrix:
    """Rational matrix stored as {(row, col): value} with no zero entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: dict | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self.rows = rows
        self.cols = cols
        self.entries: dict[tuple[int, int], Fraction] = {}
        if entries:
            for (i, j), v in entries.items():
                self.set(i, j, v)

    def set(self, i: int, j: int, value) -> None:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        v = Fraction(value)
        if v == 0:
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = v

    def add_to(self, i: int, j: int, value) -> None:
        self.set(i, j, self.get(i, j) + Fraction(value))

    def get(self, i: int, j: int) -> Fraction:
        return self.entries.get((i, j), _ZERO)

    @classmethod
    def from_rows(cls, rows) -> "SparseMatrix":
        data = [list(r) for r in rows]
        ncols = max((len(r) for r in data), default=0)
        m = cls(len(data), ncols)
        for i, r in enumerate(data):
            for j, v in enumerate(r):
                m.set(i, j, v)
        return m

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        m = cls(n, n)
        for i in range(n):
            m.set(i, i, 1)
        return m

    def matvec(self, vec) -> list[Fraction]:
        v = [Fraction(x) for x in vec]
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != cols {self.cols}")
        out = [_ZERO] * self.rows
        for (i, j), a in self.entries.items():
            out[i] += a * v[j]
        return out

    def transpose(self) -> "SparseMatrix":
        m = SparseMatrix(self.cols, self.rows)
        for (i, j), a in self.entries.items():
            m.entries[(j, i)] = a
        return m

    def copy(self) -> "SparseMatrix":
        m = SparseMatrix(self.rows, self.cols)
        m.entries = dict(self.entries)
        return m

    def row_dicts(self) -> list[dict[int, Fraction]]:
        out: list[dict[int, Fraction]] = [dict() for _ in range(self.rows)]
        for (i, j), a in sorted(self.entries.items()):
            out[i][j] = a
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return f"SparseMatrix({self.rows}x{self.cols}, {len(self.entries)} entries)"


@dataclass
class AffineSolution:
    """Result of solve_affine.

    particular is None exactly when the system is inconsistent; in that case
    residual holds b - M x_hat for the least-committal pivot solve x_hat, a
    deterministic nonzero witness of inconsistency.  nullspace is a basis of
    ker M (one vector per free column, free coordinate set to 1).
    """

    particular: list[Fraction] | None
    nullspace: list[list[Fraction]]
    pivot_columns: list[int]
    residual: list[Fraction] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.particular is not None


def _rref(M: SparseMatrix, rhs: list[Fraction] | None):
    """Reduced row echelon form with the fixed pivot rule.

    Returns (rows, rhs, pivots) where rows is a list of {col: coeff} dicts,
    rhs the transformed right-hand side (or None), and pivots a list of
    (col, row_position) pairs in elimination order.
    """
    rows = M.row_dicts()
    b = list(rhs) if rhs is not None else None
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    for col in range(M.cols):
        pivot_row = -1
        for i in range(M.rows):
            if i not in used and rows[i].get(col, _ZERO) != 0:
                pivot_row = i
                break
        if pivot_row < 0:
            continue
        used.add(pivot_row)
        pivots.append((col, pivot_row))
        prow = rows[pivot_row]
        inv = _ONE / prow[col]
        if inv != 1:
            for j in list(prow):
                prow[j] *= inv
            if b is not None:
                b[pivot_row] *= inv
        for i in range(M.rows):
            if i == pivot_row:
                continue
            factor = rows[i].get(col, _ZERO)
            if factor == 0:
                continue
            target = rows[i]
            for j, v in prow.items():
                nv = target.get(j, _ZERO) - factor * v
                if nv == 0:
                    target.pop(j, None)
                else:
                    target[j] = nv
            if b is not None:
                b[i] -= factor * b[pivot_row]
    return rows, b, pivots


def solve_affine(M: SparseMatrix, b) -> AffineSolution:
    """Solve M x = b exactly, with reproducible choices.

    The particular solution sets every free variable to zero.  When the
    system is inconsistent, particular is None and residual = b - M x_hat
    where x_hat is assembled from the pivot rows alone.
    """
    bvec = [Fraction(x) for x in b]
    if len(bvec) != M.rows:
        raise ValueError(f"rhs length {len(bvec)} != rows {M.rows}")
    rows, rb, pivots = _rref(M, bvec)
    assert rb is not None
    pivot_cols = [c for c, _ in pivots]

    x_hat = [_ZERO] * M.cols
    for col, r in pivots:
        x_hat[col] = rb[r]

    consistent = True
    for i in range(M.rows):
        if not rows[i] and rb[i] != 0:
            consistent = False
            break

    free_cols = [c for c in range(M.cols) if c not in set(pivot_cols)]
    nullspace: list[list[Fraction]] = []
    for f in free_cols:
        v = [_ZERO] * M.cols
        v[f] = _ONE
        for col, r in pivots:
            coeff = rows[r].get(f, _ZERO)
            if coeff != 0:
                v[col] = -coeff
        nullspace.append(v)

    if consistent:
        return AffineSolution(
            particular=x_hat,
            nullspace=nullspace,
            pivot_columns=pivot_cols,
            residual=[_ZERO] * M.rows,
        )
    residual = [bv - mv for bv, mv in zip(bvec, M.matvec(x_hat))]
    return AffineSolution(
        particular=None,
        nullspace=nullspace,
        pivot_columns=pivot_cols,
        residual=residual,
    )


def nullspace_basis(M: SparseMatrix) -> list[list[Fraction]]:
    return solve_affine(M, [_ZERO] * M.rows).nullspace


def rank(M: SparseMatrix) -> int:
    _, _, pivots = _rref(M, None)
    return len(pivots)


def in_span(vectors: list[list], target: list) -> list[Fraction] | None:
    """Coefficients expressing target in the given spanning vectors, or None.

    Columns are the spanning vectors in the order given; the coefficient
    vector is the deterministic free-vars-zero solution.
    """
    if not vectors:
        return [] if all(Fraction(t) == 0 for t in target) else None
    nrows = len(target)
    M = SparseMatrix(nrows, len(vectors))
    for j, vec in enumerate(vectors):
        if len(vec) != nrows:
            raise ValueError("span vectors and target must have equal length")
        for i, v in enumerate(vec):
            M.set(i, j, v)
    sol = solve_affine(M, target)
    return sol.particular
