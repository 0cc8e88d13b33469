"""Dense exact-rational linear algebra for small matrices.

Everything works on lists of lists of Fraction/int.  Sizes stay tiny in this
library (weight blocks rarely exceed a few dozen columns), so clarity beats
asymptotics.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ArgumentError


def rref(rows):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1, 1) / Fraction(rows[r][c])
        rows[r] = [inv * x for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c] != 0:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [row for row in rows if any(x != 0 for x in row)], pivots


def rank(rows) -> int:
    return len(rref(rows)[0])


def nullspace(rows, ncols: int):
    """Basis of the right kernel of the matrix, one row per kernel vector."""
    reduced, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -Fraction(reduced[r][fc])
        basis.append(vec)
    return basis


def invert(matrix):
    """Exact inverse of a square matrix; raises on singular input."""
    n = len(matrix)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    reduced, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ArgumentError("matrix is singular")
    return [row[n:] for row in reduced]


def mat_vec(matrix, vec):
    return [sum(m * v for m, v in zip(row, vec)) for row in matrix]


class RowBasis:
    """Incrementally maintained reduced-echelon basis of a subspace.

    Rows are dense lists over a fixed column count.  ``insert`` returns True
    when the vector enlarged the span.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows = []      # kept in reduced echelon form
        self.pivots = []    # pivot column of each row, strictly increasing

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec):
        """Residual of vec after subtracting its projection onto the span."""
        vec = list(vec)
        for row, p in zip(self.rows, self.pivots):
            f = vec[p]
            if f != 0:
                for c in range(p, self.ncols):
                    vec[c] -= f * row[c]
        return vec

    def insert(self, vec) -> bool:
        res = self.reduce(vec)
        lead = next((c for c in range(self.ncols) if res[c] != 0), None)
        if lead is None:
            return False
        inv = Fraction(1, 1) / Fraction(res[lead])
        res = [inv * x for x in res]
        for i, row in enumerate(self.rows):
            f = row[lead]
            if f != 0:
                self.rows[i] = [x - f * y for x, y in zip(row, res)]
        at = next((i for i, p in enumerate(self.pivots) if p > lead), len(self.pivots))
        self.rows.insert(at, res)
        self.pivots.insert(at, lead)
        return True

    def contains(self, vec) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    def contains_basis(self, other: "RowBasis") -> bool:
        return all(self.contains(row) for row in other.rows)

    def copy(self) -> "RowBasis":
        dup = RowBasis(self.ncols)
        dup.rows = [list(r) for r in self.rows]
        dup.pivots = list(self.pivots)
        return dup
