"""Exact linear algebra over the rationals

Elimination is fraction-free (Bareiss) on integer rows, followed by
back-substitution to reduced row echelon form. Pivots are chosen as the first
nonzero entry in column order, so results are canonical and reproducible.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Sequence, Tuple

from src.polynomial import Scalar, as_rational

Vector = List[Fraction]


@dataclass(frozen=True)
class EchelonForm:
    """Reduced row echelon form with its pivot columns"""

    rows: Tuple[Tuple[Fraction, ...], ...]
    pivots: Tuple[int, ...]
    n_cols: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def free_columns(self) -> Tuple[int, ...]:
        pivot_set = set(self.pivots)
        return tuple(c for c in range(self.n_cols) if c not in pivot_set)


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def integer_row(row: Sequence[Scalar]) -> List[int]:
    """Scale a rational row to a primitive integer row with the same span"""
    values = [as_rational(v) for v in row]
    denominator = reduce(_lcm, (v.denominator for v in values), 1)
    scaled = [int(v * denominator) for v in values]
    common = reduce(gcd, scaled, 0)
    if common > 1:
        scaled = [v // common for v in scaled]
    return scaled


def fraction_free_echelon(
    rows: Sequence[Sequence[Scalar]], n_cols: int
) -> Tuple[List[List[int]], List[int]]:
    """Bareiss elimination; returns the nonzero echelon rows and pivot columns"""
    matrix = [integer_row(row) for row in rows]
    for row in matrix:
        if len(row) != n_cols:
            raise ValueError(f"Row length {len(row)} differs from column count {n_cols}")

    n_rows = len(matrix)
    pivots: List[int] = []
    previous = 1
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot_row = next((i for i in range(r, n_rows) if matrix[i][c] != 0), None)
        if pivot_row is None:
            continue
        if pivot_row != r:
            matrix[r], matrix[pivot_row] = matrix[pivot_row], matrix[r]
        pivot = matrix[r][c]
        for i in range(r + 1, n_rows):
            factor = matrix[i][c]
            row_i = matrix[i]
            row_r = matrix[r]
            for j in range(c + 1, n_cols):
                row_i[j] = (pivot * row_i[j] - factor * row_r[j]) // previous
            row_i[c] = 0
        previous = pivot
        pivots.append(c)
        r += 1
    return matrix[:r], pivots


def rref(rows: Sequence[Sequence[Scalar]], n_cols: int) -> EchelonForm:
    echelon, pivots = fraction_free_echelon(rows, n_cols)
    reduced = [[Fraction(v) for v in row] for row in echelon]

    for k, c in enumerate(pivots):
        pivot = reduced[k][c]
        reduced[k] = [v / pivot for v in reduced[k]]

    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        for i in range(k):
            factor = reduced[i][c]
            if factor == 0:
                continue
            reduced[i] = [a - factor * b for a, b in zip(reduced[i], reduced[k])]

    return EchelonForm(
        rows=tuple(tuple(row) for row in reduced),
        pivots=tuple(pivots),
        n_cols=n_cols,
    )


def rank(rows: Sequence[Sequence[Scalar]], n_cols: int) -> int:
    return len(fraction_free_echelon(rows, n_cols)[1])


def nullspace(rows: Sequence[Sequence[Scalar]], n_cols: int) -> List[Vector]:
    """Canonical kernel basis: one vector per free column, equal to 1 there"""
    form = rref(rows, n_cols)
    basis: List[Vector] = []
    for free in form.free_columns:
        vector = [Fraction(0)] * n_cols
        vector[free] = Fraction(1)
        for k, c in enumerate(form.pivots):
            vector[c] = -form.rows[k][free]
        basis.append(vector)
    return basis


def mat_vec(rows: Sequence[Sequence[Scalar]], vector: Sequence[Scalar]) -> Vector:
    return [
        sum((as_rational(a) * as_rational(b) for a, b in zip(row, vector)), Fraction(0))
        for row in rows
    ]


def determinant_3x3(m: Sequence[Sequence[int]]) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def gram_determinant(columns: Sequence[Sequence[int]]) -> int:
    """det(M^T M) for a three-column integer matrix given column-wise

    Zero iff the columns are linearly dependent (iff every 3x3 minor vanishes).
    """
    gram = [[sum(a * b for a, b in zip(u, v)) for v in columns] for u in columns]
    return determinant_3x3(gram)
