"""Logarithmic derivations of an arrangement, degree by degree

F_d D(A) is the kernel of a constraint matrix over the coefficient space C(d):
for every line L and every power t^m, the coefficient of t^m in
(alpha*P + beta*Q) restricted to L must vanish. ``is_logarithmic`` is an
independent membership oracle working directly on chi(Q_A).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from src.arrangement import AffineMatrix, Arrangement, Line
from src.errors import ParseError
from src.linalg import nullspace, rank
from src.polynomial import (
    BivariatePoly,
    Scalar,
    as_rational,
    compose,
    divides_line,
    format_rational,
    parse_polynomial,
    restrict_monomials,
)
from src.utils.logging_setup import Timer

SparseRow = Dict["CoefficientIndex", Fraction]


@dataclass(frozen=True)
class CoefficientIndex:
    """Coordinate a_{i,j} (component P) or b_{i,j} (component Q) of C(d)"""

    component: str
    i: int
    j: int

    @property
    def name(self) -> str:
        letter = "a" if self.component == "P" else "b"
        return f"{letter}_{{{self.i},{self.j}}}"

    def __str__(self) -> str:
        return self.name


def coefficient_indices(d: int) -> List[CoefficientIndex]:
    """Fixed order: P before Q, then total degree, then i descending"""
    if d < 0:
        raise ValueError("Degree must be non-negative")
    return [
        CoefficientIndex(component, i, total - i)
        for component in ("P", "Q")
        for total in range(d + 1)
        for i in range(total, -1, -1)
    ]


@dataclass(frozen=True)
class VectorField:
    """chi = P d/dx + Q d/dy"""

    P: BivariatePoly
    Q: BivariatePoly

    @classmethod
    def parse(cls, text: str) -> "VectorField":
        """Parse ``"P;Q"`` using the polynomial expression grammar"""
        parts = text.split(";")
        if len(parts) != 2:
            raise ParseError("field must be given as 'P;Q'", 1, None)
        p_poly = parse_polynomial(parts[0])
        try:
            q_poly = parse_polynomial(parts[1])
        except ParseError as e:
            offset = len(parts[0]) + 1
            raise ParseError(e.message, 1, None if e.column is None else e.column + offset)
        return cls(p_poly, q_poly)

    @property
    def degree(self) -> int:
        return max(self.P.degree, self.Q.degree)

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Q.is_zero()

    def apply(self, f: BivariatePoly) -> BivariatePoly:
        """chi(f) = P * df/dx + Q * df/dy"""
        return self.P * f.derivative("x") + self.Q * f.derivative("y")

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.P + other.P, self.Q + other.Q)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.P, -self.Q)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __mul__(self, factor) -> "VectorField":
        """Multiply both components by a scalar or a polynomial"""
        return VectorField(self.P * factor, self.Q * factor)

    __rmul__ = __mul__

    def pushforward(
        self, matrix: AffineMatrix, offset: Tuple[Scalar, Scalar] = (0, 0)
    ) -> "VectorField":
        """Conjugate by the affine map p -> matrix * p + offset"""
        (a, b), (c, d) = [[as_rational(v) for v in row] for row in matrix]
        det = a * d - b * c
        if det == 0:
            raise ValueError("Affine map is not invertible")
        ox, oy = as_rational(offset[0]), as_rational(offset[1])
        x_shift = BivariatePoly.linear(1, 0, -ox)
        y_shift = BivariatePoly.linear(0, 1, -oy)
        gx = x_shift * (d / det) + y_shift * (-b / det)
        gy = x_shift * (-c / det) + y_shift * (a / det)
        p_back = compose(self.P, gx, gy)
        q_back = compose(self.Q, gx, gy)
        return VectorField(p_back * a + q_back * b, p_back * c + q_back * d)

    def format(self) -> str:
        return f"{self.P.format()};{self.Q.format()}"

    def __str__(self) -> str:
        return f"({self.P.format()})*dx + ({self.Q.format()})*dy"


def field_to_vector(chi: VectorField, d: int) -> List[Fraction]:
    if chi.degree > d:
        raise ValueError(f"Field of degree {chi.degree} does not fit in C({d})")
    return [
        (chi.P if idx.component == "P" else chi.Q).coefficient(idx.i, idx.j)
        for idx in coefficient_indices(d)
    ]


def vector_to_field(vector: Sequence[Scalar], d: int) -> VectorField:
    columns = coefficient_indices(d)
    if len(vector) != len(columns):
        raise ValueError(f"Vector length {len(vector)} does not match C({d})")
    p_terms: Dict[Tuple[int, int], Scalar] = {}
    q_terms: Dict[Tuple[int, int], Scalar] = {}
    for idx, value in zip(columns, vector):
        target = p_terms if idx.component == "P" else q_terms
        target[(idx.i, idx.j)] = value
    return VectorField(BivariatePoly(p_terms), BivariatePoly(q_terms))


@dataclass(frozen=True)
class ConstraintMatrix:
    """Stacked invariance constraints; its kernel is F_d D(A)"""

    d: int
    columns: Tuple[CoefficientIndex, ...]
    rows: Tuple[Dict[int, Fraction], ...]
    provenance: Tuple[Tuple[int, int], ...]

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    def dense(self) -> List[List[Fraction]]:
        return [
            [row.get(c, Fraction(0)) for c in range(self.n_cols)] for row in self.rows
        ]

    def annihilates(self, vector: Sequence[Scalar]) -> bool:
        for row in self.rows:
            total = sum((c * as_rational(vector[k]) for k, c in row.items()), Fraction(0))
            if total != 0:
                return False
        return True


@dataclass(frozen=True)
class DerivationSpace:
    """Kernel basis of F_d D(A) in canonical reduced-echelon form"""

    d: int
    columns: Tuple[CoefficientIndex, ...]
    vectors: Tuple[Tuple[Fraction, ...], ...]
    rank: int

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def basis(self) -> List[VectorField]:
        return [vector_to_field(v, self.d) for v in self.vectors]

    def combination(self, coefficients: Sequence[Scalar]) -> VectorField:
        if len(coefficients) != self.dim:
            raise ValueError("Coefficient count differs from the dimension")
        total = [Fraction(0)] * len(self.columns)
        for coeff, vector in zip(coefficients, self.vectors):
            c = as_rational(coeff)
            if c == 0:
                continue
            total = [t + c * v for t, v in zip(total, vector)]
        return vector_to_field(total, self.d)


def line_constraint_rows(line: Line, d: int) -> List[SparseRow]:
    """Row m is Coeff_{t^m} of (alpha*P + beta*Q) restricted to the line"""
    if d < 0:
        raise ValueError("Degree must be non-negative")
    restricted = restrict_monomials(line, d)
    rows: List[SparseRow] = [{} for _ in range(d + 1)]
    for idx in coefficient_indices(d):
        weight = line.alpha if idx.component == "P" else line.beta
        if weight == 0:
            continue
        for power, c in enumerate(restricted[(idx.i, idx.j)].coeffs):
            if c != 0:
                rows[power][idx] = rows[power].get(idx, Fraction(0)) + weight * c
    return rows


def printed_constraint_rows(line: Line, d: int, gamma_sign: int = -1) -> List[SparseRow]:
    """Rows of the closed-form coefficient equations for a non-vertical line

    Coeff_m = sum_{k, l} (alpha*a_{m-l,k+l} + beta*b_{m-l,k+l}) * C(k+l, k)
              * (-alpha)^l * beta^(m-k-l) * (gamma_sign*gamma)^k,
    multiplied by beta^d so every power of beta is non-negative. With
    gamma_sign = -1 this parametrizes the line as (beta*t, -alpha*t - gamma/beta).
    """
    alpha, beta, gamma = line.alpha, line.beta, line.gamma
    if beta == 0:
        raise ValueError("Closed-form rows need beta != 0")
    signed_gamma = gamma_sign * gamma
    rows: List[SparseRow] = []
    for m in range(d + 1):
        row: SparseRow = {}
        for k in range(d - m + 1):
            for l in range(m + 1):
                i, j = m - l, k + l
                scale = (
                    comb(k + l, k)
                    * (-alpha) ** l
                    * beta ** (m - k - l + d)
                    * signed_gamma**k
                )
                if scale == 0:
                    continue
                for component, weight in (("P", alpha), ("Q", beta)):
                    if weight == 0:
                        continue
                    idx = CoefficientIndex(component, i, j)
                    row[idx] = row.get(idx, Fraction(0)) + Fraction(weight * scale)
        rows.append({k: v for k, v in row.items() if v != 0})
    return rows


def build_matrix(arrangement: Arrangement, d: int) -> ConstraintMatrix:
    """n(d+1) x (d+1)(d+2) constraint matrix"""
    columns = coefficient_indices(d)
    position = {idx: k for k, idx in enumerate(columns)}
    rows: List[Dict[int, Fraction]] = []
    provenance: List[Tuple[int, int]] = []
    for line_index, line in enumerate(arrangement):
        for power, row in enumerate(line_constraint_rows(line, d)):
            rows.append({position[idx]: c for idx, c in row.items()})
            provenance.append((line_index, power))
    return ConstraintMatrix(
        d=d, columns=tuple(columns), rows=tuple(rows), provenance=tuple(provenance)
    )


def kernel_basis(matrix: ConstraintMatrix) -> DerivationSpace:
    timer = Timer()
    dense = matrix.dense()
    vectors = nullspace(dense, matrix.n_cols)
    matrix_rank = rank(dense, matrix.n_cols)
    if matrix_rank + len(vectors) != matrix.n_cols:
        raise AssertionError("rank + nullity differs from the column count")
    logging.debug(
        f"Kernel at d={matrix.d}: {matrix.n_rows}x{matrix.n_cols}, rank {matrix_rank}, "
        f"dim {len(vectors)} ({timer.elapsed:.3f}s)"
    )
    return DerivationSpace(
        d=matrix.d,
        columns=matrix.columns,
        vectors=tuple(tuple(v) for v in vectors),
        rank=matrix_rank,
    )


def derivation_space(arrangement: Arrangement, d: int) -> DerivationSpace:
    return kernel_basis(build_matrix(arrangement, d))


def filtration_dims(arrangement: Arrangement, d_max: int) -> List[int]:
    """dim F_d D(A) for d = 0..d_max"""
    if d_max < 0:
        raise ValueError("d_max must be non-negative")
    return [derivation_space(arrangement, d).dim for d in range(d_max + 1)]


def is_invariant_line(chi: VectorField, line: Line) -> bool:
    """The line is invariant iff alpha*P + beta*Q vanishes on it"""
    return divides_line(line, chi.apply(line.form()))


def is_logarithmic(chi: VectorField, arrangement: Arrangement) -> bool:
    """chi(Q_A) divisible by every affine form of A"""
    if chi.is_zero():
        return True
    image = chi.apply(arrangement.defining_polynomial())
    return all(divides_line(line, image) for line in arrangement)


def dump_matrix(matrix: ConstraintMatrix, space: Optional[DerivationSpace] = None) -> str:
    """Text dump: column header, one row per line, exact rationals"""
    out = [
        f"# constraint matrix d={matrix.d} rows={matrix.n_rows} cols={matrix.n_cols}",
        "# columns: " + " ".join(idx.name for idx in matrix.columns),
    ]
    for (line_index, power), row in zip(matrix.provenance, matrix.dense()):
        values = " ".join(format_rational(v) for v in row)
        out.append(f"L{line_index + 1} t^{power}: {values}")
    if space is not None:
        out.append(f"# kernel basis dim={space.dim}")
        for k, vector in enumerate(space.vectors):
            out.append(f"v{k + 1}: " + " ".join(format_rational(v) for v in vector))
    return "\n".join(out) + "\n"
