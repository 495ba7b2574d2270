"""Classification of vector fields and the d_f driver

A nonzero field chi = (P, Q) is central, parallel or of finite type. All three
cases are read off the homogeneous system in (A, B, C):

    (A*x + B) * Q - (A*y + C) * P = 0

A solution with A != 0 gives a center (-B/A, -C/A); one with A = 0 gives a
direction (B, C); no solution means finite type.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce
from itertools import product
from math import gcd
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import sympy as sp

from src.arrangement import (
    Arrangement,
    Direction,
    Line,
    Point,
    canonical_direction,
    combinatorial_data,
)
from src.derivations import (
    DerivationSpace,
    VectorField,
    derivation_space,
    is_invariant_line,
    is_logarithmic,
)
from src.errors import AmbiguousClass, DimensionTooLarge, InfiniteType, NoSingularPoint
from src.linalg import gram_determinant, nullspace, rank
from src.polynomial import BivariatePoly, Monomial, divides_line, format_rational
from src.utils.logging_setup import Timer

DEFAULT_GRID_CAP = 10

# Minors of the classification matrix have total degree <= 3 in the subspace
# coordinates, so a grid with 4 values per coordinate is a zero test, and so
# are the points with coordinate sum <= 3.
GRID_VALUES = range(4)
LATTICE_DEGREE = 3
# det(M^T M) has degree <= 6.
SYMBOLIC_GRID_VALUES = range(7)


class ClassTag(str, Enum):
    NULL = "null"
    CENTRAL = "central"
    PARALLEL = "parallel"
    FINITE = "finite"


@dataclass(frozen=True)
class FieldClass:
    """Null, Central(center), Parallel(direction) or Finite"""

    tag: ClassTag
    center: Optional[Point] = None
    direction: Optional[Direction] = None

    @property
    def is_infinite_type(self) -> bool:
        return self.tag in (ClassTag.CENTRAL, ClassTag.PARALLEL)

    def describe(self) -> str:
        if self.tag == ClassTag.CENTRAL and self.center is not None:
            return f"central ({self.center[0]}, {self.center[1]})"
        if self.tag == ClassTag.PARALLEL and self.direction is not None:
            return f"parallel ({self.direction[0]}, {self.direction[1]})"
        return self.tag.value


def _classification_columns(
    chi: VectorField,
) -> Tuple[Dict[Monomial, Fraction], Dict[Monomial, Fraction], Dict[Monomial, Fraction]]:
    """Coefficients multiplying A, B and C in (Ax+B)Q - (Ay+C)P"""
    column_a = BivariatePoly.x() * chi.Q - BivariatePoly.y() * chi.P
    return column_a.terms, chi.Q.terms, (-chi.P).terms


def _solution_space(chi: VectorField) -> List[List[Fraction]]:
    columns = _classification_columns(chi)
    monomials = sorted(set(columns[0]) | set(columns[1]) | set(columns[2]))
    rows = [[col.get(mono, Fraction(0)) for col in columns] for mono in monomials]
    return nullspace(rows, 3)


def _from_solution(solution: Sequence[Fraction]) -> FieldClass:
    a, b, c = solution
    if a != 0:
        return FieldClass(ClassTag.CENTRAL, center=(-b / a, -c / a))
    return FieldClass(ClassTag.PARALLEL, direction=canonical_direction(b, c))


def classify(chi: VectorField) -> FieldClass:
    if chi.is_zero():
        return FieldClass(ClassTag.NULL)

    solutions = _solution_space(chi)
    if not solutions:
        return FieldClass(ClassTag.FINITE)
    if len(solutions) == 1:
        return _from_solution(solutions[0])

    # Several independent solutions: prefer an A = 0 combination
    first, second = solutions[0], solutions[1]
    if first[0] == 0:
        parallel = first
    elif second[0] == 0:
        parallel = second
    else:
        parallel = [second[0] * u - first[0] * v for u, v in zip(first, second)]
    if parallel[1] == 0 and parallel[2] == 0:
        raise AmbiguousClass(f"Unresolvable classification system for {chi}")
    logging.warning(
        f"Classification system of dimension {len(solutions)} resolved to parallel"
    )
    return _from_solution(parallel)


@dataclass(frozen=True)
class SubspaceDecision:
    """Outcome of the all-infinite test on a derivation space"""

    all_infinite: bool
    method: str
    points_checked: int
    witness_point: Optional[Tuple[int, ...]] = None
    witness: Optional[VectorField] = None


class _IntegerClassificationMatrix:
    """Classification columns of every basis field, scaled to one integer lattice"""

    def __init__(self, space: DerivationSpace):
        per_field = [_classification_columns(chi) for chi in space.basis]
        monomials = sorted(
            {mono for columns in per_field for column in columns for mono in column}
        )
        scale = 1
        for columns in per_field:
            for column in columns:
                for value in column.values():
                    scale = scale * value.denominator // gcd(scale, value.denominator)

        self.monomials = monomials
        self.columns: List[List[List[int]]] = [
            [[int(column.get(mono, 0) * scale) for mono in monomials] for column in columns]
            for columns in per_field
        ]

    def gram_at(self, point: Sequence[int]) -> int:
        size = len(self.monomials)
        combined = [[0] * size for _ in range(3)]
        for weight, columns in zip(point, self.columns):
            if weight == 0:
                continue
            for k in range(3):
                target = combined[k]
                for r, value in enumerate(columns[k]):
                    if value:
                        target[r] += weight * value
        return gram_determinant(combined)

    def symbolic_gram(self, symbols: Sequence[sp.Symbol]) -> sp.Poly:
        size = len(self.monomials)
        combined = [
            [
                sum(
                    (t * columns[k][r] for t, columns in zip(symbols, self.columns)),
                    sp.Integer(0),
                )
                for r in range(size)
            ]
            for k in range(3)
        ]
        matrix = sp.Matrix(combined).T
        gram = (matrix.T * matrix).det(method="berkowitz")
        return sp.Poly(sp.expand(gram), *symbols)


def lattice_points(dim: int, degree: int = LATTICE_DEGREE) -> Iterator[Tuple[int, ...]]:
    """Points of N^dim with coordinate sum <= degree, in lexicographic order"""
    if dim == 0:
        yield ()
        return
    for head in range(degree + 1):
        for tail in lattice_points(dim - 1, degree - head):
            yield (head,) + tail


def _gram_checked(
    matrix: _IntegerClassificationMatrix,
    space: DerivationSpace,
    point: Tuple[int, ...],
    cross_check: bool,
) -> int:
    gram = matrix.gram_at(point)
    if cross_check and gram == 0 and any(point):
        if classify(space.combination(point)).tag == ClassTag.FINITE:
            raise AssertionError(f"Grid point {point} is finite but its minors vanish")
    return gram


def _finite_at(
    space: DerivationSpace, method: str, checked: int, point: Tuple[int, ...]
) -> SubspaceDecision:
    witness = space.combination(point)
    if classify(witness).tag != ClassTag.FINITE:
        raise AssertionError(f"Grid witness {point} does not classify as finite")
    logging.debug(f"Finite witness at {method} point {point} after {checked} points")
    return SubspaceDecision(
        all_infinite=False,
        method=method,
        points_checked=checked,
        witness_point=point,
        witness=witness,
    )


def subspace_all_infinite(
    space: DerivationSpace,
    grid_cap: int = DEFAULT_GRID_CAP,
    method: str = "grid",
    cross_check: bool = False,
) -> SubspaceDecision:
    """Decide whether every nonzero element of the space is central or parallel

    The Gram determinant det(M^T M) of the classification matrix vanishes at a
    point exactly when every 3x3 minor does. method="grid" returns the first
    point of {0,1,2,3}^dim in lexicographic order where it does not vanish;
    the all-infinite verdict is reached on the degree-3 lattice alone.
    method="lattice" only visits the lattice and has no dimension cap.
    method="symbolic" expands the determinant with sympy and searches a
    witness on {0..6}^dim. With cross_check every vanishing point is also
    classified directly.
    """
    dim = space.dim
    if dim < 1:
        raise ValueError("Subspace decision needs a space of dimension >= 1")
    if method not in ("grid", "lattice", "symbolic"):
        raise ValueError(f"Unknown subspace decision method {method!r}")
    if method == "grid" and dim > grid_cap:
        raise DimensionTooLarge(dim, grid_cap)

    timer = Timer()
    matrix = _IntegerClassificationMatrix(space)
    checked = 0

    if method == "symbolic":
        symbols = sp.symbols(f"t1:{dim + 1}")
        if matrix.symbolic_gram(symbols).is_zero:
            logging.debug(f"Symbolic Gram determinant vanishes identically (dim {dim})")
            return SubspaceDecision(all_infinite=True, method=method, points_checked=0)
        points: Iterable[Tuple[int, ...]] = product(SYMBOLIC_GRID_VALUES, repeat=dim)
    else:
        lattice_witness = None
        for point in lattice_points(dim):
            checked += 1
            if _gram_checked(matrix, space, point, cross_check) != 0:
                lattice_witness = point
                break
        if lattice_witness is None:
            logging.debug(
                f"All {checked} lattice points infinite-type (dim {dim}, "
                f"{timer.elapsed:.3f}s)"
            )
            return SubspaceDecision(all_infinite=True, method=method, points_checked=checked)
        if method == "lattice":
            return _finite_at(space, method, checked, lattice_witness)
        points = product(GRID_VALUES, repeat=dim)

    for point in points:
        checked += 1
        if _gram_checked(matrix, space, point, cross_check) != 0:
            return _finite_at(space, method, checked, point)
    raise AssertionError("Nonzero Gram determinant without a witness point")


BOUND_USED = "bound-used"
SUBSPACE_DECISION = "subspace-decision"
NO_NEW_ELEMENTS = "no-new-elements"


@dataclass(frozen=True)
class TrailEntry:
    d: int
    dim: int
    decision: str
    bound: Optional[str] = None
    method: Optional[str] = None
    finite_found: bool = False


@dataclass
class DfReport:
    """Result of the d_f search; d_f is None when nothing was found up to d_max"""

    d_max: int
    d_f: Optional[int] = None
    witness: Optional[VectorField] = None
    trail: List[TrailEntry] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.d_f is not None

    @property
    def not_found_below(self) -> Optional[int]:
        return None if self.found else self.d_max

    def describe(self) -> str:
        if self.found:
            return f"d_f = {self.d_f}"
        return f"d_f > {self.d_max} (no finite-type element up to degree {self.d_max})"


def _space(
    arrangement: Arrangement, d: int, spaces: Optional[Dict[int, DerivationSpace]]
) -> DerivationSpace:
    if spaces is None:
        return derivation_space(arrangement, d)
    if d not in spaces:
        spaces[d] = derivation_space(arrangement, d)
    return spaces[d]


def _decide(
    space: DerivationSpace, grid_cap: int, fallback_above_cap: bool
) -> SubspaceDecision:
    try:
        return subspace_all_infinite(space, grid_cap=grid_cap)
    except DimensionTooLarge as e:
        if not fallback_above_cap:
            raise
        # A finite basis element already settles the question
        for k, chi in enumerate(space.basis):
            if classify(chi).tag == ClassTag.FINITE:
                point = tuple(int(i == k) for i in range(space.dim))
                logging.info(f"{e}; basis element {k + 1} is finite-type")
                return SubspaceDecision(
                    all_infinite=False,
                    method="basis-screen",
                    points_checked=k + 1,
                    witness_point=point,
                    witness=chi,
                )
        logging.info(f"{e}; switching to the lattice decision")
        return subspace_all_infinite(space, method="lattice")


def compute_df(
    arrangement: Arrangement,
    d_max: int,
    grid_cap: int = DEFAULT_GRID_CAP,
    fallback_above_cap: bool = True,
    spaces: Optional[Dict[int, DerivationSpace]] = None,
) -> DfReport:
    """Minimal degree of a finite-type logarithmic field, searched up to d_max

    ``spaces`` is an optional cache of derivation spaces keyed by degree; it is
    filled as degrees are computed.
    """
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    data = combinatorial_data(arrangement)
    report = DfReport(d_max=d_max)
    previous_dim = _space(arrangement, 0, spaces).dim

    for d in range(1, d_max + 1):
        space = _space(arrangement, d, spaces)
        if space.dim <= previous_dim:
            report.trail.append(TrailEntry(d=d, dim=space.dim, decision=NO_NEW_ELEMENTS))
            continue
        previous_dim = space.dim

        if d < data.nu_f:
            witness = next(chi for chi in space.basis if chi.degree == d)
            if classify(witness).tag == ClassTag.FINITE:
                report.trail.append(
                    TrailEntry(
                        d=d,
                        dim=space.dim,
                        decision=BOUND_USED,
                        bound=f"d={d} < nu_f={data.nu_f}",
                        finite_found=True,
                    )
                )
                report.d_f, report.witness = d, witness
                break
            logging.error(
                f"Degree {d} element below nu_f={data.nu_f} is not finite-type; "
                "falling back to the subspace decision"
            )

        decision = _decide(space, grid_cap, fallback_above_cap)
        report.trail.append(
            TrailEntry(
                d=d,
                dim=space.dim,
                decision=SUBSPACE_DECISION,
                method=decision.method,
                finite_found=not decision.all_infinite,
            )
        )
        if not decision.all_infinite:
            report.d_f, report.witness = d, decision.witness
            break

    if report.witness is not None and not is_logarithmic(report.witness, arrangement):
        raise AssertionError("d_f witness is not logarithmic")
    label = arrangement.name or "arrangement"
    logging.info(f"{label}: {report.describe()}")
    return report


def minimal_central(arrangement: Arrangement) -> VectorField:
    """Q_{A'} * ((x - cx) d/dx + (y - cy) d/dy) around a point of maximal multiplicity"""
    data = combinatorial_data(arrangement)
    if not data.sing:
        raise NoSingularPoint("All lines are parallel; there is no singular point")
    chosen = min(data.sing, key=lambda s: (-s.multiplicity, s.point))
    others = [i for i in range(data.n) if i not in chosen.incident_lines]
    h = arrangement.sub_arrangement_polynomial(others)
    cx, cy = chosen.point
    return VectorField(
        h * BivariatePoly.linear(1, 0, -cx), h * BivariatePoly.linear(0, 1, -cy)
    )


def minimal_parallel(arrangement: Arrangement) -> VectorField:
    """Q_{A'} * (vx d/dx + vy d/dy) for a largest class of parallel lines"""
    data = combinatorial_data(arrangement)
    direction, members = min(
        zip(data.class_directions, data.parallel_classes),
        key=lambda item: (-len(item[1]), item[0]),
    )
    others = [i for i in range(data.n) if i not in members]
    h = arrangement.sub_arrangement_polynomial(others)
    return VectorField(h * direction[0], h * direction[1])


@dataclass(frozen=True)
class BoundStatement:
    """One machine-checkable claim about the filtration"""

    claim: str
    d: Optional[int]
    holds: bool
    detail: str = ""


@dataclass
class BoundsReport:
    nu_inf: int
    nu_f: int
    nu: int
    statements: List[BoundStatement] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(s.holds for s in self.statements)


@dataclass(frozen=True)
class InfiniteSubspace:
    """Elements of F_d central at one point, or parallel to one direction"""

    tag: ClassTag
    dim: int
    center: Optional[Point] = None
    direction: Optional[Direction] = None

    def describe(self) -> str:
        if self.center is not None:
            where = ", ".join(format_rational(c) for c in self.center)
            return f"central at ({where}), dim {self.dim}"
        return f"parallel to {self.direction}, dim {self.dim}"


def _relation_kernel_dim(relations: List[BivariatePoly]) -> int:
    """Dimension of the combinations of ``relations`` that vanish identically"""
    monomials = sorted({m for f in relations for m in f.terms})
    if not monomials:
        return len(relations)
    rows = [[f.coefficient(*m) for f in relations] for m in monomials]
    return len(relations) - rank(rows, len(relations))


def infinite_type_subspaces(
    arrangement: Arrangement, space: DerivationSpace
) -> List[InfiniteSubspace]:
    """Every nonzero central or parallel subspace of F_d, for d below the line count

    A logarithmic field g*(x - a, y - b) needs g divisible by each line missing
    (a, b); with deg g < n - 1 the center lies on two lines at least. A field
    h*(u, v) needs h divisible by each line not of direction (u, v), so (u, v)
    is a line direction. The candidates below are thus exhaustive, and an
    element of F_d is of infinite type iff it lies in one of the subspaces.
    """
    data = combinatorial_data(arrangement)
    if space.d >= data.n:
        raise ValueError(f"Degree {space.d} is not below the line count {data.n}")
    basis = space.basis
    found: List[InfiniteSubspace] = []
    if not basis:
        return found
    x, y = BivariatePoly.x(), BivariatePoly.y()
    for point in data.sing:
        a, b = point.point
        dim = _relation_kernel_dim([(x - a) * chi.Q - (y - b) * chi.P for chi in basis])
        if dim:
            found.append(InfiniteSubspace(ClassTag.CENTRAL, dim, center=point.point))
    for direction in data.class_directions:
        u, v = direction
        dim = _relation_kernel_dim([chi.P * v - chi.Q * u for chi in basis])
        if dim:
            found.append(InfiniteSubspace(ClassTag.PARALLEL, dim, direction=direction))
    return found


def _whole_space(
    subspaces: List[InfiniteSubspace], tag: ClassTag, dim: int
) -> Optional[InfiniteSubspace]:
    # A vector space is never a finite union of proper subspaces
    return next((s for s in subspaces if s.tag == tag and s.dim == dim), None)


def bounds_check(
    arrangement: Arrangement,
    grid_cap: int = DEFAULT_GRID_CAP,
    spaces: Optional[Dict[int, DerivationSpace]] = None,
    df_report: Optional[DfReport] = None,
) -> BoundsReport:
    """Check the emptiness, infinite-type and finite-type bounds degree by degree"""
    data = combinatorial_data(arrangement)
    report = BoundsReport(nu_inf=data.nu_inf, nu_f=data.nu_f, nu=data.nu)
    statements = report.statements
    top = max(data.nu_inf, data.nu_f, data.m - 1, data.p)

    for d in range(1, top):
        space = _space(arrangement, d, spaces)
        if d < data.nu:
            statements.append(
                BoundStatement("empty-below-nu", d, space.dim == 0, f"dim F_{d} = {space.dim}")
            )
        if space.dim == 0:
            continue
        subspaces = infinite_type_subspaces(arrangement, space)
        if d < data.nu_inf:
            decision = _decide(space, grid_cap, fallback_above_cap=True)
            statements.append(
                BoundStatement(
                    "infinite-below-nu-inf",
                    d,
                    decision.all_infinite,
                    f"dim F_{d} = {space.dim}, {decision.method} decision",
                )
            )
        if d < data.m - 1:
            whole = _whole_space(subspaces, ClassTag.CENTRAL, space.dim)
            statements.append(
                BoundStatement(
                    "central-below-m-minus-1",
                    d,
                    whole is not None,
                    whole.describe() if whole else "no common center",
                )
            )
        if d < data.p:
            whole = _whole_space(subspaces, ClassTag.PARALLEL, space.dim)
            statements.append(
                BoundStatement(
                    "parallel-below-p",
                    d,
                    whole is not None,
                    whole.describe() if whole else "no common direction",
                )
            )
        if d < data.nu_f:
            detail = "; ".join(s.describe() for s in subspaces) or "no infinite-type element"
            statements.append(BoundStatement("finite-below-nu-f", d, not subspaces, detail))

    statements.append(_infinite_at_nu_f(arrangement))

    if df_report is not None and df_report.found:
        statements.append(
            BoundStatement(
                "df-at-least-nu-inf",
                df_report.d_f,
                df_report.d_f is not None and df_report.d_f >= data.nu_inf,
                f"d_f = {df_report.d_f}, nu_inf = {data.nu_inf}",
            )
        )
    failed = [s for s in statements if not s.holds]
    if failed:
        logging.warning(f"{len(failed)} bound statements failed: {[s.claim for s in failed]}")
    return report


def _infinite_at_nu_f(arrangement: Arrangement) -> BoundStatement:
    data = combinatorial_data(arrangement)
    n, m, p, nu_f = data.n, data.m, data.p, data.nu_f
    degrees = []
    holds = True
    if data.sing:
        central = minimal_central(arrangement)
        holds &= central.degree == n - m + 1
        holds &= is_logarithmic(central, arrangement)
        holds &= classify(central).tag == ClassTag.CENTRAL
        degrees.append(central.degree)
    parallel = minimal_parallel(arrangement)
    holds &= parallel.degree == n - p
    holds &= is_logarithmic(parallel, arrangement)
    holds &= classify(parallel).tag == ClassTag.PARALLEL
    degrees.append(parallel.degree)
    holds &= min(degrees) == nu_f
    return BoundStatement(
        "infinite-nonempty-at-nu-f",
        nu_f,
        holds,
        f"constructor degrees {degrees}",
    )


@dataclass(frozen=True)
class InvariantLines:
    """Rational invariant lines of a finite-type field

    ``complete`` is true when every real invariant line is in the list.
    """

    rational_lines: Tuple[Line, ...]
    complete: bool


_X, _Y, _M, _C = sp.symbols("x y m c")


def _to_sympy(f: BivariatePoly) -> sp.Expr:
    return sum(
        (sp.Rational(c.numerator, c.denominator) * _X**i * _Y**j for (i, j), c in f.items()),
        sp.Integer(0),
    )


def _to_fraction(value: sp.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _gcd_all(polys: Sequence[sp.Poly], gen: sp.Symbol) -> sp.Poly:
    return reduce(lambda acc, f: acc.gcd(f), polys, sp.Poly(0, gen, domain="QQ"))


def _rational_roots(poly: sp.Poly) -> Tuple[List[Fraction], bool]:
    """Rational roots and whether every real root is rational

    Irreducible factors of degree two or more without real roots keep the result
    exhaustive, so ``complete`` is looser than full linear factorization over Q.
    """
    roots: List[Fraction] = []
    exhaustive = True
    for factor, _ in poly.factor_list()[1]:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            roots.append(_to_fraction(-b / a))
        elif factor.degree() > 1 and factor.count_roots() > 0:
            exhaustive = False
    return sorted(set(roots)), exhaustive


def _slope_eliminant(conditions: List[sp.Expr]) -> sp.Poly:
    """Univariate polynomial in m vanishing at every admissible slope"""
    c_free = [sp.Poly(f, _M, domain="QQ") for f in conditions if _C not in f.free_symbols]
    with_c = [f for f in conditions if _C in f.free_symbols]
    resultants = []
    for a in range(len(with_c)):
        for b in range(a + 1, len(with_c)):
            res = sp.Poly(sp.resultant(with_c[a], with_c[b], _C), _M, domain="QQ")
            if not res.is_zero:
                resultants.append(res)
    eliminant = _gcd_all(c_free + resultants, _M)
    if not eliminant.is_zero:
        return eliminant

    logging.debug("Resultants vanish identically; eliminating c with a lex Groebner basis")
    basis = sp.groebner(conditions, _C, _M, order="lex", domain="QQ")
    eliminated = [
        sp.Poly(g, _M, domain="QQ") for g in basis.exprs if _C not in g.free_symbols
    ]
    eliminant = _gcd_all(eliminated, _M)
    if eliminant.is_zero:
        raise AssertionError("Invariant slopes are not finitely many")
    return eliminant


def invariant_lines(chi: VectorField) -> InvariantLines:
    """All rational invariant lines of a finite-type field"""
    field_class = classify(chi)
    if field_class.tag != ClassTag.FINITE:
        raise InfiniteType(f"Field is {field_class.describe()}, not finite-type")

    found: List[Line] = []
    complete = True

    # Vertical lines x = x0: every y^j coefficient of P vanishes at x0
    by_power: Dict[int, BivariatePoly] = {}
    for (i, j), c in chi.P.items():
        by_power[j] = by_power.get(j, BivariatePoly()) + BivariatePoly.monomial(i, 0, c)
    vertical = _gcd_all(
        [sp.Poly(_to_sympy(poly), _X, domain="QQ") for poly in by_power.values()], _X
    )
    roots, exhaustive = _rational_roots(vertical)
    complete &= exhaustive
    found.extend(Line.normalized(1, 0, -x0) for x0 in roots)

    # Lines y = m*x + c: Q(x, mx+c) - m*P(x, mx+c) vanishes identically in x
    restricted = sp.expand(
        (_to_sympy(chi.Q) - _M * _to_sympy(chi.P)).subs(_Y, _M * _X + _C)
    )
    conditions = [f for f in sp.Poly(restricted, _X).all_coeffs() if f != 0]
    if conditions:
        slopes, exhaustive = _rational_roots(_slope_eliminant(conditions))
        complete &= exhaustive
        for m0 in slopes:
            value = sp.Rational(m0.numerator, m0.denominator)
            offsets = _gcd_all(
                [sp.Poly(f.subs(_M, value), _C, domain="QQ") for f in conditions], _C
            )
            if offsets.is_zero:
                raise AssertionError(f"Every line of slope {m0} is invariant")
            intercepts, exhaustive = _rational_roots(offsets)
            complete &= exhaustive
            found.extend(Line.normalized(-m0, 1, -c0) for c0 in intercepts)

    for line in found:
        if not is_invariant_line(chi, line):
            raise AssertionError(f"Candidate line {line} is not invariant")
    logging.debug(f"Found {len(found)} rational invariant lines (complete={complete})")
    return InvariantLines(rational_lines=tuple(sorted(set(found))), complete=complete)


def pointwise_fixed_lines(chi: VectorField, arrangement: Arrangement) -> List[int]:
    """Indices of lines on which chi vanishes identically"""
    return [
        index
        for index, line in enumerate(arrangement)
        if divides_line(line, chi.P) and divides_line(line, chi.Q)
    ]
