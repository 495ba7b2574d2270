"""Line arrangements: normalization, parsing, built-ins and combinatorics"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import comb, gcd
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.errors import (
    DegenerateLine,
    DuplicateLine,
    EmptyArrangement,
    ParseError,
    UnknownName,
)
from src.polynomial import BivariatePoly, Scalar, as_rational, poly_product

Point = Tuple[Fraction, Fraction]
Direction = Tuple[int, int]
AffineMatrix = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]


def canonical_direction(vx: Scalar, vy: Scalar) -> Direction:
    """Primitive integer direction with first nonzero component positive"""
    fx, fy = as_rational(vx), as_rational(vy)
    if fx == 0 and fy == 0:
        raise ValueError("Zero vector has no direction")
    scale = fx.denominator * fy.denominator
    ix, iy = int(fx * scale), int(fy * scale)
    g = gcd(ix, iy)
    ix, iy = ix // g, iy // g
    if ix < 0 or (ix == 0 and iy < 0):
        ix, iy = -ix, -iy
    return ix, iy


@dataclass(frozen=True, order=True)
class Line:
    """Normalized line alpha*x + beta*y + gamma = 0

    Coefficients are coprime integers with alpha > 0, or alpha = 0 and beta > 0.
    Build instances with ``Line.normalized``.
    """

    alpha: int
    beta: int
    gamma: int

    def __post_init__(self) -> None:
        if self.alpha == 0 and self.beta == 0:
            raise DegenerateLine(f"(alpha, beta) = (0, 0) in ({self.gamma} = 0)")
        if gcd(self.alpha, self.beta, self.gamma) != 1:
            raise ValueError(f"Line coefficients are not primitive: {self.triple}")
        if self.alpha < 0 or (self.alpha == 0 and self.beta < 0):
            raise ValueError(f"Line coefficients are not sign-canonical: {self.triple}")

    @classmethod
    def normalized(cls, a: Scalar, b: Scalar, c: Scalar) -> "Line":
        """Clear denominators, divide by the gcd and fix the sign"""
        fa, fb, fc = as_rational(a), as_rational(b), as_rational(c)
        if fa == 0 and fb == 0:
            raise DegenerateLine(f"(alpha, beta) = (0, 0) in ({a}, {b}, {c})")
        denominator = reduce(
            lambda acc, v: acc * v // gcd(acc, v),
            (fa.denominator, fb.denominator, fc.denominator),
        )
        ia, ib, ic = (int(v * denominator) for v in (fa, fb, fc))
        g = gcd(ia, ib, ic)
        ia, ib, ic = ia // g, ib // g, ic // g
        if ia < 0 or (ia == 0 and ib < 0):
            ia, ib, ic = -ia, -ib, -ic
        return cls(ia, ib, ic)

    @property
    def triple(self) -> Tuple[int, int, int]:
        return self.alpha, self.beta, self.gamma

    def form(self) -> BivariatePoly:
        """The affine form alpha*x + beta*y + gamma"""
        return BivariatePoly.linear(self.alpha, self.beta, self.gamma)

    def evaluate(self, point: Point) -> Fraction:
        return self.alpha * point[0] + self.beta * point[1] + self.gamma

    def contains(self, point: Point) -> bool:
        return self.evaluate(point) == 0

    def direction(self) -> Direction:
        return canonical_direction(self.beta, -self.alpha)

    def is_parallel(self, other: "Line") -> bool:
        return self.alpha * other.beta - other.alpha * self.beta == 0

    def intersection(self, other: "Line") -> Optional[Point]:
        """Common point of two non-parallel lines (Cramer's rule)"""
        det = self.alpha * other.beta - other.alpha * self.beta
        if det == 0:
            return None
        x = Fraction(self.beta * other.gamma - other.beta * self.gamma, det)
        y = Fraction(other.alpha * self.gamma - self.alpha * other.gamma, det)
        return x, y

    def format(self) -> str:
        return f"{self.form().format()} = 0"

    def __str__(self) -> str:
        return self.format()


class Arrangement:
    """Finite ordered collection of pairwise distinct lines"""

    def __init__(self, lines: Iterable[Line], name: Optional[str] = None):
        self._lines: Tuple[Line, ...] = tuple(lines)
        self.name = name
        if not self._lines:
            raise EmptyArrangement("An arrangement needs at least one line")

        seen: Dict[Line, int] = {}
        for index, line in enumerate(self._lines):
            if line in seen:
                raise DuplicateLine(
                    f"Line {index + 1} duplicates line {seen[line] + 1}: {line}"
                )
            seen[line] = index
        self._defining_polynomial: Optional[BivariatePoly] = None

    @classmethod
    def from_coefficients(
        cls, triples: Iterable[Sequence[Scalar]], name: Optional[str] = None
    ) -> "Arrangement":
        return cls((Line.normalized(*triple) for triple in triples), name=name)

    @property
    def lines(self) -> Tuple[Line, ...]:
        return self._lines

    def __len__(self) -> int:
        return len(self._lines)

    def __iter__(self) -> Iterator[Line]:
        return iter(self._lines)

    def __getitem__(self, index: int) -> Line:
        return self._lines[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Arrangement):
            return NotImplemented
        return self._lines == other._lines

    def __hash__(self) -> int:
        return hash(self._lines)

    def __repr__(self) -> str:
        label = self.name or "arrangement"
        return f"Arrangement({label}, {len(self)} lines)"

    def defining_polynomial(self) -> BivariatePoly:
        """Q_A, the product of the affine forms"""
        if self._defining_polynomial is None:
            self._defining_polynomial = poly_product(line.form() for line in self._lines)
        return self._defining_polynomial

    def sub_arrangement_polynomial(self, indices: Iterable[int]) -> BivariatePoly:
        return poly_product(self._lines[i].form() for i in indices)


_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_rational(token: str, line_no: int, column: int) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(f"malformed rational {token!r}", line_no, column)
    numerator, _, denominator = token.partition("/")
    if denominator and int(denominator) == 0:
        raise ParseError(f"zero denominator in {token!r}", line_no, column)
    return Fraction(int(numerator), int(denominator or 1))


def parse_arrangement(text: str, name: Optional[str] = None) -> Arrangement:
    """Parse the arrangement file format

    One geometric line per text line, three rationals ``a b c`` meaning
    a*x + b*y + c = 0. ``#`` starts a comment, blank lines are ignored.
    """
    lines: List[Line] = []
    origin: Dict[Line, int] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", content)]
        if not tokens:
            continue
        if len(tokens) != 3:
            column = tokens[3][1] if len(tokens) > 3 else len(content.rstrip()) + 1
            raise ParseError(
                f"expected three coefficients, found {len(tokens)}", line_no, column
            )
        values = [_parse_rational(token, line_no, column) for token, column in tokens]
        try:
            line = Line.normalized(*values)
        except DegenerateLine:
            raise DegenerateLine(f"line {line_no}: (alpha, beta) = (0, 0)")
        if line in origin:
            raise DuplicateLine(
                f"line {line_no} duplicates line {origin[line]} after normalization: "
                f"{line}"
            )
        origin[line] = line_no
        lines.append(line)

    if not lines:
        raise EmptyArrangement("No lines found in input")
    logging.debug(f"Parsed arrangement with {len(lines)} lines")
    return Arrangement(lines, name=name)


def load_arrangement(path: Union[str, Path]) -> Arrangement:
    """Read an arrangement file (UTF-8)"""
    file_path = Path(path)
    data = file_path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = data.rfind(b"\n", 0, e.start) + 1
        raise ParseError(
            f"invalid UTF-8 byte 0x{data[e.start]:02x} at offset {e.start}",
            data.count(b"\n", 0, e.start) + 1,
            e.start - line_start + 1,
        )
    return parse_arrangement(text, name=file_path.name)


# Hard-coded integer triples (a, b, c) for a*x + b*y + c = 0
BUILTIN_ARRANGEMENTS: Dict[str, Tuple[Tuple[int, int, int], ...]] = {
    "pappus": (
        (1, 0, 0),
        (0, 1, 0),
        (1, -1, 0),
        (0, 1, -1),
        (1, -1, -1),
        (2, 1, 1),
        (2, 1, -1),
        (2, -5, 1),
    ),
    "nonpappus": (
        (1, 0, 0),
        (0, 1, 0),
        (1, 1, 0),
        (0, 1, 1),
        (1, 0, 3),
        (1, 2, 1),
        (1, 2, 3),
        (2, 3, 3),
    ),
    "ziegler": (
        (0, 1, 0),
        (2, 2, 1),
        (3, 1, 1),
        (8, -1, 4),
        (9, 3, -1),
        (9, -2, 3),
        (11, 2, 1),
        (5, 5, -2),
    ),
    "ziegler2": (
        (0, 1, 0),
        (2, 2, 1),
        (3, 1, 1),
        (8, -1, 4),
        (9, 3, -1),
        (21, -4, 7),
        (19, 4, 1),
        (10, 10, -5),
    ),
}


def builtin_arrangement(name: str) -> Arrangement:
    """One of the four reference arrangements: pappus, nonpappus, ziegler, ziegler2"""
    try:
        triples = BUILTIN_ARRANGEMENTS[name]
    except KeyError:
        raise UnknownName(
            f"Unknown built-in arrangement {name!r}; "
            f"expected one of {sorted(BUILTIN_ARRANGEMENTS)}"
        )
    return Arrangement.from_coefficients(triples, name=name)


@dataclass(frozen=True)
class SingularPoint:
    """Intersection point of at least two lines"""

    point: Point
    incident_lines: Tuple[int, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.incident_lines)


def singular_points(arrangement: Arrangement) -> List[SingularPoint]:
    """All intersection points, grouped exactly, sorted by coordinates"""
    incidence: Dict[Point, set] = {}
    lines = arrangement.lines
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            point = lines[i].intersection(lines[j])
            if point is None:
                continue
            incidence.setdefault(point, set()).update((i, j))

    return [
        SingularPoint(point=point, incident_lines=tuple(sorted(incidence[point])))
        for point in sorted(incidence)
    ]


def parallel_classes(arrangement: Arrangement) -> List[Tuple[Direction, Tuple[int, ...]]]:
    """Partition of line indices by direction, in order of first appearance"""
    classes: Dict[Direction, List[int]] = {}
    for index, line in enumerate(arrangement.lines):
        classes.setdefault(line.direction(), []).append(index)
    return [(direction, tuple(indices)) for direction, indices in classes.items()]


@dataclass(frozen=True)
class CombinatorialData:
    """Combinatorial invariants of an arrangement"""

    n: int
    sing: Tuple[SingularPoint, ...]
    m: int
    p: int
    parallel_classes: Tuple[Tuple[int, ...], ...]
    class_directions: Tuple[Direction, ...]
    weak_signature: Dict[int, int]
    parallel_pairs: int
    projective_signature: Dict[int, int]
    nu_inf: int
    nu_f: int
    nu: int

    def points_on(self, line_index: int) -> List[SingularPoint]:
        return [s for s in self.sing if line_index in s.incident_lines]

    def parallel_count(self, line_index: int) -> int:
        """Number of other lines parallel to the given one"""
        for indices in self.parallel_classes:
            if line_index in indices:
                return len(indices) - 1
        return 0


def combinatorial_data(arrangement: Arrangement) -> CombinatorialData:
    n = len(arrangement)
    sing = singular_points(arrangement)
    classes = parallel_classes(arrangement)

    # No singular point means every line is parallel; m defaults to 1
    m = max((s.multiplicity for s in sing), default=1)
    p = max(len(indices) for _, indices in classes)

    weak: Dict[int, int] = {}
    for s in sing:
        weak[s.multiplicity] = weak.get(s.multiplicity, 0) + 1

    projective = dict(weak)
    for _, indices in classes:
        at_infinity = len(indices) + 1
        projective[at_infinity] = projective.get(at_infinity, 0) + 1

    parallel_pairs = sum(comb(len(indices), 2) for _, indices in classes)
    nu_inf = max(m - 1, p)
    nu_f = min(n - m + 1, n - p)

    data = CombinatorialData(
        n=n,
        sing=tuple(sing),
        m=m,
        p=p,
        parallel_classes=tuple(indices for _, indices in classes),
        class_directions=tuple(direction for direction, _ in classes),
        weak_signature=dict(sorted(weak.items(), reverse=True)),
        parallel_pairs=parallel_pairs,
        projective_signature=dict(sorted(projective.items(), reverse=True)),
        nu_inf=nu_inf,
        nu_f=nu_f,
        nu=min(nu_inf, nu_f),
    )

    accounted = sum(comb(k, 2) * count for k, count in weak.items()) + parallel_pairs
    if accounted != comb(n, 2):
        raise AssertionError(f"Pair accounting failed: {accounted} != C({n}, 2)")
    return data


def weak_equal(first: Arrangement, second: Arrangement) -> bool:
    """Same number of lines and of singular points per multiplicity"""
    if len(first) != len(second):
        return False
    return (
        combinatorial_data(first).weak_signature
        == combinatorial_data(second).weak_signature
    )


def affine_image(
    arrangement: Arrangement,
    matrix: AffineMatrix,
    offset: Tuple[Scalar, Scalar] = (0, 0),
) -> Arrangement:
    """Image of every line under p -> matrix * p + offset"""
    (a, b), (c, d) = [[as_rational(v) for v in row] for row in matrix]
    det = a * d - b * c
    if det == 0:
        raise ValueError("Affine map is not invertible")
    inverse = ((d / det, -b / det), (-c / det, a / det))
    ox, oy = as_rational(offset[0]), as_rational(offset[1])

    images = []
    for line in arrangement:
        # (alpha, beta) . inverse(q - offset) + gamma = 0
        new_alpha = line.alpha * inverse[0][0] + line.beta * inverse[1][0]
        new_beta = line.alpha * inverse[0][1] + line.beta * inverse[1][1]
        new_gamma = line.gamma - new_alpha * ox - new_beta * oy
        images.append(Line.normalized(new_alpha, new_beta, new_gamma))
    return Arrangement(images, name=arrangement.name)
