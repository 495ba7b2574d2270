"""Exact polynomial algebra over the rationals

Scalars are ``fractions.Fraction`` (always reduced, positive denominator).
``BivariatePoly`` is a sparse map from exponent pairs to nonzero coefficients and
``UnivariatePoly`` a dense coefficient tuple. Both are immutable.
"""

import re
from fractions import Fraction
from typing import (
    TYPE_CHECKING,
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from src.errors import ParseError

if TYPE_CHECKING:
    from src.arrangement import Line

Rational = Fraction
Monomial = Tuple[int, int]
Scalar = Union[int, Fraction]

# Degree of the zero polynomial
MINUS_INFINITY = -1


def as_rational(value: Scalar) -> Fraction:
    """Coerce an int or Fraction to Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"Expected int or Fraction, got {type(value).__name__}")


def format_rational(value: Scalar) -> str:
    """Render a rational as "p/q" (or "p" when integral)"""
    return str(as_rational(value))


class UnivariatePoly:
    """Dense univariate polynomial, coefficients indexed by exponent"""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        trimmed = [as_rational(c) for c in coeffs]
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        self._coeffs: Tuple[Fraction, ...] = tuple(trimmed)

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1 if self._coeffs else MINUS_INFINITY

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, power: int) -> Fraction:
        if 0 <= power < len(self._coeffs):
            return self._coeffs[power]
        return Fraction(0)

    def evaluate(self, t: Scalar) -> Fraction:
        result = Fraction(0)
        for c in reversed(self._coeffs):
            result = result * t + c
        return result

    def __add__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        size = max(len(self._coeffs), len(other._coeffs))
        return UnivariatePoly(
            self.coefficient(k) + other.coefficient(k) for k in range(size)
        )

    def __neg__(self) -> "UnivariatePoly":
        return UnivariatePoly(-c for c in self._coeffs)

    def __sub__(self, other: "UnivariatePoly") -> "UnivariatePoly":
        return self + (-other)

    def __mul__(self, other: Union["UnivariatePoly", Scalar]) -> "UnivariatePoly":
        if not isinstance(other, UnivariatePoly):
            factor = as_rational(other)
            return UnivariatePoly(c * factor for c in self._coeffs)
        if self.is_zero() or other.is_zero():
            return UnivariatePoly()
        product = [Fraction(0)] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                product[i + j] += a * b
        return UnivariatePoly(product)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnivariatePoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"UnivariatePoly({[format_rational(c) for c in self._coeffs]})"


class BivariatePoly:
    """Sparse polynomial in x and y with rational coefficients"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        cleaned: Dict[Monomial, Fraction] = {}
        for (i, j), coeff in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"Negative exponent in monomial ({i}, {j})")
            value = as_rational(coeff)
            if value != 0:
                cleaned[(i, j)] = value
        self._terms = cleaned

    @classmethod
    def _wrap(cls, terms: Dict[Monomial, Fraction]) -> "BivariatePoly":
        poly = cls.__new__(cls)
        poly._terms = {m: c for m, c in terms.items() if c != 0}
        return poly

    @classmethod
    def constant(cls, value: Scalar) -> "BivariatePoly":
        return cls({(0, 0): value})

    @classmethod
    def monomial(cls, i: int, j: int, coeff: Scalar = 1) -> "BivariatePoly":
        return cls({(i, j): coeff})

    @classmethod
    def x(cls) -> "BivariatePoly":
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> "BivariatePoly":
        return cls({(0, 1): 1})

    @classmethod
    def linear(cls, a: Scalar, b: Scalar, c: Scalar) -> "BivariatePoly":
        """The affine form a*x + b*y + c"""
        return cls({(1, 0): a, (0, 1): b, (0, 0): c})

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in canonical order: total degree descending, then x-power descending"""
        return sorted(
            self._terms.items(), key=lambda item: (-(item[0][0] + item[0][1]), -item[0][0])
        )

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        if not self._terms:
            return MINUS_INFINITY
        return max(i + j for i, j in self._terms)

    def degree_in(self, var: str) -> int:
        if not self._terms:
            return MINUS_INFINITY
        index = _var_index(var)
        return max(m[index] for m in self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, i: int, j: int) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def __add__(self, other: Union["BivariatePoly", Scalar]) -> "BivariatePoly":
        if not isinstance(other, BivariatePoly):
            other = BivariatePoly.constant(other)
        result = dict(self._terms)
        for m, c in other._terms.items():
            result[m] = result.get(m, Fraction(0)) + c
        return BivariatePoly._wrap(result)

    __radd__ = __add__

    def __neg__(self) -> "BivariatePoly":
        return BivariatePoly._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Union["BivariatePoly", Scalar]) -> "BivariatePoly":
        if not isinstance(other, BivariatePoly):
            other = BivariatePoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "BivariatePoly":
        return BivariatePoly.constant(other) - self

    def __mul__(self, other: Union["BivariatePoly", Scalar]) -> "BivariatePoly":
        if not isinstance(other, BivariatePoly):
            factor = as_rational(other)
            return BivariatePoly._wrap({m: c * factor for m, c in self._terms.items()})
        result: Dict[Monomial, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                result[key] = result.get(key, Fraction(0)) + c1 * c2
        return BivariatePoly._wrap(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "BivariatePoly":
        if exponent < 0:
            raise ValueError("Negative powers are not polynomials")
        result = BivariatePoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def evaluate(self, x0: Scalar, y0: Scalar) -> Fraction:
        x0 = as_rational(x0)
        y0 = as_rational(y0)
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            total += c * x0**i * y0**j
        return total

    def derivative(self, var: str) -> "BivariatePoly":
        index = _var_index(var)
        result: Dict[Monomial, Fraction] = {}
        for (i, j), c in self._terms.items():
            power = (i, j)[index]
            if power == 0:
                continue
            key = (i - 1, j) if index == 0 else (i, j - 1)
            result[key] = c * power
        return BivariatePoly._wrap(result)

    def format(self) -> str:
        """Canonical human-readable rendering, e.g. ``x^2*y - 3/2*x + 1``"""
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for (i, j), c in self.items():
            factors = []
            if i:
                factors.append("x" if i == 1 else f"x^{i}")
            if j:
                factors.append("y" if j == 1 else f"y^{j}")
            magnitude = abs(c)
            if not factors:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(magnitude)] + factors)
            if not pieces:
                pieces.append(f"-{body}" if c < 0 else body)
            else:
                pieces.append(f"- {body}" if c < 0 else f"+ {body}")
        return " ".join(pieces)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"BivariatePoly({self.format()!r})"


def _var_index(var: str) -> int:
    if var == "x":
        return 0
    if var == "y":
        return 1
    raise ValueError(f"Unknown variable {var!r}; expected 'x' or 'y'")


def poly_add(f: BivariatePoly, g: BivariatePoly) -> BivariatePoly:
    return f + g


def poly_mul(f: BivariatePoly, g: BivariatePoly) -> BivariatePoly:
    return f * g


def poly_eval(f: BivariatePoly, x0: Scalar, y0: Scalar) -> Fraction:
    return f.evaluate(x0, y0)


def partial_derivative(f: BivariatePoly, var: str) -> BivariatePoly:
    return f.derivative(var)


def poly_product(factors: Iterable[BivariatePoly]) -> BivariatePoly:
    result = BivariatePoly.constant(1)
    for factor in factors:
        result = result * factor
    return result


def compose(f: BivariatePoly, gx: BivariatePoly, gy: BivariatePoly) -> BivariatePoly:
    """Substitute x -> gx and y -> gy"""
    if f.is_zero():
        return f
    x_powers = _powers(gx, f.degree_in("x"), BivariatePoly.constant(1))
    y_powers = _powers(gy, f.degree_in("y"), BivariatePoly.constant(1))
    result = BivariatePoly()
    for (i, j), c in f.terms.items():
        result = result + x_powers[i] * y_powers[j] * c
    return result


def _powers(base, top: int, one):
    powers = [one]
    for _ in range(top):
        powers.append(powers[-1] * base)
    return powers


def line_parametrization(
    line: "Line",
) -> Tuple[Tuple[Fraction, Fraction], Tuple[int, int]]:
    """Canonical base point and direction of a line

    Base point (-gamma/alpha, 0) for vertical lines, (0, -gamma/beta) otherwise;
    direction (beta, -alpha).
    """
    alpha, beta, gamma = line.alpha, line.beta, line.gamma
    if beta == 0:
        base = (Fraction(-gamma, alpha), Fraction(0))
    else:
        base = (Fraction(0), Fraction(-gamma, beta))
    return base, (beta, -alpha)


def restrict_monomials(line: "Line", degree: int) -> Dict[Monomial, UnivariatePoly]:
    """Restriction of every monomial x^i y^j with i + j <= degree to ``line``"""
    (x0, y0), (vx, vy) = line_parametrization(line)
    one = UnivariatePoly([1])
    x_powers = _powers(UnivariatePoly([x0, vx]), degree, one)
    y_powers = _powers(UnivariatePoly([y0, vy]), degree, one)
    return {
        (i, total - i): x_powers[i] * y_powers[total - i]
        for total in range(degree + 1)
        for i in range(total + 1)
    }


def restrict_to_line(f: BivariatePoly, line: "Line") -> UnivariatePoly:
    """f(p0 + t*v) as a polynomial in t; zero iff the affine form of ``line`` divides f"""
    if f.is_zero():
        return UnivariatePoly()
    restricted = restrict_monomials(line, f.degree)
    result = UnivariatePoly()
    for monomial, c in f.terms.items():
        result = result + restricted[monomial] * c
    return result


def divides_line(line: "Line", f: BivariatePoly) -> bool:
    """True iff the affine form of ``line`` divides f exactly"""
    return restrict_to_line(f, line).is_zero()


_TOKEN = re.compile(r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<var>[xy])|(?P<op>[-+*^()]))")


class _ExpressionParser:
    """Recursive-descent parser for the --field polynomial grammar"""

    def __init__(self, text: str):
        self.text = text
        self.tokens: List[Tuple[str, str, int]] = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> List[Tuple[str, str, int]]:
        tokens = []
        index = 0
        while index < len(text):
            if text[index].isspace():
                index += 1
                continue
            match = _TOKEN.match(text, index)
            if not match:
                raise ParseError(f"unexpected character {text[index]!r}", 1, index + 1)
            kind = match.lastgroup or "op"
            start = match.start(kind)
            tokens.append((kind, match.group(kind), start + 1))
            index = match.end()
        return tokens

    def _peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _column(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text) + 1

    def _accept(self, value: str) -> bool:
        token = self._peek()
        if token and token[0] == "op" and token[1] == value:
            self.pos += 1
            return True
        return False

    def parse(self) -> BivariatePoly:
        if not self.tokens:
            raise ParseError("empty expression", 1, 1)
        result = self._expr()
        token = self._peek()
        if token is not None:
            if token[0] in ("number", "var") or token[1] == "(":
                raise ParseError("implicit multiplication is not allowed", 1, token[2])
            raise ParseError(f"unexpected token {token[1]!r}", 1, token[2])
        return result

    def _expr(self) -> BivariatePoly:
        result = self._term()
        while True:
            if self._accept("+"):
                result = result + self._term()
            elif self._accept("-"):
                result = result - self._term()
            else:
                return result

    def _term(self) -> BivariatePoly:
        result = self._unary()
        while self._accept("*"):
            result = result * self._unary()
        return result

    def _unary(self) -> BivariatePoly:
        if self._accept("-"):
            return -self._unary()
        if self._accept("+"):
            return self._unary()
        return self._power()

    def _power(self) -> BivariatePoly:
        base = self._atom()
        if self._accept("^"):
            token = self._peek()
            if token is None or token[0] != "number" or "/" in token[1]:
                raise ParseError("exponent must be a non-negative integer", 1, self._column())
            self.pos += 1
            return base ** int(token[1])
        return base

    def _atom(self) -> BivariatePoly:
        token = self._peek()
        if token is None:
            raise ParseError("unexpected end of expression", 1, self._column())
        kind, value, column = token
        if kind == "number":
            self.pos += 1
            numerator, _, denominator = value.partition("/")
            if denominator and int(denominator) == 0:
                raise ParseError("zero denominator", 1, column)
            return BivariatePoly.constant(Fraction(int(numerator), int(denominator or 1)))
        if kind == "var":
            self.pos += 1
            return BivariatePoly.x() if value == "x" else BivariatePoly.y()
        if self._accept("("):
            inner = self._expr()
            if not self._accept(")"):
                raise ParseError("missing closing parenthesis", 1, self._column())
            return inner
        raise ParseError(f"unexpected token {value!r}", 1, column)


def parse_polynomial(text: str) -> BivariatePoly:
    """Parse an expression such as ``x^2 - 3/2*x*y + 1``

    Grammar: integer or p/q coefficients, variables x and y, operators + - * ^,
    parentheses, unary minus. Implicit multiplication (``2x``) is rejected.
    """
    return _ExpressionParser(text).parse()
