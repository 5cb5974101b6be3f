"""
Scalar fields for the grounding solvers

Three number systems are supported:
  - RationalField: fractions.Fraction values, exact
  - QuadraticField(d): QuadExt values q + s*sqrt(d) with rational q, s, exact
  - FloatField(eps): Python floats, signs decided up to the tolerance eps

Solver code never inspects values directly; it asks the Field for zero, one,
signs and coercions, so the same elimination and simplex code runs over all three.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import ExactFieldRequiredError, FieldMismatchError, ParseError

Rational = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_QUADRATIC_RE = re.compile(r"^(?P<q>[+-]?\d+(?:/\d+)?)(?:(?P<sign>[+-])(?P<s>\d+(?:/\d+)?)?r)?$")
_SURD_ONLY_RE = re.compile(r"^(?P<sign>[+-]?)(?P<s>\d+(?:/\d+)?)?r$")


def _is_square_free(d: int) -> bool:
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class QuadExt:
    """Exact element q + s*sqrt(d) of the field Q(sqrt d)"""

    q: Fraction
    s: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "s", Fraction(self.s))
        if not _is_square_free(self.d):
            raise FieldMismatchError(f"QuadExt radicand must be square-free and >= 2, got {self.d}")

    def _lift(self, other) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                if other.s == 0:
                    return QuadExt(other.q, 0, self.d)
                raise FieldMismatchError(f"cannot mix sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadExt(Fraction(other), 0, self.d)
        raise FieldMismatchError(f"cannot mix QuadExt with {type(other).__name__}")

    def __add__(self, other):
        o = self._lift(other)
        return QuadExt(self.q + o.q, self.s + o.s, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.q, -self.s, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadExt(self.q * o.q + self.s * o.s * self.d, self.q * o.s + self.s * o.q, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm q^2 - d*s^2; zero only for the zero element"""
        return self.q * self.q - self.d * self.s * self.s

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.q, -self.s, self.d)

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt(self.q / n, -self.s / n, self.d)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def sign(self) -> int:
        """Exact sign of q + s*sqrt(d), by comparing q^2 with s^2*d"""
        sq, ss = _sign(self.q), _sign(self.s)
        if ss == 0:
            return sq
        if sq == 0 or sq == ss:
            return ss
        return sq if self.q * self.q > self.s * self.s * self.d else ss

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except FieldMismatchError:
            return NotImplemented
        return self.q == o.q and self.s == o.s

    def __hash__(self):
        return hash(self.q) if self.s == 0 else hash((self.q, self.s, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return float(self.q) + float(self.s) * math.sqrt(self.d)

    def __repr__(self):
        return f"QuadExt({format_rational(self.q)}, {format_rational(self.s)}, {self.d})"


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text: str, location: str = None) -> Fraction:
    token = text.strip()
    if not _RATIONAL_RE.match(token):
        raise ParseError(f"invalid rational literal {text!r}", location)
    return Fraction(token)


class Field:
    """Common interface of the three Scalar fields"""

    name = "field"
    exact = True

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def coerce(self, value):
        raise NotImplementedError

    def sign(self, value) -> int:
        raise NotImplementedError

    def is_zero(self, value) -> bool:
        return self.sign(value) == 0

    def parse(self, text: str, location: str = None):
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    def require_exact(self, operation: str) -> None:
        if not self.exact:
            raise ExactFieldRequiredError(f"{operation} requires an exact field, got {self.name}")


@dataclass(frozen=True)
class RationalField(Field):
    name = "rational"

    def coerce(self, value):
        if isinstance(value, bool):
            raise FieldMismatchError("booleans are not scalars")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, QuadExt) and value.s == 0:
            return value.q
        raise FieldMismatchError(f"{value!r} is not a rational")

    def sign(self, value) -> int:
        return _sign(value)

    def parse(self, text: str, location: str = None):
        return parse_rational(text, location)

    def format(self, value) -> str:
        return format_rational(value)


@dataclass(frozen=True)
class QuadraticField(Field):
    d: int = 2

    def __post_init__(self):
        if not _is_square_free(self.d):
            raise FieldMismatchError(f"quadratic field radicand must be square-free and >= 2, got {self.d}")

    @property
    def name(self) -> str:
        return f"quadratic:{self.d}"

    def root(self) -> QuadExt:
        """sqrt(d) as a field element"""
        return QuadExt(0, 1, self.d)

    def coerce(self, value):
        if isinstance(value, bool):
            raise FieldMismatchError("booleans are not scalars")
        if isinstance(value, (int, Fraction)):
            return QuadExt(Fraction(value), 0, self.d)
        if isinstance(value, QuadExt):
            if value.d == self.d or value.s == 0:
                return QuadExt(value.q, value.s, self.d)
            raise FieldMismatchError(f"{value!r} is not in Q(sqrt {self.d})")
        raise FieldMismatchError(f"{value!r} is not in Q(sqrt {self.d})")

    def sign(self, value) -> int:
        return self.coerce(value).sign()

    def parse(self, text: str, location: str = None):
        token = "".join(text.split())
        match = _QUADRATIC_RE.match(token)
        if match:
            q = Fraction(match.group("q"))
            s = Fraction(0)
            if match.group("sign"):
                s = Fraction(match.group("s") or 1)
                if match.group("sign") == "-":
                    s = -s
            return QuadExt(q, s, self.d)
        match = _SURD_ONLY_RE.match(token)
        if match:
            s = Fraction(match.group("s") or 1)
            return QuadExt(0, -s if match.group("sign") == "-" else s, self.d)
        raise ParseError(f"invalid quadratic literal {text!r}", location)

    def format(self, value) -> str:
        value = self.coerce(value)
        if value.s == 0:
            return format_rational(value.q)
        sign = "+" if value.s > 0 else "-"
        return f"{format_rational(value.q)}{sign}{format_rational(abs(value.s))} r"


@dataclass(frozen=True)
class FloatField(Field):
    eps: float = 1e-12
    exact = False
    name = "float"

    def coerce(self, value):
        if isinstance(value, bool):
            raise FieldMismatchError("booleans are not scalars")
        if isinstance(value, (int, float, Fraction)):
            return float(value)
        if isinstance(value, QuadExt) and value.s == 0:
            return float(value.q)
        raise FieldMismatchError(f"{value!r} is not a float scalar")

    def sign(self, value) -> int:
        if abs(value) <= self.eps:
            return 0
        return 1 if value > 0 else -1

    def parse(self, text: str, location: str = None):
        try:
            return float(text)
        except (TypeError, ValueError):
            raise ParseError(f"invalid float literal {text!r}", location)

    def format(self, value) -> str:
        return repr(float(value))


def parse_field(spec: str, eps: float = 1e-12) -> Field:
    """Field from its document name: rational | quadratic:<d> | float"""
    if spec == "rational":
        return RationalField()
    if spec == "float":
        return FloatField(eps)
    if spec.startswith("quadratic:"):
        try:
            return QuadraticField(int(spec.split(":", 1)[1]))
        except ValueError:
            raise ParseError(f"invalid quadratic field {spec!r}")
    raise ParseError(f"unknown field {spec!r}")


def infer_field(values: Iterable, eps: float = 1e-12) -> Field:
    """Smallest shipped field containing every value"""
    radicands = set()
    has_float = False
    for v in values:
        if isinstance(v, float):
            has_float = True
        elif isinstance(v, QuadExt) and v.s != 0:
            radicands.add(v.d)
        elif not isinstance(v, (int, Fraction, QuadExt)):
            raise FieldMismatchError(f"{v!r} is not a scalar")
    if has_float and radicands:
        raise FieldMismatchError("cannot mix floats with quadratic surds")
    if len(radicands) > 1:
        raise FieldMismatchError(f"cannot mix radicands {sorted(radicands)}")
    if has_float:
        return FloatField(eps)
    if radicands:
        return QuadraticField(radicands.pop())
    return RationalField()
