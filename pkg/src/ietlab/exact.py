"""Exact real parameters as rational combinations of declared generators.

A :class:`FieldVector` stores ``sum_k c_k g_k`` with rational ``c_k`` over a
:class:`GeneratorBasis` ``(g_0 = 1, g_1, ..., g_{d-1})``.  Equality is decided
on coefficients.  Order is decided by evaluating the difference at the
declared decimal values of the generators; a difference whose magnitude falls
under the basis guard raises :class:`PrecisionExhausted` instead of returning
a sign that may be rounding noise.

The generators are *declared* Q-independent.  Nothing checks this: if two
generators are secretly dependent, coefficient equality under-reports
equality and the guard is the only line of defence.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BasisMismatch, DomainError, PrecisionExhausted

DEFAULT_PRECISION = 40

LT, EQ, GT = -1, 0, 1


def default_precision() -> int:
    raw = os.environ.get("IETLAB_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError:
        raise DomainError("IETLAB_PRECISION must be a positive integer, got %r" % raw)
    if value <= 0:
        raise DomainError("IETLAB_PRECISION must be a positive integer, got %r" % raw)
    return value


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal string exactly."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise DomainError("binary floats are not accepted as exact input: %r" % text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError("cannot parse rational %r" % (text,))


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


@dataclass(frozen=True)
class GeneratorBasis:
    """Names and declared decimal values of the generators.

    ``values`` are kept as exact fractions, truncated toward zero to
    ``precision`` digits after the point.  ``guard`` is the threshold below
    which a nonzero difference is refused by :meth:`FieldVector.compare`;
    it defaults to ``10**-(precision // 2)``.
    """

    names: tuple
    values: tuple
    precision: int
    guard: Fraction
    _scaled: tuple = field(repr=False, compare=False)

    def __init__(self, names: Sequence[str], values: Sequence, precision: int | None = None,
                 guard=None):
        names = tuple(str(n) for n in names)
        if precision is None:
            precision = default_precision()
        if precision <= 0:
            raise DomainError("precision must be positive")
        if len(names) != len(values) or not names:
            raise DomainError("generator names and values must be nonempty and of equal length")
        if len(set(names)) != len(names):
            raise DomainError("generator names must be distinct")
        scale = 10 ** precision
        exact = []
        for v in values:
            q = parse_rational(v)
            # truncate toward zero at the declared precision
            n = abs(q.numerator) * scale // q.denominator
            exact.append(Fraction(n if q >= 0 else -n, scale))
        if exact[0] != 1:
            raise DomainError("generator g0 must be exactly 1")
        if guard is None:
            guard = Fraction(1, 10 ** (precision // 2))
        guard = parse_rational(guard)
        if guard <= 0:
            raise DomainError("precision guard must be positive")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "values", tuple(exact))
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "guard", guard)
        object.__setattr__(self, "_scaled", tuple(int(v * scale) for v in exact))

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls) -> "GeneratorBasis":
        return cls(["1"], ["1"], precision=1, guard=Fraction(1, 10))

    @classmethod
    def from_decimals(cls, names, values, precision=None, guard=None) -> "GeneratorBasis":
        names = ["1"] + [n for n in names]
        values = ["1"] + [str(v) for v in values]
        return cls(names, values, precision, guard)

    @classmethod
    def square_roots(cls, radicands: Iterable[int], precision: int | None = None) -> "GeneratorBasis":
        """Basis ``(1, sqrt(p_1), sqrt(p_2), ...)`` with values to ``precision`` digits."""
        if precision is None:
            precision = default_precision()
        radicands = list(radicands)
        with localcontext() as ctx:
            ctx.prec = precision + 20
            vals = [decimal_string(Decimal(p).sqrt(), precision) for p in radicands]
        return cls.from_decimals(["sqrt%d" % p for p in radicands], vals, precision)

    @classmethod
    def golden(cls, precision: int | None = None) -> "GeneratorBasis":
        if precision is None:
            precision = default_precision()
        with localcontext() as ctx:
            ctx.prec = precision + 20
            phi = (1 + Decimal(5).sqrt()) / 2
            return cls.from_decimals(["phi"], [decimal_string(phi, precision)], precision)

    # -- basics -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.names)

    def const(self, q) -> "FieldVector":
        q = parse_rational(q)
        return FieldVector._raw(self, (q.numerator,) + (0,) * (self.dim - 1), q.denominator)

    def zero(self) -> "FieldVector":
        return FieldVector._raw(self, (0,) * self.dim, 1)

    def one(self) -> "FieldVector":
        return self.const(1)

    def gen(self, k: int) -> "FieldVector":
        num = [0] * self.dim
        num[k] = 1
        return FieldVector._raw(self, tuple(num), 1)

    def vector(self, coeffs) -> "FieldVector":
        return FieldVector(self, coeffs)

    def __getitem__(self, name: str) -> "FieldVector":
        return self.gen(self.names.index(name))


def decimal_string(x: Decimal, digits: int) -> str:
    q = x.quantize(Decimal(1).scaleb(-digits), rounding="ROUND_DOWN")
    return format(q, "f")


def _same_basis(u: "FieldVector", v: "FieldVector") -> None:
    if u.basis is not v.basis and u.basis != v.basis:
        raise BasisMismatch("field vectors over different generator bases")


class FieldVector:
    """Immutable rational combination of generators.

    Stored as an integer numerator tuple over one positive common
    denominator, reduced so that the gcd of everything is 1.
    """

    __slots__ = ("basis", "num", "den", "_val")

    def __init__(self, basis: GeneratorBasis, coeffs):
        coeffs = [parse_rational(c) for c in coeffs]
        if len(coeffs) != basis.dim:
            raise DomainError("expected %d coefficients, got %d" % (basis.dim, len(coeffs)))
        den = 1
        for c in coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = tuple(c.numerator * (den // c.denominator) for c in coeffs)
        self._init(basis, num, den)

    def _init(self, basis, num, den):
        g = math.gcd(den, *num)
        if g != 1:
            num = tuple(n // g for n in num)
            den //= g
        self.basis = basis
        self.num = num
        self.den = den
        self._val = None

    @classmethod
    def _raw(cls, basis, num, den) -> "FieldVector":
        obj = cls.__new__(cls)
        obj._init(basis, num, den)
        return obj

    # -- views ---------------------------------------------------------------

    @property
    def coeffs(self) -> tuple:
        return tuple(Fraction(n, self.den) for n in self.num)

    def key(self) -> tuple:
        return self.num + (self.den,)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("field vector is not rational")
        return Fraction(self.num[0], self.den)

    def _scaled_value(self) -> int:
        if self._val is None:
            self._val = sum(n * s for n, s in zip(self.num, self.basis._scaled) if n)
        return self._val

    def numeric(self) -> Fraction:
        """Exact value at the declared generator values."""
        return Fraction(self._scaled_value(), self.den * 10 ** self.basis.precision)

    def __float__(self) -> float:
        return float(self.numeric())

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "FieldVector":
        if isinstance(other, FieldVector):
            _same_basis(self, other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.basis.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return FieldVector._raw(self.basis, tuple(a + b for a, b in zip(self.num, other.num)), self.den)
        d1, d2 = self.den, other.den
        return FieldVector._raw(self.basis, tuple(a * d2 + b * d1 for a, b in zip(self.num, other.num)), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return FieldVector._raw(self.basis, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return FieldVector._raw(self.basis, tuple(a - b for a, b in zip(self.num, other.num)), self.den)
        d1, d2 = self.den, other.den
        return FieldVector._raw(self.basis, tuple(a * d2 - b * d1 for a, b in zip(self.num, other.num)), d1 * d2)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, q):
        if isinstance(q, FieldVector):
            raise TypeError("field vectors can only be scaled by rationals")
        q = parse_rational(q)
        return FieldVector._raw(self.basis, tuple(a * q.numerator for a in self.num), self.den * q.denominator)

    __rmul__ = __mul__

    def __truediv__(self, q):
        q = parse_rational(q)
        if q == 0:
            raise ZeroDivisionError("division of a field vector by zero")
        return self * (1 / q)

    # -- comparison ------------------------------------------------------------

    def compare(self, other) -> int:
        """Return LT, EQ or GT (``-1, 0, 1``)."""
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError("cannot compare field vector with %r" % (other,))
        if self.den == other.den and self.num == other.num:
            return EQ
        b = self.basis
        d = self._scaled_value() * other.den - other._scaled_value() * self.den
        denom = self.den * other.den * 10 ** b.precision
        # |d| / denom < guard  <=>  |d| * guard.den < guard.num * denom
        if abs(d) * b.guard.denominator < b.guard.numerator * denom:
            # a purely rational difference has an exact sign
            sd, od = self.den, other.den
            if all(x * od == y * sd for x, y in zip(self.num[1:], other.num[1:])):
                c = self.num[0] * od - other.num[0] * sd
                return GT if c > 0 else LT
            raise PrecisionExhausted(
                "difference %s evaluates to %.3e, below guard %s"
                % ((self - other), float(Fraction(d, denom)), format_rational(b.guard)))
        return GT if d > 0 else LT

    def __eq__(self, other):
        if isinstance(other, FieldVector):
            return (self.basis is other.basis or self.basis == other.basis) and \
                self.den == other.den and self.num == other.num
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash(self.num + (self.den,))

    def __lt__(self, other):
        return self.compare(other) == LT

    def __le__(self, other):
        return self.compare(other) != GT

    def __gt__(self, other):
        return self.compare(other) == GT

    def __ge__(self, other):
        return self.compare(other) != LT

    def sign(self) -> int:
        if self.is_zero():
            return 0
        return self.compare(0)

    # -- display -------------------------------------------------------------

    def to_strings(self) -> list:
        return [format_rational(c) for c in self.coeffs]

    def __repr__(self):
        terms = []
        for name, c in zip(self.basis.names, self.coeffs):
            if c == 0:
                continue
            if name == "1":
                terms.append(format_rational(c))
            elif c == 1:
                terms.append(name)
            else:
                terms.append("%s*%s" % (format_rational(c), name))
        return "FieldVector(%s)" % (" + ".join(terms) if terms else "0")


def fv_arith(op: str, u: FieldVector, v) -> FieldVector:
    if op == "add":
        return u + v
    if op == "sub":
        return u - v
    if op == "scale":
        # scale takes the rational on the left-hand side in the op table
        if isinstance(u, FieldVector):
            return u * v
        return v * u
    raise DomainError("unknown field-vector operation %r" % op)


def fv_compare(u: FieldVector, v) -> int:
    return u.compare(v)


def fv_rank(vs: Sequence[FieldVector]) -> int:
    """Rank over Q of the generator coefficients of ``vs``."""
    from .linalg import rank

    vs = list(vs)
    if not vs:
        return 0
    for v in vs[1:]:
        _same_basis(vs[0], v)
    return rank([list(v.coeffs) for v in vs])


def fv_min(u: FieldVector, v: FieldVector) -> FieldVector:
    return v if v < u else u


def fv_max(u: FieldVector, v: FieldVector) -> FieldVector:
    return v if v > u else u
