"""Exact arithmetic in the quadratic field Q(sqrt 2).

Every breakpoint, function value and slope handled by this package is a
:class:`QNum`, i.e. a number ``a + b*sqrt2`` with rational ``a`` and ``b``.
Comparisons are decided with rational arithmetic only; nothing here ever
touches a float except :meth:`QNum.__float__`, which exists for plotting.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from numbers import Rational
from typing import Union

from gmpy2 import mpq

__all__ = ["QNum", "QNumParseError", "SQRT2", "ZERO", "ONE", "qnum", "parse", "floor_frac", "frac"]


class QNumParseError(ValueError):
    """Raised when text does not follow the ``p/q+r/s*sqrt2`` grammar."""

    def __init__(self, text: str, pos: int, reason: str) -> None:
        super().__init__(f"{reason} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def _rat(x) -> mpq:
    if isinstance(x, str):
        return mpq(x)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return mpq(x)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


class QNum:
    """An element ``rat + coef_sqrt2 * sqrt(2)`` of Q(sqrt 2).

    Instances are immutable and hashable.  Rationals are kept as
    ``gmpy2.mpq`` which are always in lowest terms with positive
    denominator.
    """

    __slots__ = ("_a", "_b", "_hash")

    def __init__(self, rat=0, coef_sqrt2=0) -> None:
        self._a = rat if type(rat) is type(mpq()) else _rat(rat)
        self._b = coef_sqrt2 if type(coef_sqrt2) is type(mpq()) else _rat(coef_sqrt2)
        self._hash = None

    @classmethod
    def _make(cls, a: mpq, b: mpq) -> QNum:
        obj = object.__new__(cls)
        obj._a = a
        obj._b = b
        obj._hash = None
        return obj

    @property
    def rat(self) -> Fraction:
        return Fraction(int(self._a.numerator), int(self._a.denominator))

    @property
    def coef_sqrt2(self) -> Fraction:
        return Fraction(int(self._b.numerator), int(self._b.denominator))

    @property
    def parts(self) -> tuple[mpq, mpq]:
        return self._a, self._b

    def is_rational(self) -> bool:
        return self._b == 0

    # arithmetic ---------------------------------------------------------

    def __add__(self, other) -> QNum:
        if isinstance(other, QNum):
            return QNum._make(self._a + other._a, self._b + other._b)
        if isinstance(other, (int, Rational)):
            return QNum._make(self._a + other, self._b)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> QNum:
        if isinstance(other, QNum):
            return QNum._make(self._a - other._a, self._b - other._b)
        if isinstance(other, (int, Rational)):
            return QNum._make(self._a - other, self._b)
        return NotImplemented

    def __rsub__(self, other) -> QNum:
        if isinstance(other, (int, Rational)):
            return QNum._make(other - self._a, -self._b)
        return NotImplemented

    def __neg__(self) -> QNum:
        return QNum._make(-self._a, -self._b)

    def __pos__(self) -> QNum:
        return self

    def __abs__(self) -> QNum:
        return -self if self.sign() < 0 else self

    def __mul__(self, other) -> QNum:
        if isinstance(other, QNum):
            a, b, c, d = self._a, self._b, other._a, other._b
            if b == 0:
                return QNum._make(a * c, a * d)
            if d == 0:
                return QNum._make(a * c, b * c)
            return QNum._make(a * c + 2 * b * d, a * d + b * c)
        if isinstance(other, (int, Rational)):
            return QNum._make(self._a * other, self._b * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> QNum:
        a, b = self._a, self._b
        if b == 0:
            if a == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt2)")
            return QNum._make(1 / a, b)
        norm = a * a - 2 * b * b
        return QNum._make(a / norm, -b / norm)

    def __truediv__(self, other) -> QNum:
        if isinstance(other, QNum):
            if other._b == 0:
                if other._a == 0:
                    raise ZeroDivisionError("division by zero in Q(sqrt2)")
                return QNum._make(self._a / other._a, self._b / other._a)
            return self * other.inverse()
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(sqrt2)")
            return QNum._make(self._a / other, self._b / other)
        return NotImplemented

    def __rtruediv__(self, other) -> QNum:
        if isinstance(other, (int, Rational)):
            return self.inverse() * other
        return NotImplemented

    def conjugate(self) -> QNum:
        return QNum._make(self._a, -self._b)

    # order --------------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of ``a + b*sqrt2`` (-1, 0 or +1)."""
        a, b = self._a, self._b
        sa, sb = _sgn(a), _sgn(b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: the larger of a^2 and 2 b^2 wins
        return sa if a * a > 2 * b * b else sb

    def _cmp(self, other) -> int:
        if isinstance(other, QNum):
            return QNum._make(self._a - other._a, self._b - other._b).sign()
        if isinstance(other, (int, Rational)):
            return QNum._make(self._a - other, self._b).sign()
        raise TypeError(f"cannot compare QNum with {type(other).__name__}")

    def __eq__(self, other) -> bool:
        if isinstance(other, QNum):
            return self._a == other._a and self._b == other._b
        if isinstance(other, (int, Rational)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __bool__(self) -> bool:
        return bool(self._a) or bool(self._b)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._a) if self._b == 0 else hash((self._a, self._b))
        return self._hash

    # conversion ---------------------------------------------------------

    def floor(self) -> int:
        return floor_frac(self)[0]

    def __float__(self) -> float:
        # plotting only
        return float(self._a) + float(self._b) * 2 ** 0.5

    def __str__(self) -> str:
        return format_qnum(self)

    def __repr__(self) -> str:
        return f"QNum({format_qnum(self)!r})"

    def __reduce__(self):
        return (parse, (format_qnum(self),))


Scalar = Union[QNum, int, Fraction]

ZERO = QNum(0)
ONE = QNum(1)
SQRT2 = QNum(0, 1)


def qnum(x) -> QNum:
    """Coerce ``x`` (QNum, int, Fraction, mpq or grammar string) to QNum."""
    if isinstance(x, QNum):
        return x
    if isinstance(x, str):
        return parse(x)
    return QNum(x)


def _floor_b_sqrt2(b: mpq) -> int:
    # floor(b*sqrt2) for rational b; b*sqrt2 is never an integer unless b == 0
    if b == 0:
        return 0
    p, q = int(b.numerator), int(b.denominator)
    r = isqrt(2 * p * p)
    if p > 0:
        return r // q
    return -(r // q) - 1


def floor_frac(x: QNum) -> tuple[int, QNum]:
    """Split ``x`` as ``n + r`` with integer ``n`` and ``0 <= r < 1``."""
    x = qnum(x)
    a, b = x.parts
    n = int(a.numerator // a.denominator) + _floor_b_sqrt2(b)
    # the guess is off by at most one in either direction
    while (x - n).sign() < 0:
        n -= 1
    while (x - (n + 1)).sign() >= 0:
        n += 1
    return n, x - n


def frac(x: QNum) -> QNum:
    """Representative of ``x`` modulo 1 in ``[0, 1)``."""
    return floor_frac(x)[1]


def _fmt_rat(r: mpq) -> str:
    if r.denominator == 1:
        return str(int(r.numerator))
    return f"{int(r.numerator)}/{int(r.denominator)}"


def format_qnum(x: QNum) -> str:
    a, b = x.parts
    if b == 0:
        return _fmt_rat(a)
    tail = ("" if abs(b) == 1 else _fmt_rat(abs(b)) + "*") + "sqrt2"
    if a == 0:
        return ("-" if b < 0 else "") + tail
    return _fmt_rat(a) + ("-" if b < 0 else "+") + tail


_TERM = re.compile(r"\s*([+-]?)\s*(?:(\d+)(?:\s*/\s*(\d+))?\s*(\*\s*sqrt2)?|(sqrt2))\s*")


def parse(text: str) -> QNum:
    """Parse ``p/q``, ``p/q+r/s*sqrt2``, ``r/s*sqrt2`` (signs optional).

    Integers may omit the denominator and a unit coefficient may be
    written as bare ``sqrt2``.  At most one rational and one sqrt2 term.
    """
    if not isinstance(text, str):
        raise TypeError("parse expects a string")
    pos = 0
    rat = None
    irr = None
    first = True
    if not text.strip():
        raise QNumParseError(text, 0, "empty number")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise QNumParseError(text, pos, "unexpected character")
        sign, num, den, times_sqrt2, bare_sqrt2 = m.groups()
        if not first and not sign:
            raise QNumParseError(text, m.start(), "missing operator")
        if num is None and bare_sqrt2 is None:
            raise QNumParseError(text, m.start(), "expected a number")
        if bare_sqrt2:
            value = mpq(1)
            is_irr = True
        else:
            if den is not None and int(den) == 0:
                raise QNumParseError(text, m.start(3), "zero denominator")
            value = mpq(int(num), int(den) if den else 1)
            is_irr = bool(times_sqrt2)
        if sign == "-":
            value = -value
        if is_irr:
            if irr is not None:
                raise QNumParseError(text, m.start(), "duplicate sqrt2 term")
            irr = value
        else:
            if rat is not None or irr is not None:
                raise QNumParseError(text, m.start(), "rational term must come first")
            rat = value
        first = False
        pos = m.end()
    return QNum._make(rat if rat is not None else mpq(0), irr if irr is not None else mpq(0))
