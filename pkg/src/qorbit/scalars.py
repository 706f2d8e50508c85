"""Exact scalars: the rational function field Q(t) with t = q**(1/4).

Every quarter-integer power of ``q`` is an exact monomial ``t**k``.  Values are
kept in a canonical gcd-reduced form so that equality is coefficient-wise::

    value = t**shift * num(t) / den(t)

where ``num`` and ``den`` are polynomials over Q with nonzero constant term,
``den`` is monic and ``gcd(num, den) == 1``.  Zero is ``num == 0, shift == 0``.

Polynomial arithmetic is delegated to FLINT (``flint.fmpq_poly``).
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import flint

__all__ = [
    "LaurentPoly",
    "RatFunc",
    "IrrationalSqrtError",
    "ZERO",
    "ONE",
    "T",
    "q_power",
    "qnum",
    "sqrt_monomial",
    "to_ratfunc",
    "parse_ratfunc",
]

_fpoly = flint.fmpq_poly
_POLY_ZERO = _fpoly([])
_POLY_ONE = _fpoly([1])


class IrrationalSqrtError(ArithmeticError):
    """Raised when a square root would leave the field Q(t)."""

    def __init__(self, value):
        super().__init__(f"irrational square root of {value}")
        self.value = value


def _strip_low(p):
    """Split ``p`` as ``t**k * p'`` with ``p'(0) != 0``; returns ``(k, p')``."""
    if p.is_zero():
        return 0, p
    coeffs = p.coeffs()
    k = 0
    while coeffs[k] == 0:
        k += 1
    if k == 0:
        return 0, p
    return k, _fpoly(coeffs[k:])


def _to_fmpq(c):
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    return flint.fmpq(c)


def _from_fmpq(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class LaurentPoly:
    """Laurent polynomial in ``t`` with exact rational coefficients.

    A thin immutable view ``t**shift * poly``; ``coeffs()`` gives the exponent
    map with no zero entries.
    """

    __slots__ = ("shift", "poly")

    def __init__(self, coeffs=None):
        if coeffs is None:
            coeffs = {}
        if isinstance(coeffs, dict):
            items = {int(e): Fraction(c) for e, c in coeffs.items() if c != 0}
            if not items:
                self.shift, self.poly = 0, _POLY_ZERO
                return
            lo, hi = min(items), max(items)
            dense = [_to_fmpq(items.get(e, 0)) for e in range(lo, hi + 1)]
            self.shift, self.poly = lo, _fpoly(dense)
        else:
            raise TypeError("LaurentPoly expects an {exponent: coefficient} map")

    @classmethod
    def _raw(cls, shift, poly):
        obj = cls.__new__(cls)
        k, p = _strip_low(poly)
        obj.shift = shift + k if not p.is_zero() else 0
        obj.poly = p
        return obj

    def coeffs(self) -> dict[int, Fraction]:
        return {
            self.shift + i: _from_fmpq(c)
            for i, c in enumerate(self.poly.coeffs())
            if c != 0
        }

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.shift == other.shift and self.poly == other.poly

    def __hash__(self):
        return hash((self.shift, tuple(self.poly.coeffs())))

    def __add__(self, other):
        s = min(self.shift, other.shift)
        a = self.poly.left_shift(self.shift - s) if self.shift > s else self.poly
        b = other.poly.left_shift(other.shift - s) if other.shift > s else other.poly
        return LaurentPoly._raw(s, a + b)

    def __neg__(self):
        return LaurentPoly._raw(self.shift, -self.poly)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return LaurentPoly._raw(self.shift + other.shift, self.poly * other.poly)

    def __repr__(self):
        return f"LaurentPoly({self.coeffs()})"


class RatFunc:
    """Element of Q(t), immutable and canonical (see module docstring)."""

    __slots__ = ("num", "den", "shift", "_hash")

    def __init__(self, value=0):
        if isinstance(value, RatFunc):
            self.num, self.den, self.shift = value.num, value.den, value.shift
        elif isinstance(value, LaurentPoly):
            self.num, self.den, self.shift = value.poly, _POLY_ONE, value.shift
        elif isinstance(value, (int, Fraction)) or type(value).__name__ == "fmpq":
            c = _to_fmpq(value)
            self.num = _fpoly([c]) if c != 0 else _POLY_ZERO
            self.den, self.shift = _POLY_ONE, 0
        else:
            raise TypeError(f"cannot convert {value!r} to RatFunc")
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def _make(cls, shift, num, den):
        """Canonicalize ``t**shift * num / den`` (den != 0)."""
        obj = cls.__new__(cls)
        obj._hash = None
        if num.is_zero():
            obj.num, obj.den, obj.shift = _POLY_ZERO, _POLY_ONE, 0
            return obj
        k, num = _strip_low(num)
        shift += k
        k, den = _strip_low(den)
        shift -= k
        if den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        obj.num, obj.den, obj.shift = num, den, shift
        return obj

    @classmethod
    def _mono(cls, coeff, exp):
        obj = cls.__new__(cls)
        obj._hash = None
        obj.num, obj.den, obj.shift = _fpoly([_to_fmpq(coeff)]), _POLY_ONE, exp
        return obj

    @classmethod
    def monomial(cls, coeff, exp: int) -> "RatFunc":
        """``coeff * t**exp``."""
        if coeff == 0:
            return ZERO
        return cls._mono(coeff, int(exp))

    @classmethod
    def from_laurent(cls, num: LaurentPoly, den: LaurentPoly | None = None):
        if den is None:
            return cls._make(num.shift, num.poly, _POLY_ONE)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        return cls._make(num.shift - den.shift, num.poly, den.poly)

    # predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.shift == 0 and self.num == _POLY_ONE and self.den == _POLY_ONE

    def is_laurent(self) -> bool:
        return self.den == _POLY_ONE

    def is_monomial(self) -> bool:
        return self.den == _POLY_ONE and self.num.degree() == 0

    def __bool__(self):
        return not self.num.is_zero()

    # accessors ------------------------------------------------------------

    def numerator(self) -> LaurentPoly:
        return LaurentPoly._raw(self.shift, self.num)

    def denominator(self) -> LaurentPoly:
        return LaurentPoly._raw(0, self.den)

    def monomial_data(self) -> tuple[Fraction, int]:
        """``(c, m)`` with ``self == c * t**m``; raises if not a monomial."""
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        return _from_fmpq(self.num.coeffs()[0]), self.shift

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, RatFunc):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = to_ratfunc(other)
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        s = min(self.shift, other.shift)
        a = self.num.left_shift(self.shift - s) if self.shift > s else self.num
        b = other.num.left_shift(other.shift - s) if other.shift > s else other.num
        if self.den == other.den:
            if self.den == _POLY_ONE:
                obj = RatFunc.__new__(RatFunc)
                obj._hash = None
                k, n = _strip_low(a + b)
                if n.is_zero():
                    obj.num, obj.den, obj.shift = _POLY_ZERO, _POLY_ONE, 0
                else:
                    obj.num, obj.den, obj.shift = n, _POLY_ONE, s + k
                return obj
            return RatFunc._make(s, a + b, self.den)
        return RatFunc._make(s, a * other.den + b * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        obj = RatFunc.__new__(RatFunc)
        obj._hash = None
        obj.num, obj.den, obj.shift = -self.num, self.den, self.shift
        return obj

    def __sub__(self, other):
        if not isinstance(other, RatFunc):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = to_ratfunc(other)
        return self + (-other)

    def __rsub__(self, other):
        return to_ratfunc(other) - self

    def __mul__(self, other):
        if not isinstance(other, RatFunc):
            if isinstance(other, (int, Fraction)):
                other = to_ratfunc(other)
            else:
                return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den == _POLY_ONE and other.den == _POLY_ONE:
            obj = RatFunc.__new__(RatFunc)
            obj._hash = None
            obj.num, obj.den = self.num * other.num, _POLY_ONE
            obj.shift = self.shift + other.shift
            return obj
        return RatFunc._make(
            self.shift + other.shift, self.num * other.num, self.den * other.den
        )

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * to_ratfunc(other)
        return NotImplemented

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(t)")
        return RatFunc._make(-self.shift, self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, RatFunc):
            other = to_ratfunc(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return to_ratfunc(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if self.is_monomial():
            c, m = self.monomial_data()
            return RatFunc.monomial(c**n, m * n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = to_ratfunc(other)
            except TypeError:
                return NotImplemented
        return (
            self.shift == other.shift and self.num == other.num and self.den == other.den
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(
                (self.shift, tuple(self.num.coeffs()), tuple(self.den.coeffs()))
            )
        return self._hash

    # substitutions --------------------------------------------------------

    def invert_q(self) -> "RatFunc":
        """Substitute ``q -> 1/q`` (i.e. ``t -> 1/t``)."""
        if self.num.is_zero():
            return self
        dn, dd = self.num.degree(), self.den.degree()
        num = _fpoly(list(reversed(self.num.coeffs())))
        den = _fpoly(list(reversed(self.den.coeffs())))
        return RatFunc._make(-self.shift - dn + dd, num, den)

    def at_one(self) -> Fraction:
        """Evaluate at ``t = 1`` (the classical limit ``q -> 1``)."""
        d = self.den(1)
        if d == 0:
            raise ZeroDivisionError(f"{self} has a pole at t = 1")
        return _from_fmpq(self.num(1)) / _from_fmpq(d)

    def evaluate(self, t: Fraction) -> Fraction:
        t = Fraction(t)
        n = _from_fmpq(self.num(_to_fmpq(t))) * t**self.shift
        return n / _from_fmpq(self.den(_to_fmpq(t)))

    # rendering ------------------------------------------------------------

    def to_string(self) -> str:
        """Render as ``(num)/(den)`` with integer-coefficient polynomials."""
        num, den = self.num, self.den
        if self.shift >= 0:
            num = num.left_shift(self.shift)
        else:
            den = den.left_shift(-self.shift)
        ncf = [_from_fmpq(c) for c in num.coeffs()]
        dcf = [_from_fmpq(c) for c in den.coeffs()]
        scale = 1
        for c in ncf + dcf:
            scale = scale * c.denominator // _gcd(scale, c.denominator)
        ni = [int(c * scale) for c in ncf]
        di = [int(c * scale) for c in dcf]
        g = 0
        for c in ni + di:
            g = _gcd(g, abs(c))
        if g > 1:
            ni = [c // g for c in ni]
            di = [c // g for c in di]
        if di == [1]:
            return f"({_poly_str(ni)})"
        return f"({_poly_str(ni)})/({_poly_str(di)})"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"RatFunc('{self.to_string()}')"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _poly_str(cf: list[int]) -> str:
    terms = []
    for e in range(len(cf) - 1, -1, -1):
        c = cf[e]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "t" if e == 1 else f"t^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += sign + body
    return out


_TERM = re.compile(r"([+-]?)\s*(\d+)?\s*\*?\s*(t(?:\^(\d+))?)?")


def _parse_poly(text: str) -> LaurentPoly:
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse polynomial {text!r} at {pos}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) is not None else 1
        if m.group(3) is None:
            e = 0
        else:
            e = int(m.group(4)) if m.group(4) is not None else 1
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = m.end()
    return LaurentPoly(coeffs)


def parse_ratfunc(text: str) -> RatFunc:
    """Inverse of :meth:`RatFunc.to_string`."""
    text = text.strip()
    m = re.fullmatch(r"\(([^()]*)\)(?:/\(([^()]*)\))?", text)
    if not m:
        raise ValueError(f"not a rational function literal: {text!r}")
    num = _parse_poly(m.group(1))
    den = _parse_poly(m.group(2)) if m.group(2) is not None else LaurentPoly({0: 1})
    return RatFunc.from_laurent(num, den)


def to_ratfunc(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        if x == 0:
            return ZERO
        if x == 1:
            return ONE
        return RatFunc(x)
    if isinstance(x, (Fraction, LaurentPoly)):
        return RatFunc(x)
    raise TypeError(f"cannot convert {x!r} to RatFunc")


ZERO = RatFunc(0)
ONE = RatFunc(1)
T = RatFunc.monomial(1, 1)


def _quarter(x) -> int:
    x = Fraction(x)
    k = 4 * x
    if k.denominator != 1:
        raise ValueError(f"q-exponent {x} is not a quarter-integer")
    return int(k)


@lru_cache(maxsize=4096)
def _q_power(k: int) -> RatFunc:
    return RatFunc.monomial(1, k)


def q_power(x) -> RatFunc:
    """``q**x`` for quarter-integer ``x``, i.e. ``t**(4x)``."""
    return _q_power(_quarter(x))


@lru_cache(maxsize=1024)
def _qnum(x: Fraction) -> RatFunc:
    return (q_power(x) - q_power(-x)) / (q_power(1) - q_power(-1))


def qnum(x) -> RatFunc:
    """Quantum number ``[x] = (q^x - q^-x) / (q - q^-1)``."""
    return _qnum(Fraction(x))


def sqrt_monomial(x: RatFunc) -> RatFunc:
    """Positive square root of a monomial ``c * t**m`` with ``c`` a rational square."""
    x = to_ratfunc(x)
    if not x.is_monomial():
        raise IrrationalSqrtError(x)
    c, m = x.monomial_data()
    if c <= 0 or m % 2:
        raise IrrationalSqrtError(x)
    rn, rd = isqrt(c.numerator), isqrt(c.denominator)
    if rn * rn != c.numerator or rd * rd != c.denominator:
        raise IrrationalSqrtError(x)
    return RatFunc.monomial(Fraction(rn, rd), m // 2)
