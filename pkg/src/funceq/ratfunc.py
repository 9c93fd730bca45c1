"""Elements of Q(t1, ..., tk) in canonical reduced form."""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldDivisionError
from .poly import MultiPoly, poly_gcd


# shared zero and one, keyed by (nvars, value); RatFunc values are never mutated
_CONSTANTS = {}


class RatFunc:
    """Reduced fraction num/den.

    Canonical form: gcd(num, den) = 1 and the lex-leading coefficient of
    ``den`` is 1, so equality is a comparison of the stored polynomials.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, _reduced=False):
        if den is None:
            den = MultiPoly.one(num.nvars)
        if den.is_zero():
            raise FieldDivisionError("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, nvars, c):
        if c == 0 or c == 1:
            key = (nvars, c)
            if key not in _CONSTANTS:
                _CONSTANTS[key] = cls(MultiPoly.const(nvars, c), MultiPoly.one(nvars), _reduced=True)
            return _CONSTANTS[key]
        return cls(MultiPoly.const(nvars, c), MultiPoly.one(nvars), _reduced=True)

    @classmethod
    def zero(cls, nvars):
        return cls.const(nvars, 0)

    @classmethod
    def one(cls, nvars):
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars, i):
        return cls(MultiPoly.var(nvars, i), MultiPoly.one(nvars), _reduced=True)

    @property
    def nvars(self):
        return self.num.nvars

    def is_zero(self):
        return self.num.is_zero()

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value()

    def is_polynomial(self):
        return self.den.is_constant()

    def __add__(self, other):
        other = _lift(other, self.nvars)
        if self.den == other.den:
            if self.den.is_constant():
                return RatFunc(self.num + other.num, self.den, _reduced=True)
            return RatFunc(self.num + other.num, self.den)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        # only the common factor of the denominators can cancel afterwards
        g = poly_gcd(self.den, other.den)
        if g.is_constant():
            return RatFunc._monic_den(self.num * other.den + other.num * self.den, self.den * other.den)
        d1, d2 = self.den.exact_div(g), other.den.exact_div(g)
        num, den = _reduce(self.num * d2 + other.num * d1, g)
        return RatFunc._monic_den(num, d1 * d2 * den)

    @classmethod
    def _monic_den(cls, num, den):
        """From coprime num and den, scaling den to lex-leading coefficient 1."""
        if num.is_zero():
            return cls.zero(num.nvars)
        lc = den.leading_coeff()
        if lc != 1:
            num, den = num.scale(Fraction(1) / lc), den.scale(Fraction(1) / lc)
        return cls(num, den, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-_lift(other, self.nvars))

    def __rsub__(self, other):
        return _lift(other, self.nvars) - self

    def __mul__(self, other):
        other = _lift(other, self.nvars)
        if self.is_zero() or other.is_zero():
            return RatFunc.zero(self.nvars)
        if self.is_constant():
            return RatFunc(other.num.scale(self.num.constant_value()), other.den, _reduced=True)
        if other.is_constant():
            return RatFunc(self.num.scale(other.num.constant_value()), self.den, _reduced=True)
        # cross cancellation keeps the product reduced
        n1, d2 = self.num, other.den
        if not d2.is_constant():
            g1 = poly_gcd(n1, d2)
            if not g1.is_constant():
                n1, d2 = n1.exact_div(g1), d2.exact_div(g1)
        n2, d1 = other.num, self.den
        if not d1.is_constant():
            g2 = poly_gcd(n2, d1)
            if not g2.is_constant():
                n2, d1 = n2.exact_div(g2), d1.exact_div(g2)
        return RatFunc._monic_den(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise FieldDivisionError("inverse of zero")
        lc = self.num.leading_coeff()
        return RatFunc(self.den.scale(Fraction(1) / lc), self.num.scale(Fraction(1) / lc), _reduced=True)

    def __truediv__(self, other):
        return self * _lift(other, self.nvars).inv()

    def __rtruediv__(self, other):
        return _lift(other, self.nvars) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _reduced=True)

    def derivative(self, j):
        n, d = self.num, self.den
        if d.is_constant():
            return RatFunc(n.derivative(j), d, _reduced=True)
        return RatFunc(n.derivative(j) * d - n * d.derivative(j), d * d)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.den.is_constant() and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r})"


def _lift(x, nvars) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc(x)
    return RatFunc.const(nvars, x)


def _reduce(num: MultiPoly, den: MultiPoly):
    if den.is_one():
        return num, den
    if num.is_zero():
        return num, MultiPoly.one(num.nvars)
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
    lc = den.leading_coeff()
    if lc != 1:
        num = num.scale(Fraction(1) / lc)
        den = den.scale(Fraction(1) / lc)
    return num, den
