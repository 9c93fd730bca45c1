"""Sparse multivariate polynomials over Q with exact gcd.

Arithmetic runs on FLINT's ``fmpq_mpoly`` in lex order; the exponent
dictionary view is decoded on demand.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import flint
from flint.utils.flint_exceptions import DomainError

from .errors import TowerError


class NotExactDivision(TowerError):
    pass


def _q(c):
    """Canonical coefficient: a plain int when integral, else a Fraction."""
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _div(a, b):
    return _q(Fraction(a) / b)


def _to_fmpq(c):
    if type(c) is int:
        return c
    return flint.fmpq(c.numerator, c.denominator)


def _from_fmpq(c):
    return int(c.p) if c.q == 1 else Fraction(int(c.p), int(c.q))


_CONTEXTS = {}
# shared zero and one polynomials, keyed by (nvars, value); MultiPoly is immutable
_CONSTANTS = {}


def _context(nvars):
    ctx = _CONTEXTS.get(nvars)
    if ctx is None:
        ctx = _CONTEXTS[nvars] = flint.fmpq_mpoly_ctx.get(("x", nvars), "lex")
    return ctx


class MultiPoly:
    """Polynomial in ``nvars`` variables with rational coefficients.

    ``terms`` maps exponent tuples to int or Fraction coefficients and never
    holds zeros. Iteration runs over terms in descending lexicographic order
    of exponents (variable 0 most significant).
    """

    __slots__ = ("nvars", "_fl", "_terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                if len(e) != nvars or any(x < 0 for x in e):
                    raise ValueError(f"bad exponent {e} for {nvars} variables")
                c = _q(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self.nvars = nvars
        self._fl = _context(nvars).from_dict({e: _to_fmpq(c) for e, c in clean.items()})
        self._terms = clean
        self._hash = None

    @classmethod
    def _wrap(cls, nvars, fl):
        return _wrap(nvars, fl)

    @classmethod
    def _raw(cls, nvars, terms):
        """From an already clean ``{exponent: coefficient}`` dictionary."""
        p = cls._wrap(nvars, _context(nvars).from_dict({e: _to_fmpq(c) for e, c in terms.items()}))
        p._terms = terms
        return p

    @classmethod
    def zero(cls, nvars):
        key = (nvars, 0)
        if key not in _CONSTANTS:
            _CONSTANTS[key] = cls._raw(nvars, {})
        return _CONSTANTS[key]

    @classmethod
    def const(cls, nvars, c):
        c = _q(c)
        if c == 0 or c == 1:
            key = (nvars, c)
            if key not in _CONSTANTS:
                _CONSTANTS[key] = cls._raw(nvars, {(0,) * nvars: c} if c else {})
            return _CONSTANTS[key]
        return cls._raw(nvars, {(0,) * nvars: c})

    @classmethod
    def one(cls, nvars):
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, nvars, exps, c=1):
        return cls(nvars, {tuple(exps): c})

    @property
    def terms(self):
        if self._terms is None:
            self._terms = {tuple(map(int, e)): _from_fmpq(c) for e, c in self._fl.to_dict().items()}
        return self._terms

    # -- inspection ---------------------------------------------------------

    def is_zero(self):
        return self._fl.is_zero()

    def is_constant(self):
        return self._fl.is_constant()

    def is_one(self):
        return self._fl.is_one()

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, 0)

    def is_monomial(self):
        return len(self._fl) == 1

    def leading_exp(self):
        return tuple(map(int, self._fl.monoms()[0]))

    def leading_coeff(self) -> Fraction:
        if self._fl.is_zero():
            return 0
        return _from_fmpq(self._fl.leading_coefficient())

    def variables(self):
        return {i for i, d in enumerate(self._fl.degrees()) if d > 0}

    def degree_in(self, v):
        if self._fl.is_zero():
            return -1
        return int(self._fl.degrees()[v])

    def total_degree(self):
        return int(self._fl.total_degree())

    def items(self):
        return sorted(self.terms.items(), reverse=True)

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self._fl)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("polynomials over different variable counts")

    def _other(self, other):
        if type(other) is MultiPoly:
            if self.nvars != other.nvars:
                raise ValueError("polynomials over different variable counts")
            return other._fl
        return _to_fmpq(_q(other))

    def __add__(self, other):
        return _wrap(self.nvars, self._fl + self._other(other))

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._wrap(self.nvars, -self._fl)

    def __sub__(self, other):
        return _wrap(self.nvars, self._fl - self._other(other))

    def __rsub__(self, other):
        return MultiPoly._wrap(self.nvars, self._other(other) - self._fl)

    def scale(self, c):
        c = _q(c)
        if c == 1:
            return self
        return MultiPoly._wrap(self.nvars, self._fl * _to_fmpq(c))

    def __mul__(self, other):
        return _wrap(self.nvars, self._fl * self._other(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        return MultiPoly._wrap(self.nvars, self._fl ** n)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._fl == other._fl
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {dict(self.items())!r})"

    def derivative(self, j):
        return MultiPoly._wrap(self.nvars, self._fl.derivative(j))

    def exact_div(self, other: MultiPoly) -> MultiPoly:
        """Quotient of an exact division; raises NotExactDivision otherwise."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        try:
            return MultiPoly._wrap(self.nvars, self._fl / other._fl)
        except DomainError:
            raise NotExactDivision("polynomial division is not exact") from None

    def divides(self, other: MultiPoly) -> bool:
        try:
            other.exact_div(self)
        except NotExactDivision:
            return False
        return True

    def evaluate(self, values, one, zero):
        """Evaluate at ``values`` (a sequence of ring elements, one per variable)."""
        powers = [dict() for _ in range(self.nvars)]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = values[i] ** k if k else one
            return cache[k]

        acc = zero
        for e, c in self.terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = acc + term
        return acc

    def rational_content(self) -> Fraction:
        """Positive rational c with self / c having coprime integer coefficients."""
        if self.is_zero():
            return Fraction(1)
        vals = self.terms.values()
        den = lcm(*(c.denominator for c in vals))
        num = gcd(*(c.numerator for c in vals))
        return Fraction(num, den)

    def integer_primitive(self):
        """Return (content, primitive) with integer coefficients and positive leading coefficient."""
        if self.is_zero():
            return Fraction(0), self
        c = self.rational_content()
        if self.leading_coeff() < 0:
            c = -c
        return c, self.scale(_div(1, c))

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(_div(1, self.leading_coeff()))

    def extend(self, nvars: int, offset: int = 0) -> MultiPoly:
        """Embed into a ring with more variables, placing ours at ``offset``."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            ne[offset:offset + self.nvars] = e
            out[tuple(ne)] = c
        return MultiPoly._raw(nvars, out)


def _wrap(nvars, fl):
    p = _new(MultiPoly)
    p.nvars = nvars
    p._fl = fl
    p._terms = None
    p._hash = None
    return p


_new = object.__new__


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Greatest common divisor, normalized to lex-leading coefficient 1."""
    a._check(b)
    return MultiPoly._wrap(a.nvars, a._fl.gcd(b._fl))
