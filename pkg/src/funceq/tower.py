"""The field K = Q(t1..tk)[u]/(m(u)) and its partial derivations.

Elements are coordinate vectors in the basis 1, u, ..., u^(m-1) with
rational-function coordinates. When the extension degree is 1 the tower is
just Q(t1..tk).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    FieldDivisionError,
    InseparableExtensionError,
    MixedTowerError,
    ReducibleMinpolyError,
    SingularSubstitutionError,
)
from .poly import MultiPoly, poly_gcd
from .ratfunc import RatFunc

log = logging.getLogger(__name__)

MultiIndex = tuple


@dataclass(frozen=True)
class Tower:
    """Variables t1..tk plus an optional primitive algebraic element.

    ``minpoly`` holds r0..r_{m-1} of the monic polynomial
    u^m + r_{m-1} u^{m-1} + ... + r_0; an empty tuple means m = 1.
    Irreducibility is the caller's promise; see :meth:`check_minpoly`.
    """

    variables: tuple
    ext_name: str | None = None
    minpoly: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "minpoly", tuple(self.minpoly))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        if self.minpoly and self.ext_name is None:
            raise ValueError("extension needs a generator name")
        for r in self.minpoly:
            if r.nvars != self.k:
                raise ValueError("minimal polynomial coefficient over the wrong variables")

    @property
    def k(self):
        return len(self.variables)

    @property
    def degree(self):
        return max(1, len(self.minpoly))

    @property
    def symbols(self):
        return self.variables + ((self.ext_name,) if self.minpoly else ())

    # -- constructors -------------------------------------------------------

    def element(self, coords) -> FieldElement:
        coords = tuple(_as_ratfunc(c, self.k) for c in coords)
        coords = coords + (RatFunc.zero(self.k),) * (self.degree - len(coords))
        if len(coords) != self.degree:
            raise ValueError("too many coordinates for this tower")
        return FieldElement(self, coords)

    def from_ratfunc(self, r: RatFunc) -> FieldElement:
        return self.element([r])

    def const(self, c) -> FieldElement:
        return self.element([RatFunc.const(self.k, c)])

    def zero(self) -> FieldElement:
        return self.const(0)

    def one(self) -> FieldElement:
        return self.const(1)

    def var(self, j) -> FieldElement:
        if isinstance(j, str):
            j = self.variables.index(j)
        return self.element([RatFunc.var(self.k, j)])

    def gen(self) -> FieldElement:
        if not self.minpoly:
            raise ValueError("tower has no algebraic generator")
        if self.degree == 1:
            return self.element([-self.minpoly[0]])
        return self.element([RatFunc.zero(self.k), RatFunc.one(self.k)])

    def symbol(self, name) -> FieldElement:
        if name in self.variables:
            return self.var(name)
        if self.minpoly and name == self.ext_name:
            return self.gen()
        raise KeyError(name)

    # -- derivation data ----------------------------------------------------

    def partial_of_gen(self, j) -> FieldElement:
        """d u / d t_j from implicit differentiation of the minimal polynomial."""
        key = ("du", j)
        if key not in self._cache:
            m = self.degree
            mp_prime = [RatFunc.const(self.k, m) if i == m - 1 else self.minpoly[i + 1] * (i + 1)
                        for i in range(m)]
            deriv = self.element(mp_prime)
            if deriv.is_zero():
                raise InseparableExtensionError("minimal polynomial has zero derivative")
            try:
                inv = deriv.inv()
            except ReducibleMinpolyError as exc:
                raise InseparableExtensionError("m'(u) is not invertible in K") from exc
            drs = self.element([r.derivative(j) for r in self.minpoly])
            self._cache[key] = -(drs * inv)
        return self._cache[key]

    def check_minpoly(self):
        """Warn when a small-degree minimal polynomial has an obvious root in L.

        Only constant and monomial candidates are tried, up to degree 3.
        """
        if not self.minpoly or self.degree > 3:
            return True
        cands = [RatFunc.const(self.k, c) for c in (0, 1, -1, 2, -2)]
        cands += [RatFunc.var(self.k, j) * s for j in range(self.k) for s in (1, -1)]
        for r in cands:
            acc = RatFunc.one(self.k)
            val = RatFunc.zero(self.k)
            for coef in self.minpoly:
                val = val + coef * acc
                acc = acc * r
            val = val + acc
            if val.is_zero():
                log.warning("minimal polynomial of %s has the root %r in L", self.ext_name, r)
                return False
        return True


def _as_ratfunc(c, nvars) -> RatFunc:
    if isinstance(c, RatFunc):
        return c
    if isinstance(c, MultiPoly):
        return RatFunc(c)
    return RatFunc.const(nvars, c)


class FieldElement:
    __slots__ = ("tower", "coords")

    def __init__(self, tower: Tower, coords: tuple):
        self.tower = tower
        self.coords = coords

    def _same(self, other) -> FieldElement:
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)):
                return self.tower.const(other)
            if isinstance(other, RatFunc):
                return self.tower.from_ratfunc(other)
            raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")
        if other.tower is not self.tower and other.tower != self.tower:
            raise MixedTowerError("operands belong to different towers")
        return other

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def __bool__(self):
        return not self.is_zero()

    def is_rational_constant(self):
        return self.coords[0].is_constant() and all(c.is_zero() for c in self.coords[1:])

    def in_base(self):
        """True when the element lies in L = Q(t1..tk)."""
        return all(c.is_zero() for c in self.coords[1:])

    def __add__(self, other):
        other = self._same(other)
        return FieldElement(self.tower, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.tower, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._same(other)
        return FieldElement(self.tower, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        other = self._same(other)
        if self.tower.degree == 1:
            return FieldElement(self.tower, (self.coords[0] * other.coords[0],))
        return FieldElement(self.tower, _mulmod(self.coords, other.coords, self.tower))

    __rmul__ = __mul__

    def inv(self) -> FieldElement:
        if self.is_zero():
            raise FieldDivisionError("inverse of zero in K")
        if self.tower.degree == 1:
            return FieldElement(self.tower, (self.coords[0].inv(),))
        return FieldElement(self.tower, _invmod(self.coords, self.tower))

    def __truediv__(self, other):
        return self * self._same(other).inv()

    def __rtruediv__(self, other):
        return self._same(other) * self.inv()

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        result = self.tower.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            if other.tower is not self.tower and other.tower != self.tower:
                return False
            return self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational_constant() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        from .expr import format_element

        return f"FieldElement({format_element(self)!r})"


def equals(x: FieldElement, y: FieldElement) -> bool:
    return x._same(y).coords == x.coords


# -- arithmetic modulo the minimal polynomial ---------------------------------


def _common_form(coords):
    """Polynomial numerators over one common denominator (the lcm)."""
    den = None
    for c in coords:
        if c.is_zero() or c.den.is_constant():
            continue
        if den is None:
            den = c.den
        elif not c.den == den:
            den = den * c.den.exact_div(poly_gcd(den, c.den))
    nvars = coords[0].nvars
    if den is None:
        # canonical constant denominators are 1
        return [c.num for c in coords], MultiPoly.one(nvars)
    nums = []
    for c in coords:
        if c.is_zero():
            nums.append(c.num)
        elif c.den == den:
            nums.append(c.num)
        else:
            nums.append(c.num * den.exact_div(c.den))
    return nums, den


def _mulmod(a, b, tower):
    """Product modulo the minimal polynomial.

    Works on polynomial numerators over a common denominator so that only
    the final coordinates are gcd-reduced.
    """
    k = tower.k
    if len(a) == 1:
        return (a[0] * b[0],)
    na, da = _common_form(a)
    nb, db = _common_form(b)
    zero = MultiPoly.zero(k)
    prod = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(na):
        if x.is_zero():
            continue
        for j, y in enumerate(nb):
            if not y.is_zero():
                prod[i + j] = prod[i + j] + x * y
    den = da * db
    key = "minpoly-common"
    if key not in tower._cache:
        tower._cache[key] = _common_form(tower.minpoly)
    rnums, rden = tower._cache[key]
    m = tower.degree
    unit = rden == 1
    for d in range(len(prod) - 1, m - 1, -1):
        c = prod[d]
        if c.is_zero():
            continue
        if not unit:
            prod = [x * rden for x in prod[:d]] + prod[d:]
            den = den * rden
        for l in range(m):
            if not rnums[l].is_zero():
                prod[d - m + l] = prod[d - m + l] - c * rnums[l]
    return tuple(RatFunc(x, den) for x in prod[:m])


def _trim(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _pdivmod(a, b):
    """Univariate division over L with coefficient lists (low degree first)."""
    a = _trim(a)
    b = _trim(b)
    k = b[0].nvars
    q = [RatFunc.zero(k) for _ in range(max(len(a) - len(b) + 1, 1))]
    lc_inv = b[-1].inv()
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] * lc_inv
        q[shift] = c
        for i, y in enumerate(b):
            a[i + shift] = a[i + shift] - c * y
        a = _trim(a)
    return q, a


def _psub(a, b):
    n = max(len(a), len(b))
    k = (a or b)[0].nvars
    z = RatFunc.zero(k)
    return _trim([(a[i] if i < len(a) else z) - (b[i] if i < len(b) else z) for i in range(n)])


def _pmul(a, b):
    if not a or not b:
        return []
    k = a[0].nvars
    out = [RatFunc.zero(k) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _det(rows):
    """Fraction-free (Bareiss) determinant of a square matrix of polynomials."""
    M = [list(r) for r in rows]
    n = len(M)
    sign = 1
    prev = None
    for c in range(n):
        piv = next((i for i in range(c, n) if not M[i][c].is_zero()), None)
        if piv is None:
            return MultiPoly.zero(M[0][0].nvars)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                v = M[c][c] * M[i][j] - M[i][c] * M[c][j]
                M[i][j] = v.exact_div(prev) if prev is not None else v
        prev = M[c][c]
    return prev if sign == 1 else -prev


def _invmod_cramer(a, tower, rnums):
    """Inverse via Cramer's rule on the multiplication matrix (polynomial minpoly)."""
    k = tower.k
    m = tower.degree
    nums, den = _common_form(a)
    cols = [list(nums)]
    for _ in range(m - 1):
        prev = cols[-1]
        top = prev[-1]
        nxt = [MultiPoly.zero(k)] + prev[:-1]
        if not top.is_zero():
            nxt = [x - top * r for x, r in zip(nxt, rnums)]
        cols.append(nxt)
    rows = [[cols[j][i] for j in range(m)] for i in range(m)]
    det = _det(rows)
    if det.is_zero():
        raise ReducibleMinpolyError(
            "element shares a factor with the minimal polynomial (reducible extension)")
    out = []
    for i in range(m):
        # column i replaced by the unit vector e_0
        sub = [[rows[r][c] for c in range(m) if c != i] for r in range(1, m)]
        di = _det(sub) if sub else MultiPoly.one(k)
        if i % 2:
            di = -di
        out.append(RatFunc(di * den, det) if not di.is_zero() else RatFunc.zero(k))
    return tuple(out)


def _invmod(a, tower):
    """Inverse modulo the minimal polynomial.

    Polynomial minimal polynomials go through Cramer's rule; otherwise this
    is the extended Euclidean algorithm in L[u].
    """
    key = "minpoly-common"
    if key not in tower._cache:
        tower._cache[key] = _common_form(tower.minpoly)
    rnums, rden = tower._cache[key]
    if rden.is_constant() and rden.constant_value() == 1:
        return _invmod_cramer(a, tower, rnums)
    k = tower.k
    m = tower.degree
    mp = list(tower.minpoly) + [RatFunc.one(k)]
    r0, r1 = mp, _trim(a)
    s0, s1 = [], [RatFunc.one(k)]
    while len(r1) > 1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
        if not r1:
            raise ReducibleMinpolyError(
                "element shares a factor with the minimal polynomial (reducible extension)")
    c = r1[0].inv()
    out = [x * c for x in s1]
    z = RatFunc.zero(k)
    _, out = _pdivmod(out, mp)
    out = out + [z] * (m - len(out))
    return tuple(out)


# -- derivations ---------------------------------------------------------------


def partial(j: int, x: FieldElement) -> FieldElement:
    """Partial derivative with respect to the j-th variable (0-based)."""
    tower = x.tower
    if not 0 <= j < tower.k:
        raise IndexError(f"no variable with index {j}")
    coords = x.coords
    out = tower.element([c.derivative(j) for c in coords])
    if tower.degree > 1:
        dpoly = [coords[l] * l for l in range(1, len(coords))]
        if any(not c.is_zero() for c in dpoly):
            out = out + tower.element(dpoly) * tower.partial_of_gen(j)
    return out


def iterated_partial(m: Sequence[int], x: FieldElement) -> FieldElement:
    for j, count in enumerate(m):
        for _ in range(count):
            if x.is_zero():
                return x
            x = partial(j, x)
    return x


def partial_table(x: FieldElement, bounds: Sequence[int]) -> dict:
    """All iterated partials of x with multi-index componentwise <= bounds."""
    table = {(0,) * len(bounds): x}
    for j, b in enumerate(bounds):
        for idx in sorted(table):
            cur = table[idx]
            for step in range(1, b + 1):
                cur = partial(j, cur) if not cur.is_zero() else cur
                nidx = idx[:j] + (idx[j] + step,) + idx[j + 1:]
                table[nidx] = cur
    return table


# -- substitution --------------------------------------------------------------


def substitute(x: FieldElement, images: Mapping[str, FieldElement], target: Tower | None = None) -> FieldElement:
    """Ring-homomorphic evaluation of x at new images of the generators.

    ``images`` maps generator names to elements of ``target`` (default: the
    tower of x). Missing generators map to the same-named generator of target.
    """
    src = x.tower
    target = target or src
    vals = []
    for name in src.variables:
        if name in images:
            vals.append(images[name])
        else:
            vals.append(target.symbol(name))
    one, zero = target.one(), target.zero()
    cache = {}

    def ev(poly):
        key = poly
        if key not in cache:
            cache[key] = poly.evaluate(vals, one, zero)
        return cache[key]

    acc = zero
    u_img = None
    if src.minpoly:
        u_img = images[src.ext_name] if src.ext_name in images else target.symbol(src.ext_name)
    upow = one
    for l, c in enumerate(x.coords):
        if not c.is_zero():
            den = ev(c.den)
            if den.is_zero():
                raise SingularSubstitutionError("denominator vanishes after substitution")
            acc = acc + ev(c.num) * den.inv() * upow
        if u_img is not None and l + 1 < len(x.coords):
            upow = upow * u_img
    return acc
