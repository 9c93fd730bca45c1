"""Field automorphisms of K given by images of the generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import SingularSubstitutionError
from .tower import FieldElement, Tower, substitute


def monomial_data(x: FieldElement):
    """Return (q, exponents) when x = q * t^e with e possibly negative, else None."""
    if not x.in_base() or x.is_zero():
        return None
    r = x.coords[0]
    if not (r.num.is_monomial() and r.den.is_monomial()):
        return None
    (en, cn), = r.num.terms.items()
    (ed, cd), = r.den.terms.items()
    return Fraction(cn) / cd, tuple(a - b for a, b in zip(en, ed))


def _int_inverse(E):
    """Inverse of an integer matrix when it is unimodular, else None."""
    n = len(E)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(E)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return None
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [v / pv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    inv = [row[n:] for row in A]
    if any(v.denominator != 1 for row in inv for v in row):
        return None
    return [[int(v) for v in row] for row in inv]


@dataclass(frozen=True)
class AutoAction:
    """sigma given by t_j -> images[t_j] (and u -> images[u] in an extension)."""

    tower: Tower
    images: dict
    provenance: str = "user-supplied"
    _inverse: list = field(default_factory=list, compare=False, repr=False)

    @classmethod
    def identity(cls, tower: Tower):
        return cls(tower, {name: tower.symbol(name) for name in tower.symbols}, "identity")

    def __post_init__(self):
        full = {name: self.images.get(name, self.tower.symbol(name)) for name in self.tower.symbols}
        object.__setattr__(self, "images", full)

    def __call__(self, x: FieldElement) -> FieldElement:
        return substitute(x, self.images)

    def __eq__(self, other):
        return isinstance(other, AutoAction) and self.images == other.images

    def __hash__(self):
        return hash(tuple(sorted(self.images.items())))

    def is_identity(self):
        return all(self.images[n] == self.tower.symbol(n) for n in self.tower.symbols)

    def problems(self):
        """Reasons this assignment cannot be an automorphism (empty when well formed)."""
        out = []
        for name in self.tower.variables:
            img = self.images[name]
            if img.is_zero():
                out.append(f"{name} maps to 0")
            elif img.is_rational_constant():
                out.append(f"{name} maps to a rational constant")
        if self.tower.minpoly:
            u = self.tower.ext_name
            try:
                val = self.images[u] ** self.tower.degree
                for l, r in enumerate(self.tower.minpoly):
                    if not r.is_zero():
                        val = val + self(self.tower.from_ratfunc(r)) * self.images[u] ** l
            except SingularSubstitutionError as exc:
                out.append(str(exc))
            else:
                if not val.is_zero():
                    out.append(f"image of {u} is not a root of the transformed minimal polynomial")
        return out

    def inverse(self) -> AutoAction | None:
        """Symbolic inverse for monomial actions with unimodular exponent matrix."""
        if self._inverse:
            return self._inverse[0]
        inv = self._compute_inverse()
        self._inverse.append(inv)
        return inv

    @property
    def invertible(self):
        return self.inverse() is not None

    def _compute_inverse(self):
        if self.is_identity():
            return self
        tower = self.tower
        k = tower.k
        qs, E = [], []
        for name in tower.variables:
            md = monomial_data(self.images[name])
            if md is None:
                return None
            qs.append(md[0])
            E.append(md[1])
        F = _int_inverse(E)
        if F is None:
            return None
        images = {}
        for j, name in enumerate(tower.variables):
            r = Fraction(1)
            for i in range(k):
                r *= qs[i] ** (-F[j][i])
            img = tower.const(r)
            for i in range(k):
                if F[j][i]:
                    img = img * tower.var(i) ** F[j][i]
            images[name] = img
        partial_inv = AutoAction(tower, images, self.provenance)
        if tower.minpoly:
            u = tower.ext_name
            uimg = self.images[u]
            if tower.degree > 1:
                coords = uimg.coords
                if any(not c.is_zero() for i, c in enumerate(coords) if i != 1):
                    return None
                g = tower.from_ratfunc(coords[1])
                images[u] = tower.gen() / partial_inv(g)
            partial_inv = AutoAction(tower, images, self.provenance)
        # sigma(tau(x)) == x on every generator
        for name in tower.symbols:
            if self(partial_inv.images[name]) != tower.symbol(name):
                return None
        return partial_inv

    def describe(self):
        from .expr import format_element

        return ", ".join(f"{n} -> {format_element(self.images[n])}" for n in self.tower.symbols)
