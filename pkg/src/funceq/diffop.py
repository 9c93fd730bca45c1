"""Differential operators sum_j c_j * d1^j1 ... dk^jk with coefficients in K."""

from __future__ import annotations

import itertools
from math import comb, prod
from typing import Mapping

from .tower import FieldElement, Tower, iterated_partial, partial_table, substitute


def indices_upto(bounds):
    """All multi-indices componentwise <= bounds, in lexicographic order."""
    return list(itertools.product(*(range(b + 1) for b in bounds)))


def index_leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def binom_index(j, m):
    return prod(comb(a, b) for a, b in zip(j, m))


class DiffOperator:
    """Sparse table multi-index -> coefficient, with explicit bounds.

    Bounds are kept as data so systems can enumerate every unknown
    coefficient, including ones that are currently zero.
    """

    __slots__ = ("tower", "bounds", "coeffs")

    def __init__(self, tower: Tower, bounds, coeffs: Mapping | None = None):
        self.tower = tower
        self.bounds = tuple(bounds)
        if len(self.bounds) != tower.k:
            raise ValueError(f"bounds {self.bounds} do not match {tower.k} variables")
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(idx)
            if not index_leq(idx, self.bounds):
                raise ValueError(f"index {idx} exceeds bounds {self.bounds}")
            if not isinstance(c, FieldElement):
                c = tower.const(c)
            if not c.is_zero():
                clean[idx] = c
        self.coeffs = clean

    @classmethod
    def identity(cls, tower, scale=1, bounds=None):
        bounds = bounds or (0,) * tower.k
        return cls(tower, bounds, {(0,) * tower.k: scale})

    @classmethod
    def zero(cls, tower, bounds=None):
        return cls(tower, bounds or (0,) * tower.k)

    @classmethod
    def from_vector(cls, tower, bounds, columns, values):
        return cls(tower, bounds, dict(zip(columns, values)))

    def coeff(self, idx) -> FieldElement:
        return self.coeffs.get(tuple(idx), self.tower.zero())

    def is_zero(self):
        return not self.coeffs

    @property
    def degree(self):
        return max((sum(i) for i in self.coeffs), default=0)

    def with_bounds(self, bounds):
        return DiffOperator(self.tower, bounds, self.coeffs)

    def __add__(self, other):
        bounds = tuple(max(a, b) for a, b in zip(self.bounds, other.bounds))
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out[idx] + c if idx in out else c
        return DiffOperator(self.tower, bounds, out)

    def scale(self, c):
        return DiffOperator(self.tower, self.bounds, {i: v * c for i, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.tower == other.tower and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        from .report import format_operator

        return f"DiffOperator({format_operator(self)!r})"


def apply(D: DiffOperator, x: FieldElement, table=None) -> FieldElement:
    """D(x) = sum_m c_m * d^m(x)."""
    x = D.tower.zero()._same(x)
    if table is None:
        table = partial_table(x, D.bounds) if D.coeffs else {}
    acc = D.tower.zero()
    for idx, c in D.coeffs.items():
        acc = acc + c * table[idx]
    return acc


def derived(D: DiffOperator, m) -> DiffOperator:
    """D_m = sum_{j >= m} c_j * binom(j, m) * d^(j - m); D_0 = D."""
    m = tuple(m)
    if not index_leq(m, D.bounds):
        return DiffOperator.zero(D.tower, D.bounds)
    bounds = tuple(b - x for b, x in zip(D.bounds, m))
    out = {}
    for j, c in D.coeffs.items():
        if index_leq(m, j):
            out[tuple(a - b for a, b in zip(j, m))] = c * binom_index(j, m)
    return DiffOperator(D.tower, bounds, out)


def leibniz_product(D: DiffOperator, x: FieldElement, y: FieldElement) -> FieldElement:
    """sum_m D_m(x) * d^m(y), which equals D(x*y)."""
    xt = partial_table(x, D.bounds)
    yt = partial_table(y, D.bounds)
    acc = D.tower.zero()
    for m in indices_upto(D.bounds):
        Dm = derived(D, m)
        if Dm.is_zero() or yt[m].is_zero():
            continue
        acc = acc + apply(Dm, x, xt) * yt[m]
    return acc


def act_automorphism(D: DiffOperator, images) -> DiffOperator:
    """Coefficient-wise substitution c -> sigma(c); ``images`` is an AutoAction or mapping."""
    images = getattr(images, "images", images)
    return DiffOperator(D.tower, D.bounds, {i: substitute(c, images) for i, c in D.coeffs.items()})


def apply_direct(D: DiffOperator, x: FieldElement) -> FieldElement:
    """apply() without the shared partial table; used by tests as a cross-check."""
    acc = D.tower.zero()
    for idx, c in D.coeffs.items():
        acc = acc + c * iterated_partial(idx, x)
    return acc
