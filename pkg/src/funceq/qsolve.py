"""Nonzero rational solutions of small polynomial systems over Q."""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from sympy import divisors

from .poly import MultiPoly


class PositiveDimensional(Exception):
    """Raised when some unknown stays free, i.e. there are infinitely many solutions."""


def specialize(p: MultiPoly, var: int, value: Fraction) -> MultiPoly:
    out = {}
    for e, c in p.terms.items():
        ne = e[:var] + (0,) + e[var + 1:]
        s = out.get(ne, 0) + c * value ** e[var]
        if s:
            out[ne] = s
        else:
            out.pop(ne, None)
    return MultiPoly._raw(p.nvars, out)


def rational_roots(p: MultiPoly, var: int) -> list:
    """Nonzero rational roots of a polynomial in the single variable ``var``."""
    coeffs = {}
    for e, c in p.terms.items():
        coeffs[e[var]] = c
    if not coeffs:
        raise PositiveDimensional
    low = min(coeffs)
    high = max(coeffs)
    if low == high:
        return []
    scale = lcm(*(c.denominator for c in coeffs.values()))
    ints = {d: int(c * scale) for d, c in coeffs.items()}
    a_low, a_high = abs(ints[low]), abs(ints[high])
    if high - low == 1:
        return [Fraction(-ints[low], ints[high])]
    roots = set()
    for num in divisors(a_low):
        for den in divisors(a_high):
            for sign in (1, -1):
                r = Fraction(sign * num, den)
                if r in roots:
                    continue
                if sum(c * r ** d for d, c in coeffs.items()) == 0:
                    roots.add(r)
    return sorted(roots)


def strip_monomial(p: MultiPoly) -> MultiPoly:
    """Divide out the largest monomial factor (harmless since every unknown is nonzero)."""
    if p.is_zero():
        return p
    low = tuple(min(e[i] for e in p.terms) for i in range(p.nvars))
    if not any(low):
        return p
    return MultiPoly._raw(p.nvars, {tuple(a - b for a, b in zip(e, low)): c for e, c in p.terms.items()})


def _groebner_univariate(polys, nvars):
    """Fallback elimination: a univariate member of a lex Groebner basis.

    The ideal is saturated by q0*...*q_{n-1} through an auxiliary unknown w,
    so components inside the coordinate hyperplanes are discarded.
    """
    from sympy import QQ, groebner, symbols

    syms = symbols(f"q0:{nvars}")
    w = symbols("w")
    exprs = []
    for p in polys:
        e = 0
        for exps, c in p.terms.items():
            mono = 1
            for s, k in zip(syms, exps):
                mono *= s ** k
            e += QQ(c.numerator, c.denominator) * mono
        exprs.append(e)
    prod = 1
    for s_ in syms:
        prod *= s_
    G = groebner(exprs + [w * prod - 1], w, *syms, order="lex", domain=QQ)
    if list(G.exprs) == [1]:
        return None, []
    out = []
    for g in G.polys:
        if g.degree(w) > 0:
            continue
        terms = {}
        for monom, coeff in g.terms():
            terms[tuple(monom[1:])] = Fraction(int(coeff.numerator), int(coeff.denominator))
        out.append(MultiPoly(nvars, terms))
    uni = [p for p in out if len(p.variables()) == 1]
    return (uni[0] if uni else None), out


def solve_nonzero(polys, nvars) -> list:
    """All solutions in (Q \\ {0})^nvars; raises PositiveDimensional for families."""
    sols = []
    _solve([p for p in polys if not p.is_zero()], nvars, {}, sols)
    return sorted(set(sols))


def _solve(polys, nvars, assigned, out):
    live = []
    for p in polys:
        for v, val in assigned.items():
            if p.degree_in(v) > 0:
                p = specialize(p, v, val)
        p = strip_monomial(p)
        if p.is_zero():
            continue
        if p.is_constant():
            return
        live.append(p)
    free = [v for v in range(nvars) if v not in assigned]
    if not live:
        if free:
            raise PositiveDimensional
        out.append(tuple(assigned[v] for v in range(nvars)))
        return
    uni = [p for p in live if len(p.variables()) == 1]
    if not uni:
        g, basis = _groebner_univariate(live, nvars)
        if g is None:
            if not basis:
                return
            raise PositiveDimensional
        uni = [g]
        live = basis
    p = min(uni, key=lambda q: (q.total_degree(), len(q)))
    v = next(iter(p.variables()))
    for r in rational_roots(p, v):
        _solve(live, nvars, {**assigned, v: r}, out)
