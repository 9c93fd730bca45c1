"""Exponential generators: characteristic equations, monomial root search, kernels."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .action import AutoAction
from .additive import build_system, solve, weighted_sum
from .diffop import DiffOperator
from .errors import AutomorphismError, SingularSubstitutionError
from .poly import MultiPoly
from .problem import ProblemSpec
from .qsolve import PositiveDimensional, solve_nonzero
from .ratfunc import RatFunc
from .tower import Tower, substitute

log = logging.getLogger(__name__)

_PROVENANCE_ORDER = {"identity": 0, "monomial-ansatz": 1, "user-supplied": 2}


@dataclass
class CharEquation:
    """sum_i a_i(t) * param_i(s) = 0 with denominators cleared.

    ``polynomial`` lives in Q[t1..tk, s1..sk]; it is None over an algebraic
    extension, where the root search substitutes into the data directly.
    """

    side: str
    polynomial: MultiPoly | None
    names: tuple
    spec: ProblemSpec

    def format(self):
        from .expr import format_poly

        if self.polynomial is None:
            return "(defined over the algebraic extension; searched directly)"
        return format_poly(self.polynomial, self.names)


@dataclass
class AutomorphismGenerator:
    action: AutoAction
    kernel: list = field(default_factory=list)
    skipped: str | None = None


def _fresh_names(tower: Tower):
    taken = set(tower.symbols)
    names = []
    for j, _ in enumerate(tower.variables):
        base = "s" if tower.k == 1 else f"s{j + 1}"
        name = base
        while name in taken:
            name += "_"
        taken.add(name)
        names.append(name)
    return tuple(names)


def char_equation(spec: ProblemSpec, side="alpha") -> CharEquation:
    params = spec.params(side)
    if not weighted_sum(spec.a, params).is_zero():
        raise AutomorphismError(f"inhomogeneous side: sum a_i {side}_i != 0, exponentials are "
                                "covered by the identity shortcut")
    tower = spec.tower
    if tower.minpoly:
        return CharEquation(side, None, tower.symbols, spec)
    snames = _fresh_names(tower)
    big = Tower(tower.variables + snames)
    k = tower.k
    t_img = {n: big.var(j) for j, n in enumerate(tower.variables)}
    s_img = {n: big.var(k + j) for j, n in enumerate(tower.variables)}
    acc = big.zero()
    for a, x in zip(spec.a, params):
        acc = acc + substitute(a, t_img, big) * substitute(x, s_img, big)
    _, prim = acc.coords[0].num.integer_primitive()
    return CharEquation(side, prim, big.variables, spec)


def _exponent_options(k, cap, diagonal):
    opts = []
    for j in range(k):
        if diagonal:
            cand = []
            for e in range(-cap, cap + 1):
                if e:
                    v = [0] * k
                    v[j] = e
                    cand.append(tuple(v))
        else:
            cand = [v for v in itertools.product(range(-cap, cap + 1), repeat=k) if any(v)]
        opts.append(cand)
    return opts


def _q_equations_poly(P: MultiPoly, k, E):
    """Coefficients (polys in q) of P(t, q * t^E) grouped by t-monomial."""
    groups = {}
    for exps, c in P.terms.items():
        a, b = exps[:k], exps[k:]
        texp = list(a)
        for j, bj in enumerate(b):
            if bj:
                for i in range(k):
                    texp[i] += bj * E[j][i]
        groups.setdefault(tuple(texp), {})[tuple(b)] = c
    return [MultiPoly(k, g) for g in groups.values()]


def _monomial_image(tower, q, E):
    img = tower.const(q)
    for i, e in enumerate(E):
        if e:
            img = img * tower.var(i) ** e
    return img


def _q_equations_ext(spec: ProblemSpec, E, eu):
    """Equations in (q_1..q_k, q_u) for t_j -> q_j t^E_j, u -> q_u t^eu u."""
    tower = spec.tower
    k = tower.k
    nq = k + 1
    qnames = tuple(f"_q{j}" for j in range(nq))
    big = Tower(tower.variables + qnames, tower.ext_name,
                tuple(RatFunc(r.num.extend(k + nq), r.den.extend(k + nq)) for r in tower.minpoly))

    def q(j):
        return big.var(k + j)

    images = {}
    for j, name in enumerate(tower.variables):
        img = q(j)
        for i, e in enumerate(E[j]):
            if e:
                img = img * big.var(i) ** e
        images[name] = img
    uimg = q(k) * big.gen()
    for i, e in enumerate(eu):
        if e:
            uimg = uimg * big.var(i) ** e
    images[tower.ext_name] = uimg
    lifted = {n: big.symbol(n) for n in tower.symbols}

    exprs = []
    for side, params in spec.sides():
        acc = big.zero()
        for a, x in zip(spec.a, params):
            acc = acc + substitute(a, lifted, big) * substitute(x, images, big)
        exprs.append(acc)
    mp = uimg ** tower.degree
    for l, r in enumerate(tower.minpoly):
        rl = substitute(tower.from_ratfunc(r), images, big)
        mp = mp + rl * uimg ** l
    exprs.append(mp)

    eqs = []
    for ex in exprs:
        for c in ex.coords:
            groups = {}
            for exps, v in c.num.terms.items():
                groups.setdefault(exps[:k], {})[exps[k:]] = v
            eqs.extend(MultiPoly(nq, g) for g in groups.values())
    return eqs


def find_roots_monomial(eq: CharEquation, degree_cap=1, diagonal=False):
    """Automorphisms t_j -> q_j * t^E_j (|E| <= cap) that solve the char equation.

    Returns (actions, notes). Zero and constant images are never produced.
    """
    spec = eq.spec
    tower = spec.tower
    k = tower.k
    found = []
    notes = []
    for E in itertools.product(*_exponent_options(k, degree_cap, diagonal)):
        if tower.minpoly:
            for eu in itertools.product(range(-degree_cap, degree_cap + 1), repeat=k):
                try:
                    sols = solve_nonzero(_q_equations_ext(spec, E, eu), k + 1)
                except PositiveDimensional:
                    notes.append(f"infinite root family for exponents {E}, {eu}; not enumerated")
                    continue
                for qs in sols:
                    images = {n: _monomial_image(tower, qs[j], E[j]) for j, n in enumerate(tower.variables)}
                    images[tower.ext_name] = _monomial_image(tower, qs[k], eu) * tower.gen()
                    found.append(AutoAction(tower, images, "monomial-ansatz"))
            continue
        try:
            sols = solve_nonzero(_q_equations_poly(eq.polynomial, k, E), k)
        except PositiveDimensional:
            notes.append(f"infinite root family for exponents {E}; not enumerated")
            continue
        for qs in sols:
            images = {n: _monomial_image(tower, qs[j], E[j]) for j, n in enumerate(tower.variables)}
            found.append(AutoAction(tower, images, "monomial-ansatz"))

    out = []
    for act in found:
        if act.problems() or not verify_action(act, spec):
            continue
        if act.is_identity():
            act = AutoAction(tower, act.images, "identity")
        if act not in out:
            out.append(act)
    return sort_actions(out), notes


def sort_actions(actions):
    return sorted(actions, key=lambda a: (_PROVENANCE_ORDER.get(a.provenance, 9), a.describe()))


def verify_action(action: AutoAction, spec: ProblemSpec, diagnostics=None) -> bool:
    """Exact check of sum_i a_i sigma(param_i) = 0 on every side of the mode."""
    if diagnostics is None:
        diagnostics = []
    probs = action.problems()
    if probs:
        diagnostics.extend(probs)
        return False
    try:
        for side, params in spec.sides():
            acc = spec.tower.zero()
            for a, x in zip(spec.a, params):
                acc = acc + a * action(x)
            if not acc.is_zero():
                diagnostics.append(f"sum a_i sigma({side}_i) != 0")
                return False
    except SingularSubstitutionError as exc:
        diagnostics.append(str(exc))
        return False
    return True


def homogeneous_operator_kernel(action: AutoAction, spec: ProblemSpec, bounds=None):
    """Kernel of sum_i sigma^-1(a_i) D_m(param_i) = 0 for all m <= J."""
    inv = action.inverse()
    if inv is None:
        raise AutomorphismError("kernel skipped: the action has no symbolic inverse on L")
    weights = [inv(a) for a in spec.a]
    bounds = tuple(bounds if bounds is not None else spec.bounds)
    system = build_system(spec, bounds, weights=weights)
    return [DiffOperator(spec.tower, bounds, v) for v in solve(system, 0).kernel]


def residual_factor(eq: CharEquation, actions):
    """Char polynomial with the found roots (and s = 0) divided out; k = 1 only."""
    P = eq.polynomial
    if P is None or eq.spec.tower.k != 1:
        return None
    factors = [MultiPoly(2, {(0, 1): 1})]
    for act in actions:
        q, e = _mono(act.images[eq.spec.tower.variables[0]])
        if e >= 0:
            factors.append(MultiPoly(2, {(0, 1): 1, (e, 0): -q}))
        else:
            factors.append(MultiPoly(2, {(-e, 1): 1, (0, 0): -q}))
    for f in factors:
        while P.degree_in(1) > 0 and f.divides(P):
            P = P.exact_div(f)
    _, P = P.integer_primitive()
    return P


def _mono(x):
    from .action import monomial_data

    q, e = monomial_data(x)
    return q, e[0]


def search_generators(spec: ProblemSpec, bounds, degree_cap=1, diagonal=False, candidates=(),
                      identity_kernel=None):
    """Char equations, verified actions and their operator kernels.

    ``identity_kernel`` lets the caller reuse a kernel it already computed
    for the untwisted system.
    """
    notes = []
    eqs = []
    for side, _ in spec.sides():
        try:
            eqs.append(char_equation(spec, side))
        except AutomorphismError as exc:
            notes.append(str(exc))
    if len(eqs) < len(spec.sides()):
        return [], eqs, notes

    actions, rnotes = find_roots_monomial(eqs[0], degree_cap, diagonal)
    notes.extend(rnotes)
    for cand in candidates:
        diag = []
        if verify_action(cand, spec, diag):
            if cand not in actions:
                actions.append(cand)
        else:
            notes.append(f"candidate {cand.describe()} rejected: {'; '.join(diag)}")
    actions = sort_actions(actions)

    for eq in eqs:
        if spec.tower.k == 1 and eq.polynomial is not None:
            R = residual_factor(eq, actions)
            if R is not None and R.degree_in(1) > 0:
                from .expr import format_poly

                notes.append(f"{eq.side} side: unresolved factor {format_poly(R, eq.names)} of the "
                             "characteristic equation")
        elif spec.tower.k > 1:
            notes.append(f"{eq.side} side: transcendental root family: not enumerated "
                         f"(residual characteristic equation {eq.format()} = 0)")

    gens = []
    for act in actions:
        if act.is_identity() and identity_kernel is not None:
            gens.append(AutomorphismGenerator(act, list(identity_kernel)))
            continue
        try:
            kernel = homogeneous_operator_kernel(act, spec, bounds)
            gens.append(AutomorphismGenerator(act, kernel))
        except AutomorphismError as exc:
            gens.append(AutomorphismGenerator(act, [], skipped=str(exc)))
    return gens, eqs, notes
