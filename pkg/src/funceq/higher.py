"""Degree p >= 2 monomial solutions built from products of exponential monomials.

A product generator is x -> prod_j sigma_j(D_j(x)). Its p-additive form
(x_1, ..., x_p) -> prod_j sigma_j(D_j(x_j)) has to satisfy, for every
permutation of the factors and every split of the slots between alpha and
beta arguments, an identity in the independent quantities
sigma(d^m x_j). Expanding each factor with derived operators turns that
into finitely many equations in K.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from math import comb

from .action import AutoAction
from .diffop import DiffOperator, apply, binom_index, derived, index_leq, indices_upto
from .problem import ProblemSpec
from .tower import FieldElement, partial_table


class HigherClassification(str, enum.Enum):
    IDENTITY_SHORTCUT = "IdentityShortcut"
    PRODUCT_PARTICULAR = "ProductParticular"
    INFEASIBLE = "Infeasible"
    CONSTRAINTS_ONLY = "ConstraintsOnly"


@dataclass
class ProductGenerator:
    factors: list   # [(AutoAction, DiffOperator)]

    @property
    def p(self):
        return len(self.factors)

    @classmethod
    def untwisted(cls, operators):
        return cls([(AutoAction.identity(D.tower), D) for D in operators])

    def permuted(self, order):
        return ProductGenerator([self.factors[i] for i in order])


def _slot_splits(spec: ProblemSpec):
    """Number l of alpha slots (the first l) for each equation the mode asks for."""
    p = spec.p
    if spec.mode == "alpha":
        return [p]
    if spec.mode == "beta":
        return [0]
    return list(range(p, -1, -1))


def _slot_params(spec, l):
    return [spec.alpha if j < l else spec.beta for j in range(spec.p)]


def identity_shortcut_p(spec: ProblemSpec):
    """(c~_p, f = x^p / c~_p) when all pure and binomially weighted mixed sums agree."""
    p = spec.p
    vals = []
    for l in _slot_splits(spec):
        w = comb(p, l)
        acc = spec.tower.zero()
        for i in range(spec.n):
            term = spec.a[i]
            if l:
                term = term * spec.alpha[i] ** l
            if p - l:
                term = term * spec.beta[i] ** (p - l)
            acc = acc + term
        vals.append(acc * w)
    c = vals[0]
    if c.is_zero() or any(v != c for v in vals[1:]):
        return None
    one = DiffOperator.identity(spec.tower)
    ops = [one.scale(c.inv())] + [one] * (p - 1)
    return c, ProductGenerator.untwisted(ops)


# -- k = 1 conditions ------------------------------------------------------------


@dataclass
class ProductConditions:
    """Data conditions S(j) = 0 for j < J and the main equation prod c'_J * S(J) = c~."""

    side: str
    factor_bounds: tuple
    data: list            # [(j tuple, value)]
    main_sum: FieldElement
    feasible: bool

    def failing(self):
        return [(j, v) for j, v in self.data if not v.is_zero()]

    def constraint(self, c_tilde=None) -> FieldElement | None:
        """Value prod_l c'_{J_l} must take (c~ = 1 unless given)."""
        if self.main_sum.is_zero():
            return None
        c = c_tilde if c_tilde is not None else self.main_sum.tower.one()
        return c / self.main_sum

    def describe(self):
        from .expr import format_element

        names = "*".join(f"c'_{l + 1}{J}" for l, J in enumerate(self.factor_bounds))
        if not self.feasible:
            return f"{names}: infeasible"
        return f"{names} = c~/({format_element(self.main_sum)})"


def product_sum(spec, params, orders):
    """sum_i a_i * prod_l d^{orders_l}(param_i) for k = 1."""
    acc = spec.tower.zero()
    top = max(orders)
    for a, x in zip(spec.a, params):
        table = partial_table(x, (top,))
        term = a
        for o in orders:
            term = term * table[(o,)]
        acc = acc + term
    return acc


def build_product_conditions_deg1(spec: ProblemSpec, factor_bounds=None, side="alpha") -> ProductConditions:
    if spec.tower.k != 1:
        raise ValueError("product conditions in closed form need one transcendental variable")
    J = tuple(factor_bounds if factor_bounds is not None else spec.factor_bounds)
    if len(J) != spec.p:
        raise ValueError(f"need {spec.p} factor bounds")
    params = spec.params(side)
    data = []
    for j in itertools.product(*(range(b + 1) for b in J)):
        if j != J:
            data.append((j, product_sum(spec, params, j)))
    main = product_sum(spec, params, J)
    feasible = all(v.is_zero() for _, v in data) and not main.is_zero()
    return ProductConditions(side, J, data, main, feasible)


# -- bilinear systems for p = 2 ----------------------------------------------------


@dataclass
class BilinearEquation:
    """sum over (j1, j2) of coeff * x_{j1} * y_{j2} = rhs * c~ (x: factor 1, y: factor 2)."""

    label: tuple          # (kind, order, m1, m2)
    coeffs: dict          # (j1, j2) -> FieldElement
    rhs: int              # 1 on the c~ rows, 0 elsewhere

    def evaluate(self, D1: DiffOperator, D2: DiffOperator) -> FieldElement:
        acc = D1.tower.zero()
        for (j1, j2), c in self.coeffs.items():
            acc = acc + c * D1.coeff(j1) * D2.coeff(j2)
        return acc


@dataclass
class BilinearSystem:
    bounds: tuple
    equations: list = field(default_factory=list)

    def residuals(self, D1, D2, c_tilde):
        """Nonzero residuals for an assignment of both coefficient families."""
        out = []
        for eq in self.equations:
            r = eq.evaluate(D1, D2) - (c_tilde * eq.rhs if eq.rhs else D1.tower.zero())
            if not r.is_zero():
                out.append((eq.label, r))
        return out


def _pair_sums(spec, p1, p2, bounds, weight):
    """(r1, r2) -> weight * sum_i a_i d^r1(p1_i) d^r2(p2_i)."""
    tables = [(partial_table(x, bounds[0]), partial_table(y, bounds[1])) for x, y in zip(p1, p2)]
    out = {}
    for r1 in indices_upto(bounds[0]):
        for r2 in indices_upto(bounds[1]):
            acc = spec.tower.zero()
            for a, (tx, ty) in zip(spec.a, tables):
                if not tx[r1].is_zero() and not ty[r2].is_zero():
                    acc = acc + a * tx[r1] * ty[r2]
            out[(r1, r2)] = acc * weight
    return out


def build_mixed_system_p2(spec: ProblemSpec, bounds) -> BilinearSystem:
    """All expansion-coefficient equations for D1(x1) * D2(x2), untwisted factors.

    ``bounds`` is (J1, J2), one multi-index per factor. Each slot split
    (alpha/alpha, beta/beta, alpha/beta with weight 2) contributes rows for
    both orders of the factors.
    """
    if spec.p != 2:
        raise ValueError("bilinear systems are built for p = 2")
    B1, B2 = (tuple(b) for b in bounds)
    system = BilinearSystem((B1, B2))
    fb = {0: B1, 1: B2}
    for l in _slot_splits(spec):
        params = _slot_params(spec, l)
        w = comb(2, l)
        kind = {2: "alpha", 0: "beta"}.get(l, "mixed")
        for order in ((0, 1), (1, 0)):
            sb = (fb[order[0]], fb[order[1]])
            sums = _pair_sums(spec, params[0], params[1], sb, w)
            for m1 in indices_upto(sb[0]):
                for m2 in indices_upto(sb[1]):
                    coeffs = {}
                    for j1 in indices_upto(sb[0]):
                        if not index_leq(m1, j1):
                            continue
                        for j2 in indices_upto(sb[1]):
                            if not index_leq(m2, j2):
                                continue
                            r = (tuple(a - b for a, b in zip(j1, m1)), tuple(a - b for a, b in zip(j2, m2)))
                            s = sums[r]
                            if s.is_zero():
                                continue
                            val = s * (binom_index(j1, m1) * binom_index(j2, m2))
                            # key is (index in factor 1, index in factor 2)
                            key = (j1, j2) if order == (0, 1) else (j2, j1)
                            coeffs[key] = coeffs[key] + val if key in coeffs else val
                    rhs = 1 if not any(m1) and not any(m2) else 0
                    if coeffs or rhs:
                        system.equations.append(BilinearEquation((kind, order, m1, m2), coeffs, rhs))
    return system


# -- verification ----------------------------------------------------------------


def _expansion(spec, factors, params_per_slot, weight):
    """(m_1, ..., m_p) -> weight * sum_i a_i prod_j sigma_j((D_j)_{m_j}(param_ij))."""
    tower = spec.tower
    per_slot = []
    for (action, D), params in zip(factors, params_per_slot):
        vals = {}
        for m in indices_upto(D.bounds):
            Dm = derived(D, m)
            if Dm.is_zero():
                continue
            col = []
            for x in params:
                v = apply(Dm, x)
                if not action.is_identity():
                    v = action(v)
                col.append(v)
            vals[m] = col
        per_slot.append(vals)
    out = {}
    for combo in itertools.product(*(list(v.items()) for v in per_slot)):
        ms = tuple(m for m, _ in combo)
        acc = tower.zero()
        for i in range(spec.n):
            term = spec.a[i]
            for _, col in combo:
                term = term * col[i]
                if term.is_zero():
                    break
            acc = acc + term
        if not acc.is_zero():
            out[ms] = acc * weight
    return out


def verify_product_solution(g: ProductGenerator, spec: ProblemSpec, c_tilde=None):
    """(ok, c~_p): every permuted and split equation reduces to c~_p * x_1 ... x_p.

    With ``c_tilde`` given, the realized constant must also equal it.
    """
    p = g.p
    if p != spec.p:
        return False, None
    if c_tilde is not None and not isinstance(c_tilde, FieldElement):
        c_tilde = spec.tower.const(c_tilde)
    if any(D.is_zero() for _, D in g.factors):
        zero = spec.tower.zero()
        return (c_tilde is None or c_tilde.is_zero()), zero
    zero_idx = tuple((0,) * spec.tower.k for _ in range(p))
    expected = c_tilde
    c_tilde = None
    for order in itertools.permutations(range(p)):
        factors = [g.factors[i] for i in order]
        for l in _slot_splits(spec):
            exp = _expansion(spec, factors, _slot_params(spec, l), comb(p, l))
            c = exp.get(zero_idx, spec.tower.zero())
            if c_tilde is None:
                c_tilde = c
            if c != c_tilde:
                return False, None
            if any(ms != zero_idx for ms in exp):
                return False, None
    if expected is not None and c_tilde != expected:
        return False, c_tilde
    return True, c_tilde


def evaluate_product(g: ProductGenerator, slots) -> FieldElement:
    acc = slots[0].tower.one()
    for (action, D), z in zip(g.factors, slots):
        v = apply(D, z)
        if not action.is_identity():
            v = action(v)
        acc = acc * v
    return acc


def grid_check_product(g: ProductGenerator, spec: ProblemSpec, c_tilde, size=3) -> bool:
    """Direct check of sum_i a_i F(alpha_i x + beta_i y) = c~ sum_l x^l y^(p-l).

    F(alpha x + beta y) is expanded by multi-additivity into the sum over
    slot assignments; in a separated mode the other argument is 0.
    """
    tower = spec.tower
    p = spec.p
    monos = []
    for e in itertools.product(range(size), repeat=tower.k):
        x = tower.one()
        for j, v in enumerate(e):
            x = x * tower.var(j) ** v
        monos.append(x)
    if spec.mode == "full":
        pairs = [(x, y) for x in monos for y in monos]
        ls = range(p + 1)
    elif spec.mode == "alpha":
        pairs = [(x, None) for x in monos]
        ls = [p]
    else:
        pairs = [(None, y) for y in monos]
        ls = [0]
    for x, y in pairs:
        lhs = tower.zero()
        for i in range(spec.n):
            for S in itertools.product((True, False), repeat=p):
                l = sum(S)
                if l not in ls:
                    continue
                slots = [spec.alpha[i] * x if s else spec.beta[i] * y for s in S]
                lhs = lhs + spec.a[i] * evaluate_product(g, slots)
        rhs = tower.zero()
        for l in ls:
            term = tower.one()
            if l:
                term = term * x ** l
            if p - l:
                term = term * y ** (p - l)
            rhs = rhs + term
        if lhs != rhs * c_tilde:
            return False
    return True


# -- driver ---------------------------------------------------------------------


@dataclass
class HigherResult:
    classification: HigherClassification
    c_tilde: FieldElement | None
    generator: ProductGenerator | None
    conditions: list = field(default_factory=list)     # ProductConditions per side (k = 1)
    system: BilinearSystem | None = None
    notes: list = field(default_factory=list)
    verified: bool = False


def solve_higher(spec: ProblemSpec, factor_bounds=None) -> HigherResult:
    """Identity shortcut, then (k = 1) the closed-form product conditions."""
    if spec.p < 2:
        raise ValueError("solve_higher handles p >= 2")
    J = tuple(factor_bounds if factor_bounds is not None else spec.factor_bounds)
    shortcut = identity_shortcut_p(spec)
    if shortcut is not None:
        c, g = shortcut
        ok, ct = verify_product_solution(g, spec)
        return HigherResult(HigherClassification.IDENTITY_SHORTCUT, c, g, verified=ok and ct == 1)

    if spec.p > 2:
        return HigherResult(HigherClassification.CONSTRAINTS_ONLY, None, None,
                            notes=["constructive solving is limited to p <= 2; verify candidates instead"])
    if spec.tower.k != 1:
        bounds = [(b,) * spec.tower.k for b in J]
        system = build_mixed_system_p2(spec, bounds)
        return HigherResult(HigherClassification.CONSTRAINTS_ONLY, None, None, system=system,
                            notes=["bilinear constraints emitted; not solved for several variables"])

    conds = [build_product_conditions_deg1(spec, J, side) for side, _ in spec.sides()]
    notes = []
    for c in conds:
        for j, v in c.failing():
            notes.append(f"{c.side} side: data condition at orders {j} fails")
        if c.main_sum.is_zero():
            notes.append(f"{c.side} side: main sum vanishes at factor bounds {J}")
    first = conds[0]
    if not first.feasible:
        return HigherResult(HigherClassification.INFEASIBLE, None, None, conds, notes=notes)
    tower = spec.tower
    lead = first.constraint()
    ops = [DiffOperator(tower, (J[0],), {(J[0],): lead})]
    ops += [DiffOperator(tower, (b,), {(b,): 1}) for b in J[1:]]
    g = ProductGenerator.untwisted(ops)
    ok, c = verify_product_solution(g, spec)
    if not ok:
        notes.append("witness built from the first side fails the remaining equations")
        return HigherResult(HigherClassification.INFEASIBLE, None, None, conds, notes=notes)
    verified = grid_check_product(g, spec, c)
    return HigherResult(HigherClassification.PRODUCT_PARTICULAR, c, g, conds, notes=notes, verified=verified)
