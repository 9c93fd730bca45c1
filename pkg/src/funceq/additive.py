"""Additive (p = 1) solutions: identity shortcut, operator systems, classification."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

from .diffop import DiffOperator, binom_index, index_leq, indices_upto
from .errors import OracleMismatch
from .linsolve import solve_linear
from .problem import ProblemSpec
from .tower import FieldElement, partial_table

log = logging.getLogger(__name__)


class Classification(str, enum.Enum):
    IDENTITY_SHORTCUT = "IdentityShortcut"
    OPERATOR_PARTICULAR = "OperatorParticular"
    HOMOGENEOUS_ONLY = "HomogeneousOnly"
    EMPTY = "Empty"


@dataclass
class RegularityReport:
    skipped: bool
    zero_sums: list = field(default_factory=list)        # i with alpha_i + beta_i = 0
    zero_determinants: list = field(default_factory=list)  # (i, j) with alpha_i beta_j - alpha_j beta_i = 0

    @property
    def ok(self):
        return self.skipped or not (self.zero_sums or self.zero_determinants)

    def warnings(self):
        out = [f"alpha_{i + 1} + beta_{i + 1} = 0" for i in self.zero_sums]
        out += [f"determinant of rows {i + 1}, {j + 1} vanishes" for i, j in self.zero_determinants]
        return out


def check_regularity(spec: ProblemSpec) -> RegularityReport:
    """Advisory regularity check; the solver runs regardless."""
    if spec.mode != "full" or spec.beta is None:
        return RegularityReport(skipped=True)
    rep = RegularityReport(skipped=False)
    al, be = spec.alpha, spec.beta
    for i in range(spec.n):
        if (al[i] + be[i]).is_zero():
            rep.zero_sums.append(i)
        for j in range(i + 1, spec.n):
            if (al[i] * be[j] - al[j] * be[i]).is_zero():
                rep.zero_determinants.append((i, j))
    for w in rep.warnings():
        log.warning("regularity condition fails: %s", w)
    return rep


def weighted_sum(weights, params) -> FieldElement:
    acc = weights[0].tower.zero()
    for w, x in zip(weights, params):
        acc = acc + w * x
    return acc


def identity_shortcut(spec: ProblemSpec):
    """(c~, identity operator) when every side sum equals the same c~ != 0."""
    sums = [weighted_sum(spec.a, params) for _, params in spec.sides()]
    c = sums[0]
    if c.is_zero() or any(s != c for s in sums[1:]):
        return None
    return c, DiffOperator.identity(spec.tower)


def data_sums(weights, params, bounds) -> dict:
    """r -> sum_i w_i * d^r(param_i) for every r <= bounds."""
    tower = params[0].tower
    out = {r: tower.zero() for r in indices_upto(bounds)}
    for w, x in zip(weights, params):
        if w.is_zero():
            continue
        table = partial_table(x, bounds)
        for r in out:
            if not table[r].is_zero():
                out[r] = out[r] + w * table[r]
    return out


@dataclass
class LinearSystem:
    """Rows (m, side), columns c'_j; the m = 0 rows carry c~ on the right."""

    columns: list
    rows: list
    matrix: list
    rhs: list   # coefficient of c~ per row (1 on m = 0 rows, 0 otherwise)
    bounds: tuple

    def rhs_values(self, c_tilde):
        return [r * c_tilde for r in self.rhs]


def build_system(spec: ProblemSpec, bounds=None, weights=None) -> LinearSystem:
    """Entry (m, j) = binom(j, m) * sum_i w_i d^(j-m)(param_i) for j >= m."""
    bounds = tuple(bounds if bounds is not None else spec.bounds)
    weights = list(weights if weights is not None else spec.a)
    tower = spec.tower
    cols = indices_upto(bounds)
    zero, one = tower.zero(), tower.one()
    rows, matrix, rhs = [], [], []
    for side, params in spec.sides():
        sums = data_sums(weights, params, bounds)
        for m in cols:
            row = []
            for j in cols:
                if index_leq(m, j):
                    r = tuple(a - b for a, b in zip(j, m))
                    row.append(sums[r] * binom_index(j, m) if not sums[r].is_zero() else zero)
                else:
                    row.append(zero)
            rows.append((m, side))
            matrix.append(row)
            rhs.append(one if not any(m) else zero)
    return LinearSystem(cols, rows, matrix, rhs, bounds)


@dataclass
class SystemSolution:
    particular: dict | None   # column -> value, with c~ = 1
    kernel: list              # list of column -> value dicts

    def particular_operator(self, tower, bounds):
        if self.particular is None:
            return None
        return DiffOperator(tower, bounds, self.particular)

    def kernel_operators(self, tower, bounds):
        return [DiffOperator(tower, bounds, v) for v in self.kernel]


def solve(system: LinearSystem, c_tilde=1) -> SystemSolution:
    if not system.matrix:
        return SystemSolution(None, [])
    tower = system.matrix[0][0].tower
    rhs = system.rhs_values(tower.const(c_tilde) if not isinstance(c_tilde, FieldElement) else c_tilde)
    part, kernel, _ = solve_linear(system.matrix, rhs, tower)
    cols = system.columns
    particular = dict(zip(cols, part)) if part is not None else None
    return SystemSolution(particular, [dict(zip(cols, v)) for v in kernel])


@dataclass
class SolutionSpace:
    """Particular solution (normalized to c = 1) plus homogeneous generators.

    ``c_tilde`` is the inhomogeneity realized by the underlying generator;
    ``particular`` already includes the factor 1/c~, so the solution of the
    equation with right-hand constant c is c * particular + homogeneous part.
    """

    classification: Classification
    c_tilde: FieldElement | None
    particular: DiffOperator | None
    kernel: list
    generators: list = field(default_factory=list)  # AutomorphismGenerator entries
    bounds: tuple = ()
    mode: str = "alpha"
    notes: list = field(default_factory=list)
    char_equations: list = field(default_factory=list)
    regularity: RegularityReport | None = None
    verified: bool = False


def row_sums(D: DiffOperator, weights, params, m) -> FieldElement:
    """sum_i w_i * D_m(param_i) via the derived operator."""
    from .diffop import apply, derived

    Dm = derived(D, m)
    acc = D.tower.zero()
    for w, x in zip(weights, params):
        if not w.is_zero():
            acc = acc + w * apply(Dm, x)
    return acc


def _recheck(space: SolutionSpace, spec: ProblemSpec):
    from .oracle import residual_profile

    for side, _ in spec.sides():
        if space.particular is not None:
            prof = residual_profile(space.particular, spec, side)
            if not prof.is_solution(1):
                raise OracleMismatch(f"particular solution fails the oracle on the {side} side")
        for K in space.kernel:
            if not residual_profile(K, spec, side).is_solution(0):
                raise OracleMismatch(f"kernel operator fails the oracle on the {side} side")
        for gen in space.generators:
            if gen.action.is_identity() and gen.kernel == space.kernel:
                continue
            for K in gen.kernel:
                if not residual_profile(K, spec, side, action=gen.action).is_solution(0):
                    raise OracleMismatch(f"generator {gen.action.describe()} fails the oracle")
    space.verified = True


def solve_additive(spec: ProblemSpec, *, bounds=None, automorphisms=True, degree_cap=1,
                   diagonal=False, candidates=(), verify=True) -> SolutionSpace:
    """Shortcut, then system, then automorphism search, then oracle recheck."""
    if spec.p != 1:
        raise ValueError("solve_additive handles p = 1 only")
    bounds = tuple(bounds if bounds is not None else spec.bounds)
    tower = spec.tower
    regularity = check_regularity(spec)
    notes = []
    if not regularity.ok:
        notes.extend(f"regularity warning: {w}" for w in regularity.warnings())

    system = build_system(spec, bounds)
    kernel = solve(system, 0).kernel
    kernel_ops = [DiffOperator(tower, bounds, v) for v in kernel]

    shortcut = identity_shortcut(spec)
    if shortcut is not None:
        c_tilde, ident = shortcut
        space = SolutionSpace(Classification.IDENTITY_SHORTCUT, c_tilde, ident.scale(c_tilde.inv()),
                              kernel_ops, bounds=bounds, mode=spec.mode, notes=notes, regularity=regularity)
    else:
        sol = solve(system, 1)
        if sol.particular is not None:
            space = SolutionSpace(Classification.OPERATOR_PARTICULAR, tower.one(),
                                  DiffOperator(tower, bounds, sol.particular), kernel_ops,
                                  bounds=bounds, mode=spec.mode, notes=notes, regularity=regularity)
        else:
            notes.append(f"no particular solution at bounds {bounds}")
            space = SolutionSpace(Classification.HOMOGENEOUS_ONLY, None, None, kernel_ops,
                                  bounds=bounds, mode=spec.mode, notes=notes, regularity=regularity)

    if automorphisms:
        from .automorphism import search_generators

        gens, eqs, anotes = search_generators(spec, bounds, degree_cap=degree_cap,
                                              diagonal=diagonal, candidates=candidates,
                                              identity_kernel=kernel_ops)
        space.generators = gens
        space.char_equations = eqs
        space.notes.extend(anotes)

    if space.classification is Classification.HOMOGENEOUS_ONLY:
        if not space.kernel and not space.generators:
            space.classification = Classification.EMPTY
    if verify:
        _recheck(space, spec)
    return space


def sweep(spec: ProblemSpec, max_bound: int, **kwargs):
    """Solve at uniform bounds J = 0..max_bound.

    Returns (first space with a particular solution or None, space at the cap).
    Kernels grow with J, so the last kernel is the cumulative one.
    """
    first = None
    last = None
    for J in range(max_bound + 1):
        b = (J,) * spec.tower.k
        last = solve_additive(spec, bounds=b, automorphisms=(J == max_bound), **kwargs)
        if first is None and last.particular is not None:
            first = last
    return first, last
