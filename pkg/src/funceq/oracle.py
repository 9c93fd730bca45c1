"""Independent check of candidate solutions by evaluation on monomial grids.

For g(x) = sum_i w_i * D(p_i * x) we have g(x) = sum_m lambda_m d^m(x) for
some lambda_m in K. Evaluating at x = t^e and dividing by x turns this into
a falling-factorial Vandermonde system in e with constant unknowns
mu_m = lambda_m * t^(-m). Only field arithmetic is shared with the solver;
nothing here uses derived operators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import AutomorphismError
from .tower import FieldElement, partial_table


def falling(e: int, m: int) -> int:
    out = 1
    for i in range(m):
        out *= e - i
    return out


def _invert_rational(V):
    n = len(V)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(V)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        assert p is not None, "singular falling-factorial grid"
        A[c], A[p] = A[p], A[c]
        pv = A[c][c]
        A[c] = [v / pv for v in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return [row[n:] for row in A]


@dataclass
class ResidualProfile:
    side: str
    lambdas: dict   # multi-index -> FieldElement

    def value(self, m):
        m = tuple(m)
        if m in self.lambdas:
            return self.lambdas[m]
        return next(iter(self.lambdas.values())).tower.zero()

    def is_solution(self, c_tilde) -> bool:
        zero_index = (0,) * len(next(iter(self.lambdas)))
        for m, lam in self.lambdas.items():
            target = c_tilde if m == zero_index else 0
            if not (lam - target).is_zero():
                return False
        return True


def _weights(spec, action):
    if action is None or action.is_identity():
        return list(spec.a)
    inv = action.inverse()
    if inv is None:
        raise AutomorphismError("candidate automorphism has no symbolic inverse on L")
    return [inv(a) for a in spec.a]


def _operator_value(D, z: FieldElement) -> FieldElement:
    table = partial_table(z, D.bounds)
    acc = z.tower.zero()
    for idx, c in D.coeffs.items():
        acc = acc + c * table[idx]
    return acc


def residual_profile(D, spec, side="alpha", action=None, extra=0, base=None) -> ResidualProfile:
    """lambda_m for the candidate sigma o D on one side of the separated equation.

    The grid uses exponents base_j .. base_j + J_j + extra per variable with
    base_j = J_j + 1 unless overridden; ``extra`` > 0 enlarges the grid and
    the recovered index range together.
    """
    tower = spec.tower
    k = tower.k
    J = D.bounds
    sizes = [J[j] + 1 + extra for j in range(k)]
    bases = list(base) if base is not None else [J[j] + 1 for j in range(k)]
    weights = _weights(spec, action)
    params = spec.params(side)
    tvars = [tower.var(j) for j in range(k)]

    h = {}
    for offs in itertools.product(*(range(s) for s in sizes)):
        x = tower.one()
        for j, o in enumerate(offs):
            x = x * tvars[j] ** (bases[j] + o)
        g = tower.zero()
        for w, prm in zip(weights, params):
            if w.is_zero():
                continue
            g = g + w * _operator_value(D, prm * x)
        h[offs] = g / x

    # undo the falling-factorial Vandermonde along each axis in turn
    for j in range(k):
        Vinv = _invert_rational([[falling(bases[j] + a, b) for b in range(sizes[j])] for a in range(sizes[j])])
        new = {}
        for idx in h:
            acc = tower.zero()
            for a in range(sizes[j]):
                coeff = Vinv[idx[j]][a]
                if coeff:
                    src = idx[:j] + (a,) + idx[j + 1:]
                    acc = acc + h[src] * coeff
            new[idx] = acc
        h = new

    lambdas = {}
    for m, mu in h.items():
        lam = mu
        for j, e in enumerate(m):
            if e:
                lam = lam * tvars[j] ** e
        lambdas[m] = lam
    return ResidualProfile(side, lambdas)


def evaluate_solution(terms, z: FieldElement) -> FieldElement:
    """f(z) for f = sum over (action, D) of action(D(z))."""
    acc = z.tower.zero()
    for action, D in terms:
        val = _operator_value(D, z)
        if action is not None and not action.is_identity():
            val = action(val)
        acc = acc + val
    return acc


def grid_check_full(terms, spec, c_tilde=1, size=3) -> bool:
    """Exact residuals of sum_i a_i f(alpha_i x + beta_i y) - c~(x + y) on monomial pairs.

    In a separated mode only the chosen side is evaluated (the other
    argument is set to 0).
    """
    tower = spec.tower
    k = tower.k
    exps = list(itertools.product(range(size), repeat=k))
    monos = []
    for e in exps:
        x = tower.one()
        for j, v in enumerate(e):
            x = x * tower.var(j) ** v
        monos.append(x)
    zero = tower.zero()
    if spec.mode == "full":
        pairs = [(x, y) for x in monos for y in monos]
    elif spec.mode == "alpha":
        pairs = [(x, zero) for x in monos]
    else:
        pairs = [(zero, y) for y in monos]
    betas = spec.beta if spec.beta is not None else (zero,) * spec.n
    for x, y in pairs:
        lhs = zero
        for a, al, be in zip(spec.a, spec.alpha, betas):
            lhs = lhs + a * evaluate_solution(terms, al * x + be * y)
        if not (lhs - (x + y) * c_tilde).is_zero():
            return False
    return True
