"""Acceptance checks, one per criterion, each with a 5 s budget.

Run under pytest (a PASS/FAIL line per criterion is added to the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import io
import itertools
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from funceq.action import AutoAction
from funceq.additive import Classification, build_system, data_sums, row_sums, solve_additive
from funceq.automorphism import search_generators
from funceq.cli import RunConfig, run
from funceq.diffop import DiffOperator, apply, derived, indices_upto, leibniz_product
from funceq.errors import InseparableExtensionError, ReducibleMinpolyError
from funceq.expr import parse_expression
from funceq.higher import (ProductGenerator, build_product_conditions_deg1, grid_check_product,
                           product_sum, verify_product_solution)
from funceq.linsolve import solve_linear
from funceq.loader import load_problem
from funceq.oracle import residual_profile
from funceq.poly import MultiPoly
from funceq.problem import ProblemSpec
from funceq.ratfunc import RatFunc
from funceq.report import emit_higher_report, emit_report, format_operator, parse_report
from funceq.tower import Tower, partial

from strategies import (Q_T, Q_T1T2, SQRT_2VAR, SQRT_T, CBRT_T, rand_element, rand_monomial_element,
                        rand_nonzero_element, rand_poly, rand_spec, rng_for)

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"
BUDGET = 5.0


def E(src, tower=Q_T):
    return parse_expression(src, tower)


# -- 1 -------------------------------------------------------------------------


def criterion_1():
    spec = load_problem(PROBLEMS / "example1.toml").spec
    sums = data_sums(spec.a, spec.alpha, (2,))
    assert sums[(0,)].is_zero() and sums[(1,)].is_zero()
    assert sums[(2,)] == E("4*t^2")

    space = solve_additive(spec, degree_cap=1)
    assert space.classification is Classification.OPERATOR_PARTICULAR
    assert space.particular == DiffOperator(Q_T, (2,), {(2,): E("1/(4*t^2)")})
    assert [format_operator(K) for K in space.kernel] == ["1", "d"]

    gens, _, _ = search_generators(spec, (2,), degree_cap=1)
    assert [g.action.describe() for g in gens] == ["t -> t", "t -> -t"]
    assert [format_operator(K) for K in gens[0].kernel] == ["1", "d"]
    assert [format_operator(K) for K in gens[1].kernel] == ["1"]
    inv = gens[1].action.inverse()
    twisted = data_sums([inv(a) for a in spec.a], spec.alpha, (1,))
    assert twisted[(1,)] == E("4*t^3")


# -- 2 -------------------------------------------------------------------------


def _family_22(c10, c01, c11, c00=0):
    T = Q_T1T2
    k = {(0, 0): c00, (1, 0): c10, (0, 1): c01, (2, 0): -c11 / 2, (1, 1): c11, (0, 2): -c11 / 2}
    return DiffOperator(T, (2, 2), {i: T.const(v) for i, v in k.items()})


def _family_33(c10, c01, c11, c12, c00=0):
    T = Q_T1T2
    r = E("(t1 + t2)/(t1 - t2)^2", T)
    k = {(0, 0): T.const(c00), (1, 0): T.const(c10), (0, 1): T.const(c01),
         (2, 0): T.const(-c11 / 2) + c12 * r, (1, 1): T.const(c11),
         (0, 2): T.const(-c11 / 2) - c12 * r,
         (3, 0): T.const(c12 / 3), (1, 2): T.const(c12), (2, 1): T.const(-c12),
         (0, 3): T.const(-c12 / 3)}
    return DiffOperator(T, (3, 3), k)


def _homogeneous_rank(spec, J):
    """Dimension of the solutions of every row with m != 0."""
    system = build_system(spec, J)
    rows = [row for (m, _), row in zip(system.rows, system.matrix) if any(m)]
    zero = spec.tower.zero()
    _, kernel, _ = solve_linear(rows, [zero] * len(rows), spec.tower)
    return len(kernel)


def criterion_2():
    from fractions import Fraction as F

    T = Q_T1T2
    spec = load_problem(PROBLEMS / "example2.toml").spec
    sums = data_sums(spec.a, spec.alpha, (3, 3))
    d = E("-(t1 - t2)^2", T)
    expect = {(0, 0): T.zero(), (1, 0): d, (0, 1): d, (1, 1): T.zero(),
              (2, 0): E("2*t2", T), (0, 2): E("2*t1", T)}
    for idx, val in sums.items():
        assert val == expect.get(idx, T.zero()), idx

    unit = [F(1), F(0), F(0), F(0)]
    cases = {
        (1, 1): (lambda c10, c01: DiffOperator(T, (1, 1), {(1, 0): T.const(c10), (0, 1): T.const(c01)}),
                 lambda c10, c01: -(c10 + c01) * E("(t1 - t2)^2", T), 2),
        (2, 2): (_family_22,
                 lambda c10, c01, c11: -(c10 + c01) * E("(t1 - t2)^2", T) - c11 * E("t1 + t2", T), 3),
        (3, 3): (_family_33,
                 lambda c10, c01, c11, c12: (-(c10 + c01) * E("(t1 - t2)^2", T) - c11 * E("t1 + t2", T)
                                             - 2 * c12 * E("(t1 + t2)/(t1 - t2)", T)), 4),
    }
    for J, (family, c_tilde, nparams) in cases.items():
        for i in range(nparams):
            params = [F(int(j == i)) for j in range(nparams)]
            D = family(*params)
            for m in indices_upto(J):
                lam = row_sums(D, spec.a, spec.alpha, m)
                if any(m):
                    assert lam.is_zero(), (J, i, m)
                else:
                    assert lam == c_tilde(*params), (J, i)
        # the family plus the constant operator spans all solutions of the m != 0 rows
        assert _homogeneous_rank(spec, J) == nparams + 1, J

    space = solve_additive(spec, bounds=(3, 3), automorphisms=False)
    assert space.particular is not None
    for K in space.kernel + [space.particular]:
        c = K.coeff
        assert c((2, 1)) == -3 * c((3, 0))
        assert c((1, 2)) == -c((2, 1))
        assert c((1, 2)) == -3 * c((0, 3))
        for idx in [(3, 3), (3, 2), (2, 3), (3, 1), (1, 3), (2, 2)]:
            assert c(idx).is_zero()


# -- 3 -------------------------------------------------------------------------


def criterion_3():
    spec = load_problem(PROBLEMS / "product_p2.toml").spec
    assert product_sum(spec, spec.alpha, (0, 0)).is_zero()
    assert product_sum(spec, spec.alpha, (0, 1)).is_zero()
    assert product_sum(spec, spec.alpha, (1, 1)) == E("4*t^6")
    cond = build_product_conditions_deg1(spec, (1, 1))
    assert cond.feasible
    assert cond.constraint() == E("1/(4*t^6)")

    one = Q_T.one()

    def gen(c1, c2, lower=(0, 0), extra=None, twist=None):
        D1 = {(1,): c1, (0,): Q_T.const(lower[0])}
        if extra is not None:
            D1[(2,)] = extra
        f1 = DiffOperator(Q_T, (2,) if extra is not None else (1,), D1)
        f2 = DiffOperator(Q_T, (1,), {(1,): c2, (0,): Q_T.const(lower[1])})
        a1 = twist or AutoAction.identity(Q_T)
        return ProductGenerator([(a1, f1), (AutoAction.identity(Q_T), f2)])

    witness = gen(E("1/(4*t^6)"), one)
    assert verify_product_solution(witness, spec, 1) == (True, one)
    assert verify_product_solution(witness.permuted((1, 0)), spec, 1)[0]
    assert verify_product_solution(gen(E("1/(2*t^3)"), E("1/(2*t^3)"), lower=(5, -2)), spec, 1)[0]
    assert grid_check_product(witness, spec, 1)
    perturbed = [
        gen(E("1/(4*t^6) + 1"), one),
        gen(E("1/(4*t^6)") * 2, one),
        gen(E("1/(4*t^6)"), E("1 + t")),
        gen(E("1/(4*t^6)"), one, extra=one),
        gen(E("1/(4*t^6)"), one, twist=AutoAction(Q_T, {"t": E("-t")})),
    ]
    for g in perturbed:
        assert not verify_product_solution(g, spec, 1)[0]
        assert not grid_check_product(g, spec, 1)


# -- 4 -------------------------------------------------------------------------


def _shortcut_spec(rng):
    tower = rng.choice([Q_T, Q_T1T2, SQRT_T])
    mode = rng.choice(["alpha", "beta", "full"])
    while True:
        n = rng.randint(1, 4)
        a = [rand_nonzero_element(rng, tower, 1, den=False) for _ in range(n)]
        alpha = [rand_monomial_element(rng, tower) for _ in range(n)]
        beta = [rand_monomial_element(rng, tower) for _ in range(n)]
        sa = sum((x * y for x, y in zip(a, alpha)), tower.zero())
        sb = sum((x * y for x, y in zip(a[:-1], beta[:-1])), tower.zero())
        beta[-1] = (sa - sb) / a[-1]
        if not sa.is_zero() and not beta[-1].is_zero():
            return ProblemSpec(tower, a, alpha, beta, bounds=(1,) * tower.k, mode=mode), sa


def criterion_4():
    rng = rng_for(4)
    for _ in range(100):
        spec, c = _shortcut_spec(rng)
        space = solve_additive(spec, automorphisms=False)
        assert space.classification is Classification.IDENTITY_SHORTCUT
        assert space.c_tilde == c
        assert space.particular == DiffOperator(spec.tower, (0,) * spec.tower.k, {(0,) * spec.tower.k: c.inv()})
        ident = DiffOperator.identity(spec.tower, bounds=(1,) * spec.tower.k)
        for side, _ in spec.sides():
            prof = residual_profile(ident, spec, side)
            assert prof.is_solution(c)


# -- 5 -------------------------------------------------------------------------


def criterion_5():
    rng = rng_for(5)
    seen_balanced = seen_unbalanced = 0
    for i in range(60):
        tower = [Q_T, Q_T, Q_T1T2, SQRT_T][i % 4]
        J = (rng.randint(1, 2),) if tower.k == 1 else (1, 1)
        spec = rand_spec(rng, tower, mode="alpha", balance="alpha" if i % 2 else None, bounds=J)
        s = sum((x * y for x, y in zip(spec.a, spec.alpha)), tower.zero())
        space = solve_additive(spec, automorphisms=False)
        ops = list(space.kernel) + ([space.particular] if space.particular is not None else [])
        if space.particular is not None and space.particular.degree >= 1:
            assert s.is_zero()
            seen_balanced += 1
        if not s.is_zero():
            seen_unbalanced += 1
            for D in ops:
                assert all(not any(m) for m in D.coeffs), D
    assert seen_balanced > 5 and seen_unbalanced > 5


# -- 6 -------------------------------------------------------------------------


def criterion_6():
    rng = rng_for(6)
    for i in range(200):
        tower = [Q_T, Q_T1T2, SQRT_T][i % 3]
        J = tuple(rng.randint(0, 3 if tower.k == 1 else 2) for _ in range(tower.k))
        if i % 25 == 0 and tower.k == 2:
            J = (3, 3)
        spec = rand_spec(rng, tower, n=rng.randint(1, 3), bounds=J)
        coeffs = {m: rand_element(rng, tower, 1, den=False) for m in indices_upto(J)
                  if rng.random() < 0.6}
        D = DiffOperator(tower, J, coeffs)
        prof = residual_profile(D, spec)
        for m in indices_upto(J):
            direct = tower.zero()
            Dm = derived(D, m)
            for a, x in zip(spec.a, spec.alpha):
                direct = direct + a * apply(Dm, x)
            assert prof.value(m) == direct
        if i % 4 == 0:
            bigger = residual_profile(D, spec, extra=1)
            for m, lam in bigger.lambdas.items():
                assert lam == prof.value(m)


# -- 7 -------------------------------------------------------------------------


def _field_axioms(rng, n):
    towers = [Q_T, Q_T1T2, SQRT_T, SQRT_2VAR, CBRT_T]
    for i in range(n):
        T = towers[i % len(towers)]
        a, b = rand_element(rng, T, 1), rand_element(rng, T, 1)
        c = rand_nonzero_element(rng, T, 1)
        assert a + b == b + a and a * b == b * a
        assert (a + b) * c == a * c + b * c
        assert a - a == T.zero() and a + T.zero() == a and a * T.one() == a
        assert (a * c) / c == a and c * c.inv() == T.one()


def _leibniz(rng, n):
    towers = [Q_T, Q_T1T2, SQRT_T, SQRT_2VAR, CBRT_T]
    for i in range(n):
        T = towers[i % len(towers)]
        x, y = rand_element(rng, T, 2), rand_element(rng, T, 2)
        j = rng.randrange(T.k)
        assert partial(j, x * y) == partial(j, x) * y + x * partial(j, y)


def _commutation(rng, n):
    towers = [Q_T1T2, SQRT_2VAR]
    for i in range(n):
        T = towers[i % 2]
        x = rand_element(rng, T, 2)
        assert partial(0, partial(1, x)) == partial(1, partial(0, x))


def _product_expansion(rng, n):
    towers = [Q_T, Q_T1T2, SQRT_T]
    for i in range(n):
        T = towers[i % 3]
        J = tuple(rng.randint(0, 2 if T.k == 1 else 1) for _ in range(T.k))
        D = DiffOperator(T, J, {m: rand_element(rng, T, 1, den=False) for m in indices_upto(J)})
        x, y = rand_element(rng, T, 1), rand_element(rng, T, 1)
        assert leibniz_product(D, x, y) == apply(D, x * y)


def _implicit(rng, n):
    u = SQRT_T.gen()
    assert partial(0, u * u) == partial(0, SQRT_T.var(0))
    done = 0
    while done < n:
        k = rng.randint(1, 2)
        deg = rng.randint(2, 3)
        names = ("t",) if k == 1 else ("t1", "t2")
        minpoly = tuple(RatFunc(rand_poly(rng, k, 1, 2)) for _ in range(deg))
        T = Tower(names, "u", minpoly)
        g = T.gen()
        try:
            j = rng.randrange(k)
            du = partial(j, g)
        except (InseparableExtensionError, ReducibleMinpolyError):
            continue
        # u^deg reduces to -sum r_l u^l; its derivative must match the chain rule
        assert partial(j, g ** deg) == deg * g ** (deg - 1) * du
        x = rand_element(rng, T, 1, den=False)
        assert partial(j, x * x) == 2 * x * partial(j, x)
        done += 1


SUITES = [_field_axioms, _leibniz, _commutation, _product_expansion, _implicit]


def criterion_7():
    rng = rng_for(7)
    for suite in SUITES:
        suite(rng, 500)


# -- 8 -------------------------------------------------------------------------


def _cli(args):
    out, err = io.StringIO(), io.StringIO()
    code = run(RunConfig(*args[:2], **args[2]), out, err)
    return code, out.getvalue()


def criterion_8():
    for name in ["example1.toml", "example2.toml", "sqrt_t.toml", "shortcut_full.toml"]:
        spec = load_problem(PROBLEMS / name).spec
        space = solve_additive(spec)
        doc = parse_report(emit_report(space, spec, "machine"))
        assert doc["tower"] == spec.tower
        if space.particular is not None:
            assert doc["particular"] == space.particular
            assert doc["c_tilde"] == space.c_tilde
        assert doc["kernel"] == sorted(space.kernel, key=lambda K: max(K.coeffs) if K.coeffs else ())
        assert [a["action"] for a in doc["automorphisms"]] == [g.action for g in space.generators]
    from funceq.higher import solve_higher

    spec = load_problem(PROBLEMS / "product_p2.toml").spec
    res = solve_higher(spec)
    doc = parse_report(emit_higher_report(res, spec, "machine"))
    assert [D for _, D in doc["generator"]] == [D for _, D in res.generator.factors]

    for fmt in ("text", "machine"):
        runs = {_cli(("solve", str(PROBLEMS / "example1.toml"), {"format": fmt})) for _ in range(3)}
        assert len(runs) == 1
    outputs = set()
    for seed in ("0", "12345"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run([sys.executable, "-m", "funceq.cli", "solve", "--format", "machine",
                               "--input", str(PROBLEMS / "example1.toml")],
                              capture_output=True, env=env)
        assert proc.returncode == 0
        outputs.add(proc.stdout)
    outputs.add(_cli(("solve", str(PROBLEMS / "example1.toml"), {"format": "machine"}))[1].encode())
    assert len(outputs) == 1


CRITERIA = [
    (1, "example1.toml: particular, kernel, automorphisms", criterion_1),
    (2, "example2.toml: coefficient table and J = 1, 2, 3 relations", criterion_2),
    (3, "p = 2 product conditions, witness and perturbations", criterion_3),
    (4, "identity shortcut on 100 random specs", criterion_4),
    (5, "dichotomy on random specs", criterion_5),
    (6, "oracle equivalence on 200 random pairs", criterion_6),
    (7, "algebra property suites, 500 cases each", criterion_7),
    (8, "report round trip and determinism", criterion_8),
]

RESULTS = {}


def _run(number, title, check):
    start = time.perf_counter()
    error = None
    try:
        check()
    except AssertionError as exc:
        error = exc
    elapsed = time.perf_counter() - start
    if error is None and elapsed >= BUDGET:
        error = AssertionError(f"took {elapsed:.2f} s, budget {BUDGET} s")
    RESULTS[number] = (title, error is None, elapsed)
    return error


@pytest.mark.parametrize("number, title, check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    error = _run(number, title, check)
    if error is not None:
        raise error


def summary_lines():
    lines = []
    for number, (title, ok, elapsed) in sorted(RESULTS.items()):
        lines.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.2f} s)")
    return lines


if __name__ == "__main__":
    for number, title, check in CRITERIA:
        err = _run(number, title, check)
        if err is not None:
            print(f"  criterion {number}: {err!r}")
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for _, ok, _ in RESULTS.values()) else 1)
