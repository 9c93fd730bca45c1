"""Command line: solve | automorphisms | verify | oracle-check.

Exit status: 0 when a solution exists (or a check passed), 2 when only the
homogeneous part is available or a check failed, 1 on input errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass

from .errors import FuncEqError, ProblemFileError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NONE = 2

log = logging.getLogger("funceq")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error [cli/usage]: {message}\n")


def _bounds(text):
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("bounds must be nonnegative")
    return vals


def build_parser():
    ap = _Parser(prog="funceq", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=("solve", "automorphisms", "verify", "oracle-check"))
    ap.add_argument("--input", required=True, metavar="PATH", help="problem file")
    ap.add_argument("--candidate", metavar="PATH", help="candidate solution file (verify, oracle-check)")
    ap.add_argument("--mode", choices=("alpha", "beta", "full"))
    ap.add_argument("--bounds", type=_bounds, metavar="J1,...,JK")
    ap.add_argument("--sweep-J", type=int, metavar="N", dest="sweep")
    ap.add_argument("--root-degree-cap", type=int, metavar="D", dest="degree_cap")
    ap.add_argument("--format", choices=("text", "machine"), default="text")
    ap.add_argument("--quiet", action="store_true", help="print nothing but errors")
    return ap


@dataclass
class RunConfig:
    command: str
    input: str
    candidate: str | None = None
    mode: str | None = None
    bounds: tuple | None = None
    sweep: int | None = None
    degree_cap: int | None = None
    format: str = "text"
    quiet: bool = False


def _load(cfg: RunConfig):
    from .loader import load_problem

    problem = load_problem(cfg.input)
    spec = problem.spec
    changes = {}
    if cfg.mode:
        changes["mode"] = cfg.mode
    if cfg.bounds is not None:
        if len(cfg.bounds) != spec.tower.k:
            raise ProblemFileError("--bounds", f"need {spec.tower.k} entries")
        changes["bounds"] = cfg.bounds
    if changes:
        spec = spec.replace(**changes)
    if cfg.sweep is not None and cfg.sweep < max(spec.bounds, default=0):
        raise ProblemFileError("--sweep-J", f"cap {cfg.sweep} is below the bounds {spec.bounds}")
    if cfg.degree_cap is not None:
        problem.degree_cap = cfg.degree_cap
    problem.spec = spec
    return problem


def _solve(problem, cfg, out):
    from .additive import Classification, SolutionSpace, solve_additive, sweep
    from .report import emit_higher_report, emit_report

    spec = problem.spec
    opts = dict(degree_cap=problem.degree_cap, diagonal=problem.diagonal, candidates=problem.candidates)
    if spec.p >= 2:
        from .higher import HigherClassification, solve_higher

        res = solve_higher(spec)
        out.append(emit_higher_report(res, spec, cfg.format))
        good = res.classification in (HigherClassification.IDENTITY_SHORTCUT,
                                      HigherClassification.PRODUCT_PARTICULAR)
        return EXIT_OK if good else EXIT_NONE
    if cfg.sweep is not None:
        first, last = sweep(spec, cfg.sweep, **opts)
        base = first or last
        space = SolutionSpace(base.classification, base.c_tilde, base.particular, last.kernel,
                              last.generators, base.bounds, spec.mode,
                              list(base.notes) + [f"sweep over J = 0..{cfg.sweep}; kernel and "
                                                  f"generators at J = {cfg.sweep}"],
                              last.char_equations, last.regularity, base.verified and last.verified)
    else:
        space = solve_additive(spec, **opts)
    out.append(emit_report(space, spec, cfg.format))
    if space.classification in (Classification.IDENTITY_SHORTCUT, Classification.OPERATOR_PARTICULAR):
        return EXIT_OK
    return EXIT_NONE


def _automorphisms(problem, cfg, out):
    from .automorphism import search_generators
    from .report import action_dict, char_line, dumps, format_operator, operator_dict, sorted_kernel

    spec = problem.spec
    gens, eqs, notes = search_generators(spec, spec.bounds, problem.degree_cap, problem.diagonal,
                                         problem.candidates)
    if cfg.format == "machine":
        out.append(dumps({
            "characteristic_equations": [{"side": e.side, "polynomial": e.format()} for e in eqs],
            "automorphisms": [{**action_dict(g.action),
                               "kernel": [operator_dict(K) for K in sorted_kernel(g.kernel)],
                               "skipped": g.skipped} for g in gens],
            "notes": notes,
        }))
    else:
        lines = [char_line(e) for e in eqs]
        lines.append(f"automorphism generators: {len(gens)}")
        for g in gens:
            lines.append(f"  [{g.action.provenance}] {g.action.describe()}")
            if g.skipped:
                lines.append(f"    {g.skipped}")
            for K in sorted_kernel(g.kernel):
                lines.append(f"    {format_operator(K)}")
        lines += [f"note: {n}" for n in notes]
        out.append("\n".join(lines) + "\n")
    return EXIT_OK if gens else EXIT_NONE


def _profiles(problem, terms):
    """Residual profiles per (term group, side); identity terms are summed."""
    from .oracle import residual_profile

    spec = problem.spec
    groups = {}
    for action, D in terms:
        groups[action] = groups[action] + D if action in groups else D
    out = []
    for action, D in groups.items():
        for side, _ in spec.sides():
            out.append((action, side, residual_profile(D, spec, side, action=action)))
    return out


def _verify(problem, cfg, out, profile_only=False):
    from .expr import format_element
    from .loader import load_candidate
    from .oracle import grid_check_full

    if not cfg.candidate:
        raise ProblemFileError("--candidate", "this command needs a candidate file")
    spec = problem.spec
    c_tilde, terms, kind = load_candidate(cfg.candidate, spec.tower)
    lines = []
    if kind == "factors":
        from .higher import ProductGenerator, grid_check_product, verify_product_solution

        g = ProductGenerator(terms)
        ok, realized = verify_product_solution(g, spec, c_tilde)
        if ok:
            ok = grid_check_product(g, spec, c_tilde)
        lines.append(f"realized c~: {format_element(realized) if realized is not None else 'none'}")
        lines.append(f"verdict: {'pass' if ok else 'fail'}")
        out.append("\n".join(lines) + "\n")
        return EXIT_OK if ok else EXIT_NONE

    ok = True
    for action, side, prof in _profiles(problem, terms):
        target = c_tilde if action.is_identity() else spec.tower.zero()
        good = prof.is_solution(target)
        ok = ok and good
        lines.append(f"[{action.describe()}] {side} side: {'ok' if good else 'residual'}")
        for m in sorted(prof.lambdas):
            lam = prof.lambdas[m]
            want = target if not any(m) else spec.tower.zero()
            if profile_only or lam != want:
                lines.append(f"  lambda{tuple(m)} = {format_element(lam)}")
    if not profile_only:
        if ok and all(a.invertible for a, _ in terms):
            ok = grid_check_full(terms, spec, c_tilde)
            lines.append(f"grid check: {'pass' if ok else 'fail'}")
        lines.append(f"verdict: {'pass' if ok else 'fail'}")
    out.append("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_NONE


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    logging.basicConfig(level=logging.ERROR if cfg.quiet else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=stderr)
    out = []
    try:
        problem = _load(cfg)
        if cfg.command == "solve":
            status = _solve(problem, cfg, out)
        elif cfg.command == "automorphisms":
            status = _automorphisms(problem, cfg, out)
        elif cfg.command == "verify":
            status = _verify(problem, cfg, out)
        else:
            status = _verify(problem, cfg, out, profile_only=True)
    except FuncEqError as exc:
        print(f"error [{exc.qualified()}]: {exc}", file=stderr)
        return EXIT_INPUT
    if not cfg.quiet:
        stdout.write("".join(out))
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(RunConfig(**vars(args)))


if __name__ == "__main__":
    sys.exit(main())
