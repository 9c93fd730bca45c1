"""Problem files and candidate-solution files (TOML with expression-valued leaves).

Problem file::

    [field]
    variables = ["t"]
    # optional algebraic generator u^m + r_{m-1} u^{m-1} + ... + r_0
    # [field.extension]
    # name = "u"
    # minpoly = ["-t", "0"]          # r_0, ..., r_{m-1}

    [equation]
    a = ["t^3", "-t^2", "-t", "1"]
    alpha = ["t", "t^2", "t^3", "t^4"]
    # beta = [...]                    # needed for mode "beta" or "full"
    p = 1
    mode = "alpha"
    bounds = [2]
    # factor_bounds = [1, 1]         # p >= 2 only

    [search]
    degree_cap = 1
    diagonal = false

    [[automorphisms]]                 # optional user candidates
    t = "-t"

Candidate file (for ``verify`` and ``oracle-check``)::

    c_tilde = "1"
    [[terms]]                         # p = 1: f = sum of sigma o D
    action = { t = "-t" }             # optional, identity by default
    bounds = [2]
    coefficients = { "2" = "1/(4*t^2)" }   # keys are "j1,j2,..."

For p >= 2 the file lists ``[[factors]]`` with the same keys, one per factor.
"""

from __future__ import annotations

import logging
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .action import AutoAction
from .diffop import DiffOperator
from .errors import ExprError, ProblemFileError
from .expr import parse_expression
from .problem import MODES, Problem, ProblemSpec
from .tower import Tower

log = logging.getLogger(__name__)


def _read(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemFileError("file", str(exc)) from exc
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ProblemFileError("file", f"not valid TOML: {exc}") from exc


def _expr(source, tower, where):
    if isinstance(source, int):
        source = str(source)
    if not isinstance(source, str):
        raise ProblemFileError(where, "expected an expression string")
    try:
        return parse_expression(source, tower)
    except ExprError as exc:
        raise ProblemFileError(where, f"{exc} [{exc.qualified()}]") from exc


def _int_list(data, key, where):
    val = data.get(key)
    if val is None:
        return None
    if isinstance(val, int):
        val = [val]
    if not isinstance(val, list) or not all(isinstance(v, int) for v in val):
        raise ProblemFileError(where, "expected a list of integers")
    return tuple(val)


def build_tower(field_data) -> Tower:
    if not isinstance(field_data, dict):
        raise ProblemFileError("field", "missing [field] table")
    names = field_data.get("variables")
    if not isinstance(names, list) or not names or not all(isinstance(n, str) for n in names):
        raise ProblemFileError("field.variables", "need a nonempty list of names")
    for n in names:
        if not n.isidentifier():
            raise ProblemFileError("field.variables", f"{n!r} is not a valid name")
    try:
        base = Tower(tuple(names))
    except ValueError as exc:
        raise ProblemFileError("field.variables", str(exc)) from exc
    ext = field_data.get("extension")
    if ext is None:
        return base
    name = ext.get("name")
    if not isinstance(name, str) or not name.isidentifier() or name in names:
        raise ProblemFileError("field.extension.name", "need a fresh generator name")
    coeffs = ext.get("minpoly")
    if not isinstance(coeffs, list) or not coeffs:
        raise ProblemFileError("field.extension.minpoly", "need the coefficients r_0, ..., r_{m-1}")
    rs = tuple(_expr(c, base, f"field.extension.minpoly[{i}]").coords[0] for i, c in enumerate(coeffs))
    tower = Tower(base.variables, name, rs)
    tower.check_minpoly()
    return tower


def parse_action(images, tower, provenance="user-supplied", where="action") -> AutoAction:
    if not isinstance(images, dict):
        raise ProblemFileError(where, "expected a table of generator images")
    out = {}
    for name, src in images.items():
        if name not in tower.symbols:
            raise ProblemFileError(where, f"unknown generator {name!r}")
        out[name] = _expr(src, tower, f"{where}.{name}")
    return AutoAction(tower, out, provenance)


def spec_from_data(data) -> Problem:
    tower = build_tower(data.get("field"))
    eq = data.get("equation")
    if not isinstance(eq, dict):
        raise ProblemFileError("equation", "missing [equation] table")
    lists = {}
    for key in ("a", "alpha", "beta"):
        val = eq.get(key)
        if val is None:
            if key != "beta":
                raise ProblemFileError(f"equation.{key}", "missing")
            continue
        if not isinstance(val, list):
            raise ProblemFileError(f"equation.{key}", "expected a list of expressions")
        lists[key] = tuple(_expr(v, tower, f"equation.{key}[{i}]") for i, v in enumerate(val))
    n = eq.get("n")
    if n is not None:
        for key, val in lists.items():
            if len(val) != n:
                raise ProblemFileError(f"equation.{key}", f"length {len(val)} does not match n = {n}")
    mode = eq.get("mode", "alpha")
    if mode not in MODES:
        raise ProblemFileError("equation.mode", f"expected one of {', '.join(MODES)}")
    p = eq.get("p", 1)
    if not isinstance(p, int):
        raise ProblemFileError("equation.p", "expected an integer")
    spec = ProblemSpec(
        tower,
        lists["a"],
        lists["alpha"],
        lists.get("beta"),
        p=p,
        bounds=_int_list(eq, "bounds", "equation.bounds"),
        mode=mode,
        factor_bounds=_int_list(eq, "factor_bounds", "equation.factor_bounds"),
    )
    search = data.get("search", {})
    cands = [parse_action(c, tower, where=f"automorphisms[{i}]")
             for i, c in enumerate(data.get("automorphisms", []))]
    from .additive import check_regularity

    return Problem(spec, cands, int(search.get("degree_cap", 1)), bool(search.get("diagonal", False)),
                   check_regularity(spec))


def load_problem(path) -> Problem:
    return spec_from_data(_read(path))


def loads_problem(text) -> Problem:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ProblemFileError("file", f"not valid TOML: {exc}") from exc
    return spec_from_data(data)


def _operator(entry, tower, where):
    bounds = _int_list(entry, "bounds", f"{where}.bounds")
    coeffs = {}
    for key, src in (entry.get("coefficients") or {}).items():
        try:
            idx = tuple(int(x) for x in str(key).split(","))
        except ValueError:
            raise ProblemFileError(f"{where}.coefficients", f"bad index {key!r}") from None
        if len(idx) != tower.k:
            raise ProblemFileError(f"{where}.coefficients", f"index {key!r} needs {tower.k} entries")
        coeffs[idx] = _expr(src, tower, f"{where}.coefficients.{key}")
    if bounds is None:
        bounds = tuple(max((i[j] for i in coeffs), default=0) for j in range(tower.k))
    try:
        return DiffOperator(tower, bounds, coeffs)
    except ValueError as exc:
        raise ProblemFileError(where, str(exc)) from exc


def load_candidate(path, tower):
    """(c~, [(action, operator)], kind) with kind "terms" (p = 1) or "factors"."""
    data = _read(path)
    c_tilde = _expr(data.get("c_tilde", "1"), tower, "c_tilde")
    kind = "factors" if "factors" in data else "terms"
    entries = data.get(kind)
    if not isinstance(entries, list) or not entries:
        raise ProblemFileError(kind, "need at least one entry")
    out = []
    for i, e in enumerate(entries):
        where = f"{kind}[{i}]"
        act = e.get("action")
        action = AutoAction.identity(tower) if act is None else parse_action(act, tower, where=f"{where}.action")
        out.append((action, _operator(e, tower, where)))
    return c_tilde, out, kind
