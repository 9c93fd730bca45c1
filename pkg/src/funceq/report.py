"""Text and machine (JSON) reports of solution spaces, plus parsing back."""

from __future__ import annotations

import json

from .expr import _is_atom, format_element, parse_expression

MACHINE_FORMAT = "funceq-report/1"


def format_derivative(idx, tower) -> str:
    if not any(idx):
        return ""
    if tower.k == 1:
        e = idx[0]
        return "d" if e == 1 else f"d^{e}"
    parts = []
    for j, e in enumerate(idx):
        if e == 1:
            parts.append(f"d{j + 1}")
        elif e:
            parts.append(f"d{j + 1}^{e}")
    return "*".join(parts)


def format_operator(D) -> str:
    """E.g. ``(1/(4*t^2)) * d^2`` or ``1 + t*d1*d2``; the zero operator prints as 0."""
    if D.is_zero():
        return "0"
    terms = []
    for idx in sorted(D.coeffs):
        c = format_element(D.coeffs[idx])
        op = format_derivative(idx, D.tower)
        if not op:
            terms.append(c if _is_atom(c) else f"({c})")
        elif c == "1":
            terms.append(op)
        elif c == "-1":
            terms.append(f"-{op}")
        elif _is_atom(c.lstrip("-")):
            terms.append(f"{c} * {op}")
        else:
            terms.append(f"({c}) * {op}")
    out = terms[0]
    for term in terms[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out


def _leading(D):
    return max(D.coeffs) if D.coeffs else ()


def sorted_kernel(ops):
    return sorted(ops, key=_leading)


# -- machine format ------------------------------------------------------------


def field_dict(tower):
    ext = None
    if tower.minpoly:
        ext = {"name": tower.ext_name,
               "minpoly": [format_element(tower.from_ratfunc(r)) for r in tower.minpoly]}
    return {"variables": list(tower.variables), "extension": ext}


def operator_dict(D):
    return {
        "bounds": list(D.bounds),
        "terms": [{"index": list(idx), "coefficient": format_element(D.coeffs[idx])}
                  for idx in sorted(D.coeffs)],
    }


def action_dict(action):
    return {
        "provenance": action.provenance,
        "images": {n: format_element(action.images[n]) for n in action.tower.symbols},
    }


def space_dict(space, spec):
    tower = spec.tower
    return {
        "format": MACHINE_FORMAT,
        "kind": "additive",
        "field": field_dict(tower),
        "problem": {"n": spec.n, "p": spec.p, "mode": space.mode, "bounds": list(space.bounds)},
        "classification": space.classification.value,
        "c_tilde": format_element(space.c_tilde) if space.c_tilde is not None else None,
        "particular": operator_dict(space.particular) if space.particular is not None else None,
        "kernel": [operator_dict(K) for K in sorted_kernel(space.kernel)],
        "automorphisms": [
            {**action_dict(g.action),
             "kernel": [operator_dict(K) for K in sorted_kernel(g.kernel)],
             "skipped": g.skipped}
            for g in space.generators
        ],
        "characteristic_equations": [{"side": e.side, "polynomial": e.format()}
                                     for e in space.char_equations],
        "regularity_warnings": space.regularity.warnings() if space.regularity else [],
        "notes": list(space.notes),
        "verified": space.verified,
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- text format ---------------------------------------------------------------


def char_line(eq) -> str:
    if eq.polynomial is None:
        return f"characteristic equation ({eq.side}): over the algebraic extension, searched directly"
    return f"characteristic equation ({eq.side}): {eq.format()} = 0"


def space_text(space, spec) -> str:
    lines = [f"classification: {space.classification.value}",
             f"mode: {space.mode}",
             f"bounds: {', '.join(map(str, space.bounds))}"]
    if space.c_tilde is not None:
        lines.append(f"c~: {format_element(space.c_tilde)}")
    if space.particular is not None:
        lines.append(f"particular: {format_operator(space.particular)}")
    else:
        lines.append("particular: none")
    kernel = sorted_kernel(space.kernel)
    lines.append(f"kernel dimension: {len(kernel)}")
    for K in kernel:
        lines.append(f"  {format_operator(K)}")
    for eq in space.char_equations:
        lines.append(char_line(eq))
    lines.append(f"automorphism generators: {len(space.generators)}")
    for g in space.generators:
        lines.append(f"  [{g.action.provenance}] {g.action.describe()}")
        if g.skipped:
            lines.append(f"    {g.skipped}")
            continue
        lines.append(f"    kernel dimension: {len(g.kernel)}")
        for K in sorted_kernel(g.kernel):
            lines.append(f"      {format_operator(K)}")
    if space.regularity is not None:
        for w in space.regularity.warnings():
            lines.append(f"regularity warning: {w}")
    for note in space.notes:
        if not note.startswith("regularity warning"):
            lines.append(f"note: {note}")
    lines.append(f"oracle recheck: {'passed' if space.verified else 'not run'}")
    return "\n".join(lines) + "\n"


def emit_report(space, spec, fmt="text") -> str:
    if fmt == "machine":
        return dumps(space_dict(space, spec))
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    return space_text(space, spec)


# -- parsing back --------------------------------------------------------------


def tower_from_dict(d):
    from .tower import Tower

    base = Tower(tuple(d["variables"]))
    ext = d.get("extension")
    if not ext:
        return base
    minpoly = tuple(parse_expression(s, base).coords[0] for s in ext["minpoly"])
    return Tower(base.variables, ext["name"], minpoly)


def operator_from_dict(d, tower):
    from .diffop import DiffOperator

    coeffs = {tuple(t["index"]): parse_expression(t["coefficient"], tower) for t in d["terms"]}
    return DiffOperator(tower, tuple(d["bounds"]), coeffs)


def parse_report(text):
    """Machine report -> dict with field values and operators rebuilt exactly."""
    from .action import AutoAction

    doc = json.loads(text)
    if doc.get("format") != MACHINE_FORMAT:
        raise ValueError("not a machine report")
    tower = tower_from_dict(doc["field"])
    out = dict(doc)
    out["tower"] = tower
    if doc.get("c_tilde") is not None:
        out["c_tilde"] = parse_expression(doc["c_tilde"], tower)
    if doc.get("particular") is not None:
        out["particular"] = operator_from_dict(doc["particular"], tower)
    out["kernel"] = [operator_from_dict(k, tower) for k in doc.get("kernel", [])]
    autos = []
    for a in doc.get("automorphisms", []):
        images = {n: parse_expression(s, tower) for n, s in a["images"].items()}
        autos.append({
            "action": AutoAction(tower, images, a["provenance"]),
            "kernel": [operator_from_dict(k, tower) for k in a.get("kernel", [])],
            "skipped": a.get("skipped"),
        })
    out["automorphisms"] = autos
    if doc.get("generator") is not None:
        out["generator"] = [
            (AutoAction(tower, {n: parse_expression(v, tower) for n, v in f["images"].items()},
                        f["provenance"]),
             operator_from_dict(f["operator"], tower))
            for f in doc["generator"]
        ]
    return out


# -- degree p >= 2 -------------------------------------------------------------


def generator_dict(g):
    return [{**action_dict(a), "operator": operator_dict(D)} for a, D in g.factors]


def higher_dict(res, spec):
    return {
        "format": MACHINE_FORMAT,
        "kind": "product",
        "field": field_dict(spec.tower),
        "problem": {"n": spec.n, "p": spec.p, "mode": spec.mode,
                    "factor_bounds": list(spec.factor_bounds)},
        "classification": res.classification.value,
        "c_tilde": format_element(res.c_tilde) if res.c_tilde is not None else None,
        "generator": generator_dict(res.generator) if res.generator is not None else None,
        "conditions": [
            {"side": c.side,
             "data": [{"orders": list(j), "value": format_element(v)} for j, v in c.data],
             "main_sum": format_element(c.main_sum),
             "feasible": c.feasible}
            for c in res.conditions
        ],
        "bilinear_equations": len(res.system.equations) if res.system is not None else 0,
        "notes": list(res.notes),
        "verified": res.verified,
    }


def higher_text(res, spec):
    lines = [f"classification: {res.classification.value}", f"mode: {spec.mode}", f"p: {spec.p}"]
    if res.c_tilde is not None:
        lines.append(f"c~: {format_element(res.c_tilde)}")
    for c in res.conditions:
        lines.append(f"conditions ({c.side}):")
        for j, v in c.data:
            lines.append(f"  S{tuple(j)} = {format_element(v)}")
        lines.append(f"  main sum S{tuple(c.factor_bounds)} = {format_element(c.main_sum)}")
        lines.append(f"  constraint: {c.describe()}")
    if res.generator is not None:
        lines.append("generator factors:")
        for a, D in res.generator.factors:
            lines.append(f"  [{a.describe()}] {format_operator(D)}")
    if res.system is not None:
        lines.append(f"bilinear equations: {len(res.system.equations)}")
    for note in res.notes:
        lines.append(f"note: {note}")
    lines.append(f"grid check: {'passed' if res.verified else 'not passed'}")
    return "\n".join(lines) + "\n"


def emit_higher_report(res, spec, fmt="text") -> str:
    if fmt == "machine":
        return dumps(higher_dict(res, spec))
    return higher_text(res, spec)
