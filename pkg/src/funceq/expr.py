"""Expression syntax for field elements: Pratt parser, evaluator, printer.

Grammar (loosest to tightest): ``+ -`` < ``* /`` < unary ``-`` < ``^``.
Binary operators are left associative. Exponents are nonnegative integer
literals; negative powers are written with division.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import ExprSyntaxError, FieldDivisionError, UnknownSymbolError, ZeroDenominatorError
from .poly import MultiPoly
from .ratfunc import RatFunc
from .tower import FieldElement, Tower


# -- AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int = 0


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


@dataclass(frozen=True)
class Group:
    inner: object


# -- tokenizer -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


@dataclass
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


def tokenize(source: str):
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(source, pos)
        if not m:
            raise ExprSyntaxError(f"unexpected character {source[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(Token("num", m.group(1), start))
        elif m.group(2):
            tokens.append(Token("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(Token("op", op, start))
        pos = m.end()
    tokens.append(Token("end", "", n))
    return tokens


# binding powers
_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}
_UNARY = 30


class _Parser:
    def __init__(self, source):
        self.tokens = tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.next()
        if tok.text != text:
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ExprSyntaxError(f"expected {text!r}, found {what}", tok.pos)
        return tok

    def parse(self):
        if self.peek().kind == "end":
            raise ExprSyntaxError("empty expression", 0)
        node = self.expr(0)
        tok = self.peek()
        if tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {tok.text!r}", tok.pos)
        return node

    def expr(self, min_bp):
        tok = self.next()
        if tok.kind == "num":
            left = Num(int(tok.text))
        elif tok.kind == "name":
            left = Var(tok.text, tok.pos)
        elif tok.text == "(":
            left = Group(self.expr(0))
            self.expect(")")
        elif tok.text == "-":
            left = Neg(self.expr(_UNARY))
        else:
            what = "end of input" if tok.kind == "end" else repr(tok.text)
            raise ExprSyntaxError(f"unexpected {what}", tok.pos)

        while True:
            tok = self.peek()
            if tok.kind != "op" or tok.text not in _INFIX:
                if tok.kind in ("num", "name") or tok.text == "(":
                    raise ExprSyntaxError("missing operator", tok.pos)
                break
            bp = _INFIX[tok.text]
            if bp <= min_bp:
                break
            self.next()
            if tok.text == "^":
                etok = self.next()
                if etok.kind != "num":
                    raise ExprSyntaxError("exponent must be a nonnegative integer literal", etok.pos)
                left = Pow(left, int(etok.text))
            else:
                right = self.expr(bp)
                left = BinOp(tok.text, left, right, tok.pos)
        return left


def parse_ast(source: str):
    return _Parser(source).parse()


def evaluate(node, tower: Tower) -> FieldElement:
    if isinstance(node, Num):
        return tower.const(node.value)
    if isinstance(node, Var):
        try:
            return tower.symbol(node.name)
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol {node.name!r} (at position {node.pos})") from None
    if isinstance(node, Group):
        return evaluate(node.inner, tower)
    if isinstance(node, Neg):
        return -evaluate(node.operand, tower)
    if isinstance(node, Pow):
        return evaluate(node.base, tower) ** node.exponent
    a = evaluate(node.left, tower)
    b = evaluate(node.right, tower)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if b.is_zero():
        raise ZeroDenominatorError(f"division by zero (at position {node.pos})")
    try:
        return a / b
    except FieldDivisionError as exc:
        raise ZeroDenominatorError(str(exc)) from exc


def parse_expression(source: str, tower: Tower) -> FieldElement:
    return evaluate(parse_ast(source), tower)


# -- printing ------------------------------------------------------------------


def _monomial_str(exps, names):
    parts = []
    for name, e in zip(names, exps):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_poly(p: MultiPoly, names) -> str:
    """Integer-or-rational polynomial in descending lex order."""
    if p.is_zero():
        return "0"
    out = []
    for exps, c in p.items():
        mono = _monomial_str(exps, names)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    s = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


def _is_atom(s):
    return re.fullmatch(r"[A-Za-z_0-9^]+", s) is not None


def _is_product(s):
    return re.fullmatch(r"[A-Za-z_0-9^*]+", s) is not None


def format_ratfunc(r: RatFunc, names) -> str:
    if r.is_zero():
        return "0"
    # present as integer-coefficient num / den with positive leading den coefficient
    cn, pn = r.num.integer_primitive()
    cd, pd = r.den.integer_primitive()
    ratio = Fraction(cn) / cd
    num = pn.scale(ratio.numerator)
    den = pd.scale(ratio.denominator)
    ns = format_poly(num, names)
    if den.is_constant() and den.constant_value() == 1:
        return ns
    ds = format_poly(den, names)
    if not _is_atom(ns.lstrip("-")) or ns.startswith("-") and len(num) > 1:
        ns = f"({ns})"
    if not _is_atom(ds):
        ds = f"({ds})"
    return f"{ns}/{ds}"


def format_element(x: FieldElement) -> str:
    tower = x.tower
    names = tower.variables
    if tower.degree == 1:
        return format_ratfunc(x.coords[0], names)
    parts = []
    for l, c in enumerate(x.coords):
        if c.is_zero():
            continue
        cs = format_ratfunc(c, names)
        if l == 0:
            parts.append(cs)
            continue
        upow = tower.ext_name if l == 1 else f"{tower.ext_name}^{l}"
        if cs == "1":
            parts.append(upow)
        elif cs == "-1":
            parts.append(f"-{upow}")
        elif _is_product(cs.lstrip("-")):
            parts.append(f"{cs}*{upow}")
        else:
            parts.append(f"({cs})*{upow}")
    if not parts:
        return "0"
    s = parts[0]
    for p in parts[1:]:
        s += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return s
