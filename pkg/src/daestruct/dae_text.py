"""DAE description language and the signature-file JSON format.

Grammar::

    system   := header equation+
    header   := "vars:" ident ("," ident)*
    equation := [ident "="] expr
    expr     := term (("+" | "-") term)*
    term     := factor (("*" | "/") factor)*
    factor   := ["-"] atom ["^" integer]
    atom     := number | ident | ident "(" args ")"
              | "der" "(" ident ["," integer] ")" | "(" expr ")"

Tokens are separated by whitespace or newlines and ``#`` starts a comment.
An equation ends where its expression cannot continue. Identifiers that are
not declared in ``vars:`` are known functions or constants (forcing terms like
``u1(t)``) and never enter the signature matrix.

Example::

    vars: x1, x2, x3
    f1 = der(x1, 2) + x3 + u1(t)
    f2 = der(x2) + x3 + u2(t)
    f3 = x1^2 + x2^2 + u3(t)
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from .errors import (
    DaeSyntaxError,
    DuplicateEntry,
    FormatError,
    IndexOutOfRange,
    NonSquare,
    UndeclaredVariable,
)
from .sigma import SignatureMatrix


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Der:
    name: str
    order: int


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Der, Call, Neg, BinOp, Pow]


@dataclass(frozen=True)
class Equation:
    name: str
    expr: Expr


@dataclass(frozen=True)
class DaeSystem:
    vars: tuple[str, ...]
    equations: tuple[Equation, ...]

    @property
    def equation_names(self) -> tuple[str, ...]:
        return tuple(eq.name for eq in self.equations)


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),=:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DaeSyntaxError(line, pos - line_start + 1, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        for k, ch in enumerate(m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + k + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.declared: set[str] = set()

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, message, tok=None):
        tok = tok or self.tok
        return DaeSyntaxError(tok.line, tok.col, message)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        tok = self.tok
        self.i += 1
        return tok

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise self.error(f"expected an identifier, found {self.tok.text or 'end of input'!r}")
        name = self.tok.text
        self.i += 1
        return name

    def integer(self) -> int:
        sign = -1 if self.at("-") else 1
        if sign < 0:
            self.i += 1
        tok = self.tok
        if tok.kind != "number" or not tok.text.isdigit():
            raise self.error(f"expected an integer, found {tok.text or 'end of input'!r}")
        self.i += 1
        return sign * int(tok.text)

    def system(self) -> DaeSystem:
        self.expect("vars")
        self.expect(":")
        names = [self.ident()]
        while self.at(","):
            self.i += 1
            names.append(self.ident())
        seen = set()
        for name in names:
            if name in seen:
                raise self.error(f"variable {name!r} declared twice")
            if name == "der":
                raise self.error("'der' cannot be used as a variable name")
            seen.add(name)
        self.declared = seen

        equations = []
        eq_names = set()
        while self.tok.kind != "eof":
            name = None
            if self.tok.kind == "ident" and self.peek().text == "=" and self.peek().kind == "op":
                name_tok = self.tok
                name = self.ident()
                self.expect("=")
                if name in eq_names:
                    raise self.error(f"equation name {name!r} used twice", name_tok)
            expr = self.expr()
            if name is None:
                name = f"f{len(equations) + 1}"
            eq_names.add(name)
            equations.append(Equation(name, expr))
        if not equations:
            raise self.error("expected at least one equation")
        if len(equations) != len(names):
            raise NonSquare(len(equations), len(names))
        return DaeSystem(tuple(names), tuple(equations))

    def expr(self) -> Expr:
        node = self.term()
        while self.at("+") or self.at("-"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at("*") or self.at("/"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        negate = self.at("-")
        if negate:
            self.i += 1
        node = self.atom()
        if self.at("^"):
            self.i += 1
            node = Pow(node, self.integer())
        return Neg(node) if negate else node

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Num(float(tok.text))
        if self.at("("):
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind != "ident":
            raise self.error(f"expected an expression, found {tok.text or 'end of input'!r}")
        if tok.text == "der":
            return self.derivative()
        name = self.ident()
        if self.at("("):
            self.i += 1
            args = []
            if not self.at(")"):
                args.append(self.expr())
                while self.at(","):
                    self.i += 1
                    args.append(self.expr())
            self.expect(")")
            if name in self.declared:
                raise self.error(f"variable {name!r} cannot be called like a function", tok)
            return Call(name, tuple(args))
        return Var(name)

    def derivative(self) -> Der:
        self.expect("der")
        self.expect("(")
        if self.at("der"):
            raise self.error("nested der() is not supported; write der(v, k)")
        name = self.ident()
        if name not in self.declared:
            raise UndeclaredVariable(name)
        order = 1
        if self.at(","):
            self.i += 1
            k_tok = self.tok
            order = self.integer()
            if order < 1:
                raise self.error("derivative order must be at least 1", k_tok)
        self.expect(")")
        return Der(name, order)


def parse_dae(text: str) -> DaeSystem:
    """Parse DAE source text. Equations keep source order, variables declaration order."""
    return _Parser(text).system()


def _orders(node: Expr, declared: set[str], out: dict[str, int]) -> None:
    if isinstance(node, Var):
        if node.name in declared:
            out[node.name] = max(out.get(node.name, 0), 0)
    elif isinstance(node, Der):
        out[node.name] = max(out.get(node.name, 0), node.order)
    elif isinstance(node, Call):
        for arg in node.args:
            _orders(arg, declared, out)
    elif isinstance(node, Neg):
        _orders(node.operand, declared, out)
    elif isinstance(node, BinOp):
        _orders(node.left, declared, out)
        _orders(node.right, declared, out)
    elif isinstance(node, Pow):
        _orders(node.base, declared, out)


def signature_of(sys: DaeSystem) -> SignatureMatrix:
    """Highest derivative order of each declared variable in each equation.

    A bare occurrence counts as order 0. Arguments of known-function calls are
    searched too, so ``sin(x)`` makes x occur.
    """
    col = {name: j for j, name in enumerate(sys.vars)}
    declared = set(col)
    entries = {}
    for i, eq in enumerate(sys.equations):
        found: dict[str, int] = {}
        _orders(eq.expr, declared, found)
        for name, k in found.items():
            entries[(i, col[name])] = k
    return SignatureMatrix(len(sys.vars), entries)


def write_sigfile(sigma: SignatureMatrix) -> str:
    """Canonical JSON: entries sorted row-major, one document per line."""
    return json.dumps({"n": sigma.n, "entries": [list(t) for t in sigma.triples()]}) + "\n"


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def read_sigfile(text: str) -> SignatureMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, f"line {exc.lineno}, col {exc.colno}") from None
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object", "$")
    if set(doc) != {"n", "entries"}:
        raise FormatError(f"expected exactly the keys 'n' and 'entries', got {sorted(doc)}", "$")
    n = doc["n"]
    if not _is_int(n) or n < 1:
        raise FormatError("'n' must be a positive integer", "$.n")
    if not isinstance(doc["entries"], list):
        raise FormatError("'entries' must be a list", "$.entries")
    entries = {}
    for k, item in enumerate(doc["entries"]):
        where = f"$.entries[{k}]"
        if not isinstance(item, list) or len(item) != 3 or not all(_is_int(x) for x in item):
            raise FormatError("entry must be [row, col, sigma] with integer members", where)
        i, j, v = item
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange(f"cell ({i}, {j}) outside 0..{n - 1}", where)
        if (i, j) in entries:
            raise DuplicateEntry(f"cell ({i}, {j}) listed twice", where)
        entries[(i, j)] = v
    try:
        return SignatureMatrix(n, entries)
    except OverflowError as exc:
        raise FormatError(str(exc), "$.entries") from None
