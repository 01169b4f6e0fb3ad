"""A small expression language for endpoint functions of one variable ``x``.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' ['-'] INT)*
    atom    := NUMBER | 'x' | FUNC '(' args ')' | '(' expr ')'
    FUNC    := sin | cos | exp | abs | min | max

Every primitive is continuous, so parsed endpoint functions are continuous
wherever they are finite.  Evaluation is vectorized over numpy arrays.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ParseError

FUNCTIONS = {"sin": 1, "cos": 1, "exp": 1, "abs": 1, "min": 2, "max": 2}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]


Node = Union[Num, Var, Neg, BinOp, Pow, Call]

_TOKEN_RE = re.compile(
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^(),])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str, message: str):
        kind, text, pos = self.peek()
        if text != value or kind != "op":
            raise ParseError(message, pos, {value})
        self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", pos, {"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            sign = 1
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.advance()
                sign = -1
            kind, text, pos = self.peek()
            if kind != "num" or not text.isdigit():
                raise ParseError("exponent must be an integer literal", pos, {"integer"})
            self.advance()
            node = Pow(node, sign * int(text))
        return node

    def atom(self) -> Node:
        kind, text, pos = self.peek()
        if kind == "num":
            self.advance()
            return Num(float(text))
        if kind == "name":
            if text == "x":
                self.advance()
                return Var()
            if text in FUNCTIONS:
                self.advance()
                self.expect("(", f"expected '(' after {text}")
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.advance()
                    args.append(self.expr())
                kind2, text2, pos2 = self.peek()
                if kind2 == "end":
                    raise ParseError("unclosed parenthesis", pos2, {")", ","})
                self.expect(")", "expected ')'")
                if len(args) != FUNCTIONS[text]:
                    raise ParseError(f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}", pos)
                return Call(text, tuple(args))
            raise ParseError(f"unknown name {text!r}", pos, {"x", *FUNCTIONS})
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            kind2, _, pos2 = self.peek()
            if kind2 == "end":
                raise ParseError("unclosed parenthesis", pos2, {")"})
            self.expect(")", "expected ')'")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", pos, {"number", "x", "function", "(", "-"})
        raise ParseError(f"unexpected token {text!r}", pos, {"number", "x", "function", "(", "-"})


def parse(text: str) -> Node:
    return _Parser(text).parse()


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def pretty(node: Node) -> str:
    """Render ``node`` so that ``parse(pretty(node)) == node``."""
    return _pretty(node, 0)


def _pretty(node: Node, parent: int) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        s = "-" + _pretty(node.operand, 3)
        return f"({s})" if parent > 3 else s
    if isinstance(node, Pow):
        s = f"{_pretty(node.base, 4)}^{node.exponent}"
        return s
    if isinstance(node, Call):
        return f"{node.name}({', '.join(_pretty(a, 0) for a in node.args)})"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        # left-associative: the right operand needs parentheses at equal precedence
        s = f"{_pretty(node.left, p)} {node.op} {_pretty(node.right, p + 1)}"
        return f"({s})" if parent > p else s
    raise TypeError(f"not an expression node: {node!r}")


def evaluate(node: Node, x):
    """Evaluate ``node`` at ``x`` (scalar or numpy array)."""
    if isinstance(node, Num):
        return np.full(np.shape(x), node.value)
    if isinstance(node, Var):
        return np.asarray(x, dtype=float)
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, BinOp):
        a = evaluate(node.left, x)
        b = evaluate(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        with np.errstate(divide="ignore", invalid="ignore"):
            return a / b
    if isinstance(node, Pow):
        base = evaluate(node.base, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.power(base, float(node.exponent))
    if isinstance(node, Call):
        args = [evaluate(a, x) for a in node.args]
        if node.name == "sin":
            return np.sin(args[0])
        if node.name == "cos":
            return np.cos(args[0])
        if node.name == "exp":
            with np.errstate(over="ignore"):
                return np.exp(args[0])
        if node.name == "abs":
            return np.abs(args[0])
        if node.name == "min":
            return np.minimum(args[0], args[1])
        return np.maximum(args[0], args[1])
    raise TypeError(f"not an expression node: {node!r}")


def compile_expr(text: str):
    """Parse ``text`` and return a vectorized callable ``x -> value``."""
    node = parse(text)

    def fn(x):
        return evaluate(node, x)

    fn.ast = node
    fn.source = text
    return fn
