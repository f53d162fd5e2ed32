"""A small arithmetic expression language for metric components.

Grammar (precedence from loosest to tightest, ``^`` right-associative)::

    sum     := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | NAME | NAME '(' sum ')' | '(' sum ')'

``NAME`` is either a coordinate symbol, a named parameter, the constant
``pi``, or one of the functions sin, cos, tan, exp, log, sqrt, sinh, cosh.
Evaluation is pure: the same AST with the same bindings gives a
bit-identical float.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import EvalError, ParseError

FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "sinh": math.sinh,
    "cosh": math.cosh,
}

CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class Token:
    kind: str  # number | name | op | lparen | rparen | end
    text: str
    line: int
    column: int


def tokenize(text: str, line_offset: int = 1):
    tokens = []
    line, col = line_offset, 1
    i = 0
    while i < len(text):
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        start_col = col
        if c.isdigit() or (c == "." and i + 1 < len(text) and text[i + 1].isdigit()):
            j = i
            seen_e = False
            while j < len(text):
                ch = text[j]
                if ch.isdigit() or ch == ".":
                    j += 1
                elif ch in "eE" and not seen_e:
                    seen_e = True
                    j += 1
                    if j < len(text) and text[j] in "+-":
                        j += 1
                else:
                    break
            lexeme = text[i:j]
            try:
                float(lexeme)
            except ValueError:
                raise ParseError(
                    f"malformed number '{lexeme}'", line, start_col, {"number"}
                )
            tokens.append(Token("number", lexeme, line, start_col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if c in "+-*/^":
            tokens.append(Token("op", c, line, start_col))
        elif c == "(":
            tokens.append(Token("lparen", c, line, start_col))
        elif c == ")":
            tokens.append(Token("rparen", c, line, start_col))
        else:
            raise ParseError(f"unexpected character {c!r}", line, start_col, set())
        i += 1
        col += 1
    tokens.append(Token("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected):
        tok = self.peek()
        what = f"'{tok.text}'" if tok.kind != "end" else "end of input"
        raise ParseError(
            f"unexpected {what}", tok.line, tok.column, expected
        )

    def parse_sum(self):
        node = self.parse_term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = BinOp(op, node, self.parse_unary())
        return node

    def parse_unary(self):
        if self.peek().kind == "op" and self.peek().text == "-":
            self.advance()
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.advance()
            # right-associative; the exponent may carry a unary minus
            return BinOp("^", base, self.parse_unary())
        return base

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if tok.text in FUNCTIONS:
                if self.peek().kind != "lparen":
                    self.fail({"'('"})
                self.advance()
                arg = self.parse_sum()
                if self.peek().kind != "rparen":
                    self.fail({"')'"})
                self.advance()
                return Call(tok.text, arg)
            return Var(tok.text)
        if tok.kind == "lparen":
            self.advance()
            node = self.parse_sum()
            if self.peek().kind != "rparen":
                self.fail({"')'"})
            self.advance()
            return node
        self.fail({"number", "name", "'('", "'-'"})


def parse_expression(text: str, line_offset: int = 1) -> Expr:
    """Parse ``text`` into an AST; raises ParseError with position on failure."""
    parser = _Parser(tokenize(text, line_offset))
    node = parser.parse_sum()
    if parser.peek().kind != "end":
        parser.fail({"operator", "end of input"})
    return node


def evaluate(node: Expr, bindings: dict) -> float:
    """Evaluate an AST against name->value bindings.

    Raises EvalError on unbound names, division by zero, or math-domain
    violations (sqrt of a negative, log of a non-positive value).
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name in bindings:
            return float(bindings[node.name])
        if node.name in CONSTANTS:
            return CONSTANTS[node.name]
        raise EvalError(f"unbound symbol '{node.name}'")
    if isinstance(node, Neg):
        return -evaluate(node.arg, bindings)
    if isinstance(node, Call):
        arg = evaluate(node.arg, bindings)
        try:
            return FUNCTIONS[node.func](arg)
        except ValueError as exc:
            raise EvalError(f"{node.func}({arg!r}): {exc}") from exc
    if isinstance(node, BinOp):
        lhs = evaluate(node.left, bindings)
        rhs = evaluate(node.right, bindings)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        if node.op == "/":
            if rhs == 0.0:
                raise EvalError("division by zero")
            return lhs / rhs
        if node.op == "^":
            try:
                result = lhs**rhs
            except (OverflowError, ZeroDivisionError) as exc:
                raise EvalError(f"power {lhs!r} ^ {rhs!r}: {exc}") from exc
            if isinstance(result, complex):
                raise EvalError(f"power {lhs!r} ^ {rhs!r} is not real")
            return result
    raise TypeError(f"not an expression node: {node!r}")


def free_symbols(node: Expr) -> set:
    """All Var names in the AST, constants excluded."""
    if isinstance(node, Num):
        return set()
    if isinstance(node, Var):
        return set() if node.name in CONSTANTS else {node.name}
    if isinstance(node, Neg):
        return free_symbols(node.arg)
    if isinstance(node, Call):
        return free_symbols(node.arg)
    if isinstance(node, BinOp):
        return free_symbols(node.left) | free_symbols(node.right)
    raise TypeError(f"not an expression node: {node!r}")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_text(node: Expr) -> str:
    """Serialize an AST back to the grammar; parse(to_text(e)) == e."""

    def render(n, parent_prec, is_right=False):
        if isinstance(n, Num):
            return repr(n.value)
        if isinstance(n, Var):
            return n.name
        if isinstance(n, Call):
            return f"{n.func}({render(n.arg, 0)})"
        if isinstance(n, Neg):
            inner = render(n.arg, _PREC["neg"])
            text = f"-{inner}"
            return f"({text})" if parent_prec > _PREC["neg"] else text
        if isinstance(n, BinOp):
            prec = _PREC[n.op]
            # '^' is right-associative, the others left-associative
            if n.op == "^":
                left = render(n.left, prec + 1)
                right = render(n.right, _PREC["neg"], True)
            else:
                left = render(n.left, prec)
                right = render(n.right, prec + 1, True)
            text = f"{left} {n.op} {right}"
            needs_parens = parent_prec > prec or (is_right and parent_prec == prec)
            return f"({text})" if needs_parens else text
        raise TypeError(f"not an expression node: {n!r}")

    return render(node, 0)
