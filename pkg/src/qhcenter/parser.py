"""Exact expression parser for field input.

Grammar (whitespace-insensitive):

    field  := 'P' '=' expr ';' 'Q' '=' expr
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' exponent)?
    atom   := number | 'x' | 'y' | '(' expr ')'

Numbers are integers or decimal literals; decimals convert to exact
rationals at parse time (0.25 -> 1/4).  Division requires a nonzero
constant denominator.  Exponents must be non-negative integers.  Errors
carry line/column positions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .polycore import BiPoly


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


Expr = Union[Num, Var, Neg, BinOp, Pow]


def pretty(e: Expr) -> str:
    """Canonical fully-parenthesized rendering; parse(pretty(e)) == e."""
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{pretty(e.arg)})"
    if isinstance(e, BinOp):
        return f"({pretty(e.left)} {e.op} {pretty(e.right)})"
    if isinstance(e, Pow):
        return f"({pretty(e.base)}^{e.exponent})"
    raise TypeError(f"not an expression node: {e!r}")


def to_bipoly(e: Expr) -> BiPoly:
    """Exact evaluation of the AST into a polynomial."""
    if isinstance(e, Num):
        return BiPoly.constant(e.value)
    if isinstance(e, Var):
        return BiPoly.x() if e.name == "x" else BiPoly.y()
    if isinstance(e, Neg):
        return -to_bipoly(e.arg)
    if isinstance(e, Pow):
        return to_bipoly(e.base) ** e.exponent
    if isinstance(e, BinOp):
        lhs = to_bipoly(e.left)
        rhs = to_bipoly(e.right)
        if e.op == "+":
            return lhs + rhs
        if e.op == "-":
            return lhs - rhs
        if e.op == "*":
            return lhs * rhs
        if e.op == "/":
            if rhs.total_degree() > 0:
                raise ValueError("division is only defined by nonzero constants")
            c = rhs.coeff(0, 0)
            if c == 0:
                raise ZeroDivisionError("division by zero constant")
            return lhs.scale(1 / c)
    raise TypeError(f"not an expression node: {e!r}")


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    kind: str  # num ident op
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    out = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            out.append(_Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in "+-*/^();=":
            out.append(_Token("op", ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    return out


class _Parser:
    def __init__(self, tokens: list[_Token], end_line: int):
        self.tokens = tokens
        self.pos = 0
        self.end_line = end_line

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.end_line, 0)
        self.pos += 1
        return tok

    def expect_op(self, text: str) -> _Token:
        tok = self.next()
        if tok.kind != "op" or tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def at_op(self, *texts: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "op" and tok.text in texts

    # grammar ----------------------------------------------------------------

    def expr(self) -> Expr:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.next().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.at_op("*", "/"):
            op = self.next().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        if self.at_op("-"):
            self.next()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_op("^"):
            self.next()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> int:
        tok = self.peek()
        if tok is None:
            raise ParseError("missing exponent", self.end_line, 0)
        parens = False
        if tok.kind == "op" and tok.text == "(":
            self.next()
            parens = True
            tok = self.peek()
        sign = 1
        if tok is not None and tok.kind == "op" and tok.text == "-":
            self.next()
            sign = -1
            tok = self.peek()
        if tok is None or tok.kind != "num":
            where = tok or _Token("op", "", self.end_line, 0)
            raise ParseError("exponent must be an integer", where.line, where.col)
        self.next()
        if "." in tok.text:
            raise ParseError("fractional exponent", tok.line, tok.col)
        if parens:
            close = self.peek()
            if close is not None and close.kind == "op" and close.text == "/":
                raise ParseError("fractional exponent", close.line, close.col)
            self.expect_op(")")
        if sign < 0:
            raise ParseError("negative exponent", tok.line, tok.col)
        return int(tok.text)

    def atom(self) -> Expr:
        tok = self.next()
        if tok.kind == "num":
            return Num(_number(tok))
        if tok.kind == "ident":
            if tok.text in ("x", "y"):
                return Var(tok.text)
            raise ParseError(f"unknown identifier {tok.text!r}", tok.line, tok.col)
        if tok.kind == "op" and tok.text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.col)


def _number(tok: _Token) -> Fraction:
    if "." in tok.text:
        whole, frac = tok.text.split(".")
        den = 10 ** len(frac)
        num = int(whole or "0") * den + int(frac or "0")
        return Fraction(num, den)
    return Fraction(int(tok.text))


def parse_expression(text: str) -> Expr:
    """Parse a single polynomial expression into its AST."""
    lines = text.count("\n") + 1
    parser = _Parser(_tokenize(text), lines)
    node = parser.expr()
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return node


def parse_field(text: str) -> tuple[BiPoly, BiPoly]:
    """Parse `P = <expr>; Q = <expr>` into exact polynomials."""
    lines = text.count("\n") + 1
    tokens = _tokenize(text)
    parser = _Parser(tokens, lines)

    def component(name: str) -> BiPoly:
        tok = parser.next()
        if tok.kind != "ident" or tok.text.upper() != name:
            raise ParseError(f"expected component {name!r}", tok.line, tok.col)
        parser.expect_op("=")
        return to_bipoly(parser.expr())

    P = component("P")
    parser.expect_op(";")
    Q = component("Q")
    tok = parser.peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok.text!r}", tok.line, tok.col)
    return P, Q
