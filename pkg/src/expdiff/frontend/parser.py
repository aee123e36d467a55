"""
parser.py
=========
Tokenizer and Pratt parser for expressions and equations.

Grammar (binding powers in brackets):

    expr    := prefix (infix)*
    infix   := '+' [10] | '-' [10] | '*' [20] | '/' [20] | '^' INT [30, right]
    prefix  := INT | NAME | '(' expr ')' | '-' expr [25]
             | 'exp' '(' expr ')' | 'e' '^' '(' expr ')'
             | fterm
    fterm   := 'f' "'"* ['^' '(' INT ')'] ['(' expr ')']

``f^(k)`` is a derivative only when a call parenthesis follows it,
otherwise ``^`` is a power.  There is no bare ``e``: Euler's number is
written ``exp(1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from expdiff.errors import ExpressionSyntaxError, NonIntegerExponent

__all__ = [
    "Token",
    "Num",
    "Name",
    "ExpCall",
    "FTerm",
    "Neg",
    "BinOp",
    "Pow",
    "Ast",
    "tokenize",
    "parse",
    "parse_equation",
]


# ── AST ───────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Num:
    value: int
    pos: Tuple[int, int] = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Name:
    name: str
    pos: Tuple[int, int] = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class ExpCall:
    arg: "Ast"
    pos: Tuple[int, int] = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class FTerm:
    """f^{(dorder)}(arg); ``arg`` is None for a bare ``f``."""

    dorder: int
    arg: Optional["Ast"]
    pos: Tuple[int, int] = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Ast"
    pos: Tuple[int, int] = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Ast"
    right: "Ast"
    pos: Tuple[int, int] = field(default=(1, 1), compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Ast"
    exponent: int
    pos: Tuple[int, int] = field(default=(1, 1), compare=False)


Ast = Union[Num, Name, ExpCall, FTerm, Neg, BinOp, Pow]


# ── tokens ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class Token:
    kind: str  # INT, NAME, OP, EOF
    text: str
    line: int
    column: int

    @property
    def pos(self) -> Tuple[int, int]:
        return self.line, self.column


_TOKEN = re.compile(r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()'=])")


def tokenize(text: str, line: int = 1, column: int = 1) -> List[Token]:
    """Split ``text`` into tokens; positions are 1-based and offset by ``line``/``column``."""
    tokens: List[Token] = []
    pos = 0
    line_start = 0
    col_offset = column - 1
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        col = pos - line_start + 1 + col_offset
        if match is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = match.lastgroup
        if kind == "nl":
            line += 1
            line_start = match.end()
            col_offset = 0
        elif kind != "ws":
            tokens.append(Token(kind.upper(), match.group(), line, col))
        pos = match.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1 + col_offset))
    return tokens


# ── parser ────────────────────────────────────────────────────────────────────

_INFIX_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30, "=": 0}
_UNARY_BP = 25


class _Parser:
    def __init__(self, tokens: List[Token]) -> None:
        self.tokens = tokens
        self.index = 0

    # helpers
    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.token
        self.index += 1
        return tok

    def is_op(self, text: str, tok: Optional[Token] = None) -> bool:
        tok = tok or self.token
        return tok.kind == "OP" and tok.text == text

    def expect(self, text: str) -> Token:
        if not self.is_op(text):
            raise self.error(f"expected '{text}'")
        return self.advance()

    def error(self, reason: str, tok: Optional[Token] = None) -> ExpressionSyntaxError:
        tok = tok or self.token
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return ExpressionSyntaxError(f"{reason}, found {found}", tok.line, tok.column)

    # Pratt loop
    def expression(self, rbp: int = 0) -> Ast:
        left = self.nud(self.advance())
        while self.token.kind == "OP" and rbp < _INFIX_BP.get(self.token.text, -1):
            left = self.led(self.advance(), left)
        return left

    def nud(self, tok: Token) -> Ast:
        if tok.kind == "INT":
            return Num(int(tok.text), tok.pos)
        if tok.kind == "NAME":
            if tok.text == "f":
                return self.fterm(tok)
            if tok.text == "exp":
                self.expect("(")
                arg = self.expression()
                self.expect(")")
                return ExpCall(arg, tok.pos)
            if tok.text == "e" and self.is_op("^") and self.is_op("(", self.peek()):
                self.advance()
                self.advance()
                arg = self.expression()
                self.expect(")")
                return ExpCall(arg, tok.pos)
            if self.is_op("("):
                raise self.error(f"unknown function '{tok.text}'", tok)
            return Name(tok.text, tok.pos)
        if self.is_op("(", tok):
            inner = self.expression()
            self.expect(")")
            return inner
        if self.is_op("-", tok):
            return Neg(self.expression(_UNARY_BP), tok.pos)
        if self.is_op("+", tok):
            return self.expression(_UNARY_BP)
        raise self.error("expected an expression", tok)

    def led(self, tok: Token, left: Ast) -> Ast:
        if tok.text == "^":
            return Pow(left, self.exponent(), tok.pos)
        if tok.text in "+-*/":
            return BinOp(tok.text, left, self.expression(_INFIX_BP[tok.text]), tok.pos)
        raise self.error("unexpected operator", tok)

    def exponent(self) -> int:
        """Integer literal exponent, optionally parenthesised or negated; ``^`` chains to the right."""
        start = self.token
        wrapped = self.is_op("(")
        if wrapped:
            self.advance()
        sign = 1
        if self.is_op("-"):
            self.advance()
            sign = -1
        if self.token.kind != "INT":
            raise NonIntegerExponent(start.line, start.column)
        value = sign * int(self.advance().text)
        if wrapped:
            if not self.is_op(")"):
                raise NonIntegerExponent(start.line, start.column)
            self.advance()
        if self.is_op("^"):
            self.advance()
            power = self.exponent()
            if power < 0:
                raise NonIntegerExponent(start.line, start.column)
            value = value ** power
        return value

    def fterm(self, tok: Token) -> FTerm:
        dorder = 0
        while self.is_op("'"):
            self.advance()
            dorder += 1
        # f^(k)( ... ) is a derivative; anything else after ^ is a power
        if (
            dorder == 0
            and self.is_op("^")
            and self.is_op("(", self.peek(1))
            and self.peek(2).kind == "INT"
            and self.is_op(")", self.peek(3))
            and self.is_op("(", self.peek(4))
        ):
            self.advance()
            self.advance()
            dorder = int(self.advance().text)
            self.advance()
        arg = None
        if self.is_op("("):
            self.advance()
            arg = self.expression()
            self.expect(")")
        return FTerm(dorder, arg, tok.pos)


def parse(text: str, line: int = 1, column: int = 1) -> Ast:
    """Parse a single expression."""
    parser = _Parser(tokenize(text, line, column))
    if parser.token.kind == "EOF":
        raise parser.error("empty expression")
    tree = parser.expression()
    if parser.token.kind != "EOF":
        raise parser.error("unexpected trailing input")
    return tree


def parse_equation(text: str, line: int = 1, column: int = 1) -> Tuple[Ast, Ast]:
    """Parse ``lhs = rhs``."""
    parser = _Parser(tokenize(text, line, column))
    lhs = parser.expression()
    parser.expect("=")
    rhs = parser.expression()
    if parser.token.kind != "EOF":
        raise parser.error("unexpected trailing input")
    return lhs, rhs
