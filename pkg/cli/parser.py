"""
Recursive-descent parser for the expression language.

Precedence, high to low, all binary operators left-associative::

    unary minus, function calls
    *            geometric product
    ^            wedge
    << >>        left / right contraction
    |            scalar product
    + -          sum and difference
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from utils.error_handler import ParseError

from .tokenizer import Token, TokenKind, tokenize

MAX_NESTING = 64

PRIMARY_START = ("number", "blade", "identifier", "'('", "'-'", "mat")


@dataclass(frozen=True)
class Node:
    line: int
    column: int


@dataclass(frozen=True)
class Literal(Node):
    value: float


@dataclass(frozen=True)
class BladeLiteral(Node):
    """Wedge of the listed basis vectors, in the written order."""
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class Variable(Node):
    name: str


@dataclass(frozen=True)
class UnaryNeg(Node):
    operand: Node


@dataclass(frozen=True)
class BinaryOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class FunctionCall(Node):
    name: str
    args: Tuple[Node, ...]


@dataclass(frozen=True)
class MatrixLiteral(Node):
    """Row-major entries; columns hold the images of the basis elements."""
    rows: Tuple[Tuple[Node, ...], ...]


@dataclass(frozen=True)
class Assignment(Node):
    name: str
    expr: Node


Expression = Union[Literal, BladeLiteral, Variable, UnaryNeg, BinaryOp, FunctionCall, MatrixLiteral]


@dataclass(frozen=True)
class Statement:
    node: Node
    text: str

    @property
    def is_assignment(self) -> bool:
        return isinstance(self.node, Assignment)


@dataclass
class Program:
    statements: List[Statement] = field(default_factory=list)


# Binary levels from loosest to tightest
BINARY_LEVELS: Tuple[Tuple[str, ...], ...] = (
    ("+", "-"),
    ("|",),
    ("<<", ">>"),
    ("^",),
    ("*",),
)


class Parser:
    """Builds an AST from a token sequence."""

    def __init__(self, tokens: Sequence[Token], source: str = ""):
        self.tokens = list(tokens)
        if not self.tokens or self.tokens[-1].kind is not TokenKind.EOF:
            last = self.tokens[-1] if self.tokens else None
            self.tokens.append(Token(TokenKind.EOF, "", last.line if last else 1, last.column + 1 if last else 1))
        self.source = source
        self.pos = 0
        self.depth = 0

    # Token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind is not TokenKind.EOF:
            self.pos += 1
        return token

    def _at_operator(self, symbols: Tuple[str, ...]) -> bool:
        token = self.current
        return token.kind is TokenKind.OPERATOR and token.text in symbols

    def _at_punct(self, symbol: str) -> bool:
        return self.current.kind is TokenKind.PUNCT and self.current.lexeme == symbol

    def _fail(self, message: str, expected: Sequence[str], token: Optional[Token] = None) -> ParseError:
        token = token or self.current
        return ParseError(f"{message}, found {token.describe()}", token.line, token.column, expected)

    def _expect_punct(self, symbol: str, opener: Optional[Token] = None) -> Token:
        if self._at_punct(symbol):
            return self._advance()
        if self.current.kind is TokenKind.EOF and opener is not None:
            raise ParseError(
                f"unbalanced '{opener.lexeme}' opened at {opener.line}:{opener.column}",
                self.current.line, self.current.column, [f"'{symbol}'"]
            )
        raise self._fail(f"expected '{symbol}'", [f"'{symbol}'"])

    # Grammar

    def parse_program(self) -> Program:
        """program := statement? ((';' | newline) statement?)* EOF"""
        program = Program()
        while True:
            while self.current.kind is TokenKind.SEPARATOR:
                self._advance()
            if self.current.kind is TokenKind.EOF:
                return program
            start = self.current
            node = self.parse_statement()
            program.statements.append(Statement(node, self._slice(start)))
            if self.current.kind not in (TokenKind.SEPARATOR, TokenKind.EOF):
                if self._at_punct(")") or self._at_punct("]"):
                    raise self._fail(f"unbalanced '{self.current.lexeme}'", ["';'", "newline", "end of input"])
                raise self._fail(
                    "unexpected token after expression",
                    ["';'", "newline", "end of input", "operator"]
                )

    def parse_statement(self) -> Node:
        token = self.current
        if (token.kind is TokenKind.IDENT
                and self.tokens[self.pos + 1].kind is TokenKind.OPERATOR
                and self.tokens[self.pos + 1].text == "="):
            self._advance()
            self._advance()
            return Assignment(token.line, token.column, token.lexeme, self.parse_expression())
        return self.parse_expression()

    def parse_expression(self) -> Node:
        return self._binary(0)

    def _binary(self, level: int) -> Node:
        if level == len(BINARY_LEVELS):
            return self._unary()
        symbols = BINARY_LEVELS[level]
        left = self._binary(level + 1)
        while self._at_operator(symbols):
            operator = self._advance()
            right = self._binary(level + 1)
            left = BinaryOp(operator.line, operator.column, operator.text, left, right)
        return left

    def _unary(self) -> Node:
        if not self._at_operator(("-", "+")):
            return self._primary()
        token = self._advance()
        self._enter(token)
        try:
            operand = self._unary()
        finally:
            self.depth -= 1
        if token.text == "-":
            return UnaryNeg(token.line, token.column, operand)
        return operand

    def _enter(self, token: Token) -> None:
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError("expression nested too deeply", token.line, token.column)

    def _primary(self) -> Node:
        token = self.current
        if token.kind is TokenKind.NUMBER:
            self._advance()
            return Literal(token.line, token.column, float(token.value))
        if token.kind is TokenKind.BLADE:
            self._advance()
            return BladeLiteral(token.line, token.column, tuple(token.value))
        if token.kind is TokenKind.IDENT:
            self._advance()
            if token.lexeme == "mat" and self._at_punct("["):
                return self._matrix(token)
            if self._at_punct("("):
                return self._call(token)
            return Variable(token.line, token.column, token.lexeme)
        if self._at_punct("("):
            self._advance()
            self._enter(token)
            try:
                inner = self.parse_expression()
            finally:
                self.depth -= 1
            self._expect_punct(")", token)
            return inner
        if token.kind is TokenKind.EOF:
            raise self._fail("incomplete expression", PRIMARY_START)
        raise self._fail("unexpected token", PRIMARY_START)

    def _call(self, name: Token) -> Node:
        opener = self._advance()
        self._enter(opener)
        try:
            args: List[Node] = []
            if not self._at_punct(")"):
                args.append(self.parse_expression())
                while self._at_punct(","):
                    self._advance()
                    args.append(self.parse_expression())
            if not self._at_punct(")") and self.current.kind is not TokenKind.EOF:
                raise self._fail("expected ',' or ')' in argument list", ["','", "')'"])
            self._expect_punct(")", opener)
        finally:
            self.depth -= 1
        return FunctionCall(name.line, name.column, name.lexeme, tuple(args))

    def _matrix(self, name: Token) -> Node:
        """mat[[a, b], [c, d]]"""
        outer = self._advance()
        self._enter(outer)
        try:
            rows: List[Tuple[Node, ...]] = [self._matrix_row()]
            while self._at_punct(","):
                self._advance()
                rows.append(self._matrix_row())
            self._expect_punct("]", outer)
        finally:
            self.depth -= 1
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise ParseError("matrix rows have different lengths", name.line, name.column)
        return MatrixLiteral(name.line, name.column, tuple(rows))

    def _matrix_row(self) -> Tuple[Node, ...]:
        if not self._at_punct("["):
            raise self._fail("expected '[' to start a matrix row", ["'['"])
        opener = self._advance()
        entries = [self.parse_expression()]
        while self._at_punct(","):
            self._advance()
            entries.append(self.parse_expression())
        self._expect_punct("]", opener)
        return tuple(entries)

    def _slice(self, start: Token) -> str:
        """Source text of the statement that began at ``start``."""
        if not self.source:
            return ""
        lines = self.source.split("\n")
        end = self.tokens[self.pos - 1] if self.pos > 0 else start
        if start.line == end.line:
            return lines[start.line - 1][start.column - 1:end.column - 1 + len(end.lexeme)]
        return lines[start.line - 1][start.column - 1:]


def parse(tokens: Sequence[Token], source: str = "") -> Program:
    """Parse a token sequence into a program."""
    parser = Parser(tokens, source)
    try:
        return parser.parse_program()
    except RecursionError:
        token = parser.current
        raise ParseError("expression nested too deeply", token.line, token.column) from None


def parse_source(source: str, dim: int) -> Program:
    """Tokenize and parse source text."""
    return parse(tokenize(source, dim), source)
