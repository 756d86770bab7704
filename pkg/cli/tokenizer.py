"""
Tokenizer for the expression language.

Longest-match lexing with 1-based line/column spans. Newlines separate
statements except inside parentheses or brackets; ``#`` starts a comment.
"""
import re
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

from utils.error_handler import LexError

NUMBER_PATTERN = re.compile(r"(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?", re.ASCII)
IDENT_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*", re.ASCII)
JUXTAPOSED_BLADE = re.compile(r"e[1-9][0-9]*")
BRACKET_BLADE = re.compile(r"e\[\s*((?:\d+\s*(?:,\s*\d+\s*)*)?)\]", re.ASCII)

# Longest operators first
OPERATORS = ("<<", ">>", "+", "-", "*", "^", "|", "=")
ALIASES = {"·": "*", "∧": "^"}
PUNCTUATION = "()[],"
OPENING = "(["
DIGITS = "0123456789"

# Largest dimension where e12 means e1 ∧ e2
JUXTAPOSED_MAX_DIM = 9


class TokenKind(str, Enum):
    IDENT = "identifier"
    NUMBER = "number"
    BLADE = "blade"
    OPERATOR = "operator"
    PUNCT = "punct"
    SEPARATOR = "separator"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    """A lexeme with its kind, decoded value and source position."""
    kind: TokenKind
    lexeme: str
    line: int
    column: int
    value: Union[None, float, Tuple[int, ...]] = None

    @property
    def text(self) -> str:
        """Operator or punctuation symbol with aliases resolved."""
        return ALIASES.get(self.lexeme, self.lexeme)

    def describe(self) -> str:
        if self.kind is TokenKind.EOF:
            return "end of input"
        if self.kind is TokenKind.SEPARATOR:
            return "newline" if self.lexeme == "\n" else f"'{self.lexeme}'"
        return f"'{self.lexeme}'"


class Tokenizer:
    """Turns source text into tokens for a given algebra dimension."""

    def __init__(self, dim: int):
        self.dim = dim

    def tokenize(self, source: str) -> List[Token]:
        """
        Lex a whole source text.

        Args:
            source: Expression text

        Returns:
            Tokens ending with an EOF token

        Raises:
            LexError: illegal character or malformed number
        """
        tokens: List[Token] = []
        depth = 0
        pos = 0
        line = 1
        line_start = 0
        length = len(source)

        while pos < length:
            char = source[pos]
            column = pos - line_start + 1

            if char == "\n":
                if depth == 0:
                    tokens.append(Token(TokenKind.SEPARATOR, "\n", line, column))
                pos += 1
                line += 1
                line_start = pos
                continue
            if char in " \t\r\f\v":
                pos += 1
                continue
            if char == "#":
                end = source.find("\n", pos)
                pos = length if end < 0 else end
                continue
            if char == ";":
                tokens.append(Token(TokenKind.SEPARATOR, ";", line, column))
                pos += 1
                continue

            if char in DIGITS or (char == "." and pos + 1 < length and source[pos + 1] in DIGITS):
                token, pos = self._number(source, pos, line, column)
                tokens.append(token)
                continue

            if char.isascii() and (char.isalpha() or char == "_"):
                token, pos = self._word(source, pos, line, column)
                tokens.append(token)
                continue

            operator = self._operator(source, pos)
            if operator is not None:
                tokens.append(Token(TokenKind.OPERATOR, operator, line, column))
                pos += len(operator)
                continue

            if char in PUNCTUATION:
                if char in OPENING:
                    depth += 1
                elif depth > 0:
                    depth -= 1
                tokens.append(Token(TokenKind.PUNCT, char, line, column))
                pos += 1
                continue

            raise LexError(f"illegal character {char!r}", line, column)

        tokens.append(Token(TokenKind.EOF, "", line, length - line_start + 1))
        return tokens

    def _number(self, source: str, pos: int, line: int, column: int) -> Tuple[Token, int]:
        match = NUMBER_PATTERN.match(source, pos)
        end = match.end()
        if end < len(source) and (source[end].isalnum() or source[end] in "._"):
            tail = re.match(r"[A-Za-z0-9_.]*", source[end:]).group(0)
            raise LexError(f"malformed number '{match.group(0)}{tail}'", line, column)
        lexeme = match.group(0)
        return Token(TokenKind.NUMBER, lexeme, line, column, float(lexeme)), end

    def _word(self, source: str, pos: int, line: int, column: int) -> Tuple[Token, int]:
        if source.startswith("e[", pos):
            match = BRACKET_BLADE.match(source, pos)
            if match is None:
                raise LexError("malformed blade literal, expected e[i,j,...]", line, column)
            body = match.group(1).strip()
            indices = tuple(int(part) for part in body.split(",")) if body else ()
            return Token(TokenKind.BLADE, match.group(0), line, column, indices), match.end()

        match = IDENT_PATTERN.match(source, pos)
        word = match.group(0)
        if self.dim <= JUXTAPOSED_MAX_DIM and JUXTAPOSED_BLADE.fullmatch(word):
            indices = tuple(int(digit) for digit in word[1:])
            return Token(TokenKind.BLADE, word, line, column, indices), match.end()
        return Token(TokenKind.IDENT, word, line, column), match.end()

    @staticmethod
    def _operator(source: str, pos: int) -> Optional[str]:
        for operator in OPERATORS:
            if source.startswith(operator, pos):
                return operator
        char = source[pos]
        if char in ALIASES:
            return char
        return None


def tokenize(source: str, dim: int) -> List[Token]:
    """Convenience wrapper around :class:`Tokenizer`."""
    return Tokenizer(dim).tokenize(source)
