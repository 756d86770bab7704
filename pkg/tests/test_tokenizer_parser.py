"""
Tests for the expression-language tokenizer and parser.
"""
import numpy as np
import pytest

from cli.parser import (
    Assignment, BinaryOp, BladeLiteral, FunctionCall, Literal, MatrixLiteral,
    MAX_NESTING, Program, UnaryNeg, Variable, parse_source
)
from cli.tokenizer import TokenKind, tokenize
from utils.error_handler import LexError, ParseError


def kinds(tokens):
    return [(t.kind, t.lexeme) for t in tokens if t.kind is not TokenKind.EOF]


def single_expression(source, dim=3):
    program = parse_source(source, dim)
    assert len(program.statements) == 1
    return program.statements[0].node


class TestTokenizer:
    """Test lexing of the expression language."""

    def test_wedge_of_blades(self):
        """e1^e2 lexes to blade, operator, blade."""
        assert kinds(tokenize("e1^e2", 3)) == [
            (TokenKind.BLADE, "e1"), (TokenKind.OPERATOR, "^"), (TokenKind.BLADE, "e2")
        ]

    def test_function_call_and_number(self):
        """det(T) + 1.5 lexes to six tokens."""
        tokens = tokenize("det(T) + 1.5", 3)
        assert kinds(tokens) == [
            (TokenKind.IDENT, "det"), (TokenKind.PUNCT, "("), (TokenKind.IDENT, "T"),
            (TokenKind.PUNCT, ")"), (TokenKind.OPERATOR, "+"), (TokenKind.NUMBER, "1.5"),
        ]
        assert tokens[5].value == 1.5

    def test_bracket_blade_in_high_dimension(self):
        """e[2,11] is one blade token at n=12."""
        tokens = tokenize("e[2,11]", 12)
        assert len(tokens) == 2
        assert tokens[0].kind is TokenKind.BLADE
        assert tokens[0].value == (2, 11)

    def test_juxtaposed_blade_digits(self):
        """e123 lists one index per digit."""
        assert tokenize("e123", 3)[0].value == (1, 2, 3)

    def test_juxtaposed_form_is_an_identifier_above_nine(self):
        """e12 names a variable when n ≥ 10."""
        token = tokenize("e12", 12)[0]
        assert token.kind is TokenKind.IDENT

    def test_longest_match_operators(self):
        """<< and >> are single tokens."""
        assert [t.lexeme for t in tokenize("a<<b>>c", 3)[:-1]] == ["a", "<<", "b", ">>", "c"]

    def test_aliases(self):
        """· and ∧ stand for * and ^."""
        tokens = tokenize("2·e1∧e2", 3)
        assert [t.text for t in tokens[:-1]] == ["2", "*", "e1", "^", "e2"]

    @pytest.mark.parametrize("source,value", [
        ("1", 1.0), ("2.5", 2.5), (".5", 0.5), ("3.", 3.0), ("1e-3", 1e-3), ("2.5E+2", 250.0),
    ])
    def test_number_forms(self, source, value):
        """Integer, decimal and exponent forms are accepted."""
        token = tokenize(source, 2)[0]
        assert token.kind is TokenKind.NUMBER
        assert token.value == pytest.approx(value)

    def test_positions_are_one_based(self):
        """Tokens carry line and column."""
        tokens = tokenize("a\n  bb", 2)
        assert (tokens[0].line, tokens[0].column) == (1, 1)
        assert tokens[1].kind is TokenKind.SEPARATOR
        assert (tokens[2].line, tokens[2].column) == (2, 3)

    def test_comments_are_skipped(self):
        """# runs to the end of the line."""
        assert kinds(tokenize("e1 # the first vector", 3)) == [(TokenKind.BLADE, "e1")]

    def test_newlines_inside_brackets_do_not_separate(self):
        """A parenthesized expression may span lines."""
        separators = [t for t in tokenize("(1 +\n 2)\n3", 2) if t.kind is TokenKind.SEPARATOR]
        assert len(separators) == 1

    def test_illegal_character(self):
        """Unknown characters raise with their position."""
        with pytest.raises(LexError) as excinfo:
            tokenize("e1 + $", 3)
        assert (excinfo.value.line, excinfo.value.column) == (1, 6)

    @pytest.mark.parametrize("source", ["1.2.3", "12abc", "3e"])
    def test_malformed_numbers(self, source):
        """Numbers glued to letters or dots are rejected."""
        with pytest.raises(LexError, match="malformed number"):
            tokenize(source, 3)

    def test_malformed_bracket_blade(self):
        """e[ must close with a list of integers."""
        with pytest.raises(LexError):
            tokenize("e[1,x]", 12)


class TestParserPrecedence:
    """Test operator precedence and associativity."""

    def test_wedge_binds_tighter_than_sum(self):
        """a + b ^ c is a + (b∧c)."""
        node = single_expression("a + b ^ c")
        assert isinstance(node, BinaryOp) and node.op == "+"
        assert isinstance(node.right, BinaryOp) and node.right.op == "^"

    def test_wedge_binds_tighter_than_contraction(self):
        """e1 << e1 ^ e2 is e1 ⌟ (e1∧e2)."""
        node = single_expression("e1 << e1 ^ e2")
        assert node.op == "<<"
        assert isinstance(node.left, BladeLiteral)
        assert node.right.op == "^"

    def test_scalar_product_binds_tighter_than_sum(self):
        """x | y + z is (x·y) + z."""
        node = single_expression("x | y + z")
        assert node.op == "+"
        assert node.left.op == "|"
        assert isinstance(node.right, Variable)

    def test_geometric_product_binds_tightest(self):
        """a ^ b * c is a ∧ (bc)."""
        node = single_expression("a ^ b * c")
        assert node.op == "^"
        assert node.right.op == "*"

    def test_left_associativity(self):
        """a - b - c is (a − b) − c."""
        node = single_expression("a - b - c")
        assert node.op == "-"
        assert node.left.op == "-"
        assert node.right.name == "c"

    def test_unary_minus_binds_tighter_than_product(self):
        """-a * b is (−a)b."""
        node = single_expression("-a * b")
        assert node.op == "*"
        assert isinstance(node.left, UnaryNeg)

    def test_parentheses_override(self):
        """(a + b) ^ c keeps the sum together."""
        node = single_expression("(a + b) ^ c")
        assert node.op == "^"
        assert node.left.op == "+"

    def test_unary_plus_is_dropped(self):
        """+x parses to x."""
        assert isinstance(single_expression("+x"), Variable)


class TestParserStatements:
    """Test statements, calls and matrix literals."""

    def test_assignment(self):
        """T = mat[[0,-1],[1,0]] binds a matrix literal."""
        node = single_expression("T = mat[[0,-1],[1,0]]", dim=2)
        assert isinstance(node, Assignment)
        assert node.name == "T"
        assert isinstance(node.expr, MatrixLiteral)
        assert len(node.expr.rows) == 2
        assert isinstance(node.expr.rows[0][1], UnaryNeg)

    def test_statement_separators(self):
        """; and newlines separate statements; empty statements are skipped."""
        program = parse_source("a = 1;; b = 2\n\na + b", 2)
        assert len(program.statements) == 3
        assert [s.is_assignment for s in program.statements] == [True, True, False]

    def test_statement_text(self):
        """Each statement keeps its source text."""
        program = parse_source("T = mat[[1,0],[0,1]]; det(T)", 2)
        assert [s.text for s in program.statements] == ["T = mat[[1,0],[0,1]]", "det(T)"]

    def test_function_call_arguments(self):
        """proj(x, 1, 2) has three arguments."""
        node = single_expression("proj(x, 1, 2)")
        assert isinstance(node, FunctionCall)
        assert node.name == "proj"
        assert len(node.args) == 3
        assert isinstance(node.args[1], Literal)

    def test_call_without_arguments(self):
        """f() is a call with no arguments."""
        assert single_expression("f()").args == ()

    def test_empty_program(self):
        """Blank input and comments parse to no statements."""
        assert parse_source("  \n# nothing\n", 2).statements == []


class TestParserErrors:
    """Test diagnostics: spans and expectation sets."""

    def test_incomplete_expression(self):
        """A trailing operator reports what could follow."""
        with pytest.raises(ParseError) as excinfo:
            parse_source("1 +", 2)
        error = excinfo.value
        assert "incomplete expression" in error.message
        assert "number" in error.expected
        assert "blade" in error.expected
        assert (error.line, error.column) == (1, 4)

    def test_unexpected_token(self):
        """Two operands in a row name the offender."""
        with pytest.raises(ParseError) as excinfo:
            parse_source("e1 e2", 2)
        assert (excinfo.value.line, excinfo.value.column) == (1, 4)
        assert "';'" in excinfo.value.expected

    def test_unbalanced_open_parenthesis(self):
        """An unclosed parenthesis points back at its opener."""
        with pytest.raises(ParseError, match=r"unbalanced '\(' opened at 1:1"):
            parse_source("(1 + 2", 2)

    def test_unbalanced_close_parenthesis(self):
        """A stray closing parenthesis is reported."""
        with pytest.raises(ParseError, match="unbalanced"):
            parse_source("1 + 2)", 2)

    def test_unclosed_call(self):
        """A call missing its ')' is unbalanced."""
        with pytest.raises(ParseError, match="unbalanced"):
            parse_source("det(T", 2)

    def test_bad_argument_separator(self):
        """Arguments are separated by commas."""
        with pytest.raises(ParseError) as excinfo:
            parse_source("proj(x 1)", 2)
        assert excinfo.value.expected == ["')'", "','"]

    def test_ragged_matrix(self):
        """Matrix rows must have equal lengths."""
        with pytest.raises(ParseError, match="different lengths"):
            parse_source("mat[[1,2],[3]]", 2)

    def test_error_on_second_line(self):
        """Spans count lines."""
        with pytest.raises(ParseError) as excinfo:
            parse_source("a = 1\nb = * 2", 2)
        assert (excinfo.value.line, excinfo.value.column) == (2, 5)

    @pytest.mark.parametrize("source", [
        "(" * (MAX_NESTING + 10) + "1" + ")" * (MAX_NESTING + 10),
        "-" * (MAX_NESTING + 10) + "1",
        "f(" * (MAX_NESTING + 10) + "1" + ")" * (MAX_NESTING + 10),
    ])
    def test_deep_nesting_is_a_diagnostic(self, source):
        """Pathological nesting is reported instead of overflowing the stack."""
        with pytest.raises(ParseError, match="nested too deeply"):
            parse_source(source, 2)


class TestParserFuzzing:
    """Every input produces a program or a spanned diagnostic."""

    VOCABULARY = [
        "e1", "e12", "e[1,2]", "x", "T", "det", "mat", "proj", "1.5", "2", "0",
        "+", "-", "*", "^", "|", "<<", ">>", "=", "·", "(", ")", "[", "]", ",",
        ";", "\n", "#", "$", "1.2.3",
    ]

    def test_random_token_sequences(self):
        """Random token soups never crash the front end."""
        rng = np.random.default_rng(7)
        outcomes = {"program": 0, "error": 0}
        for _ in range(10_000):
            length = int(rng.integers(1, 16))
            source = " ".join(rng.choice(self.VOCABULARY, size=length))
            try:
                result = parse_source(source, 3)
            except (LexError, ParseError) as exc:
                assert exc.line >= 1 and exc.column >= 1
                outcomes["error"] += 1
            else:
                assert isinstance(result, Program)
                outcomes["program"] += 1
        assert outcomes["program"] > 0
        assert outcomes["error"] > 0
