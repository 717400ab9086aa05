"""
Tokenizer and recursive-descent parser for the expression grammar shared by
polynomials and graded elements.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := NUMBER | NAME | "(" expr ")"

NUMBER is an integer or a `num/den` rational literal and NAME matches
`[A-Za-z][A-Za-z0-9_']*`. Juxtaposition (`2a`, `a b`) is rejected.
"""

from fractions import Fraction

import regex as re

from mfdk.errors import ExpressionError

_token_pattern = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<number>\d+(?:/\d+)?)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_']*)"
    r"|(?P<op>[-+*^()])"
)

name_pattern = re.compile(r"^[A-Za-z][A-Za-z0-9_']*$")


def is_identifier(name):
    return bool(name_pattern.match(name))


def tokenize(text):
    """Returns a list of `(kind, value, column)` tuples, columns 1-based."""
    tokens = []
    position = 0
    while position < len(text):
        match = _token_pattern.match(text, position)
        if match is None:
            raise ExpressionError(
                f"Unexpected character `{text[position]}`", text, position + 1
            )
        kind = match.lastgroup
        if kind != "space":
            tokens.append((kind, match.group(kind), position + 1))
        position = match.end()
    return tokens


def identifiers(text):
    """Identifiers of `text` in order of first appearance."""
    seen = []
    for kind, value, _ in tokenize(text):
        if kind == "name" and value not in seen:
            seen.append(value)
    return seen


def parse_number(literal):
    if "/" in literal:
        num, den = literal.split("/")
        if int(den) == 0:
            raise ExpressionError(f"Zero denominator in `{literal}`")
        return Fraction(int(num), int(den))
    return Fraction(int(literal))


class _Parser(object):
    def __init__(self, text, constant, variable):
        self._text = text
        self._tokens = tokenize(text)
        self._index = 0
        self._constant = constant
        self._variable = variable

    def _peek(self):
        return self._tokens[self._index] if self._index < len(self._tokens) else None

    def _next(self):
        token = self._peek()
        if token is None:
            raise ExpressionError("Unexpected end of expression", self._text, len(self._text) + 1)
        self._index += 1
        return token

    def _fail(self, token, message):
        raise ExpressionError(message, self._text, token[2])

    def parse(self):
        if not self._tokens:
            raise ExpressionError("Empty expression", self._text, 1)
        value = self._expr()
        token = self._peek()
        if token is not None:
            previous = self._tokens[self._index - 1]
            if previous[0] in ("number", "name") or previous[1] == ")":
                if token[0] in ("number", "name") or token[1] == "(":
                    self._fail(token, "Implicit multiplication is not allowed; use `*`")
            self._fail(token, f"Unexpected token `{token[1]}`")
        return value

    def _expr(self):
        value = self._term()
        while self._peek() is not None and self._peek()[1] in ("+", "-"):
            op = self._next()[1]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self):
        value = self._unary()
        while self._peek() is not None and self._peek()[1] == "*":
            self._next()
            value = value * self._unary()
        return value

    def _unary(self):
        token = self._peek()
        if token is not None and token[1] in ("+", "-"):
            self._next()
            operand = self._unary()
            return -operand if token[1] == "-" else operand
        return self._power()

    def _power(self):
        base = self._atom()
        token = self._peek()
        if token is not None and token[1] == "^":
            self._next()
            exponent = self._next()
            if exponent[0] != "number" or "/" in exponent[1]:
                self._fail(exponent, "Exponent must be a nonnegative integer literal")
            return base ** int(exponent[1])
        return base

    def _atom(self):
        token = self._next()
        kind, value, _ = token
        if kind == "number":
            return self._constant(parse_number(value))
        if kind == "name":
            return self._variable(value)
        if value == "(":
            inner = self._expr()
            closing = self._next()
            if closing[1] != ")":
                self._fail(closing, "Expected `)`")
            return inner
        self._fail(token, f"Unexpected token `{value}`")


def parse_expression(text, constant, variable):
    """
    Parses `text` with the callbacks `constant(Fraction)` and `variable(name)`,
    whose results must support `+`, `-`, `*`, unary `-` and `**` by an int.
    """
    if not isinstance(text, str):
        raise ExpressionError(f"Expected an expression string, got {type(text).__name__}")
    return _Parser(text, constant, variable).parse()
