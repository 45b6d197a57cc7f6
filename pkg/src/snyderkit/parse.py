"""Recursive-descent parser for series expressions in ``u``.

Grammar::

    expr     := ["-"] term (("+" | "-") term)*
    term     := factor (("*" | "/") factor)*
    factor   := base ("^" INT)?
    base     := RATIONAL | "u" | "(" expr ")" | "sqrt" "(" expr ")"
    RATIONAL := INT ("/" INT)?

Whitespace is insignificant.  Evaluation happens while parsing, directly in
:class:`~snyderkit.series.TruncatedSeries` arithmetic at the requested order.
Error positions are 1-based columns; end of input is ``len(text) + 1``.
"""
from __future__ import annotations

import re

from gmpy2 import mpq

from .series import TruncatedSeries

__all__ = ["SeriesSyntaxError", "SeriesSemanticError", "parse_series"]

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|(u)|([-+*/^()]))")


class SeriesSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"syntax error at offset {position}: {message}")
        self.position = position


class SeriesSemanticError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"error at offset {position}: {message}")
        self.position = position


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise SeriesSyntaxError(f"unexpected character {text[col - 1]!r}", col)
        start = m.start(m.lastindex) + 1
        kind = ("INT", "SQRT", "U", "OP")[m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("EOF", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str, order: int):
        self.toks = _tokenize(text)
        self.i = 0
        self.order = order

    @property
    def tok(self):
        return self.toks[self.i]

    def _accept(self, value):
        if self.tok[1] == value and self.tok[0] in ("OP", "SQRT", "U"):
            self.i += 1
            return True
        return False

    def _expect(self, value):
        if not self._accept(value):
            kind, got, pos = self.tok
            found = "end of input" if kind == "EOF" else repr(got)
            raise SeriesSyntaxError(f"expected {value!r}, found {found}", pos)

    def parse(self) -> TruncatedSeries:
        value = self.expr()
        if self.tok[0] != "EOF":
            raise SeriesSyntaxError(f"unexpected {self.tok[1]!r}", self.tok[2])
        return value

    def expr(self):
        negate = self._accept("-")
        value = self.term()
        if negate:
            value = -value
        while True:
            if self._accept("+"):
                value = value + self.term()
            elif self._accept("-"):
                value = value - self.term()
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            if self._accept("*"):
                value = value * self.factor()
            elif self.tok[1] == "/" and self.tok[0] == "OP":
                pos = self.toks[self.i + 1][2]
                self.i += 1
                divisor = self.factor()
                if not divisor.coeffs[0]:
                    raise SeriesSemanticError(
                        "division by a series with zero constant term", pos
                    )
                value = value / divisor
            else:
                return value

    def factor(self):
        value = self.base()
        if self._accept("^"):
            kind, text, pos = self.tok
            if kind != "INT":
                raise SeriesSyntaxError("exponent must be a nonnegative integer", pos)
            self.i += 1
            value = value ** int(text)
        return value

    def base(self):
        kind, text, pos = self.tok
        if kind == "INT":
            self.i += 1
            num = int(text)
            # INT "/" INT binds as one rational literal
            if self.tok[1] == "/" and self.toks[self.i + 1][0] == "INT":
                den_tok = self.toks[self.i + 1]
                if int(den_tok[1]) == 0:
                    raise SeriesSemanticError("division by zero", den_tok[2])
                self.i += 2
                return TruncatedSeries.constant(mpq(num, int(den_tok[1])), self.order)
            return TruncatedSeries.constant(num, self.order)
        if kind == "U":
            self.i += 1
            return TruncatedSeries.u(self.order)
        if self._accept("("):
            value = self.expr()
            self._expect(")")
            return value
        if kind == "SQRT":
            self.i += 1
            self._expect("(")
            arg_pos = self.tok[2]
            arg = self.expr()
            self._expect(")")
            try:
                return arg.sqrt()
            except ValueError as exc:
                raise SeriesSemanticError(str(exc), arg_pos) from None
        found = "end of input" if kind == "EOF" else repr(text)
        raise SeriesSyntaxError(f"expected a number, 'u', '(' or 'sqrt', found {found}", pos)


def parse_series(text: str, order: int) -> TruncatedSeries:
    """Evaluate ``text`` as a series in ``u`` modulo ``u^(order+1)``."""
    if order < 0:
        raise ValueError("order must be >= 0")
    return _Parser(text, order).parse()
