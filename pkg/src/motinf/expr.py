"""Parser for GW expressions such as ``2<1> - <-1>``, ``H*<u>`` or ``n_eps(5) + 3``.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary | atom)*        # juxtaposition "2H" multiplies
    unary  := "-" unary | atom
    atom   := INT | "<" ["-"] INT ">" | "<u>" | "H" | "n_eps(" INT ")" | "(" expr ")"

A bare integer k stands for k<1>. ``<u>`` is the fixed non-square class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import ParseError, ValidationError, WrongField
from .gw import Field, GwElement, SquareClass, hyperbolic, n_epsilon
from .gw_matrix import GwMatrix

_TOKEN = re.compile(r"\s*(?:(n_eps)|(\d+)|([-+*()<>Hu]))")


@dataclass(frozen=True)
class _Tok:
    kind: str  # "int", "sym", "end"
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("sym", "n_eps", start))
        elif m.group(2):
            toks.append(_Tok("int", m.group(2), start))
        else:
            toks.append(_Tok("sym", m.group(3), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, field: Field):
        self.text = text
        self.field = field
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> _Tok:
        if self.cur.value != value or self.cur.kind == "end":
            raise ParseError(f"expected {value!r}", self.cur.pos, self.text)
        return self.take()

    def fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise ParseError(message, tok.pos, self.text)

    def parse(self) -> GwElement:
        if self.cur.kind == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.cur.kind != "end":
            self.fail(f"unexpected {self.cur.value!r}")
        return value

    def expr(self) -> GwElement:
        value = self.term()
        while self.cur.value in ("+", "-") and self.cur.kind == "sym":
            op = self.take().value
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _starts_atom(self) -> bool:
        return self.cur.kind == "sym" and self.cur.value in ("<", "H", "n_eps", "(")

    def term(self) -> GwElement:
        value = self.unary()
        while True:
            if self.cur.kind == "sym" and self.cur.value == "*":
                self.take()
                value = value * self.unary()
            elif self._starts_atom():
                value = value * self.atom()
            else:
                return value

    def unary(self) -> GwElement:
        if self.cur.kind == "sym" and self.cur.value == "-":
            self.take()
            return -self.unary()
        return self.atom()

    def atom(self) -> GwElement:
        tok = self.take()
        if tok.kind == "int":
            return GwElement.one(self.field) * int(tok.value)
        if tok.kind == "end":
            self.fail("unexpected end of expression", tok)
        if tok.value == "H":
            return hyperbolic(self.field)
        if tok.value == "(":
            value = self.expr()
            self.expect(")")
            return value
        if tok.value == "n_eps":
            self.expect("(")
            n = self.take()
            if n.kind != "int":
                self.fail("n_eps needs a non-negative integer", n)
            self.expect(")")
            return n_epsilon(int(n.value), self.field)
        if tok.value == "<":
            return self.bracket(tok)
        self.fail(f"unexpected {tok.value!r}", tok)

    def bracket(self, open_tok: _Tok) -> GwElement:
        if self.cur.value == "u":
            self.take()
            self.expect(">")
            try:
                return GwElement.from_class(SquareClass.nonsquare(self.field))
            except WrongField as exc:
                raise ParseError(str(exc), open_tok.pos, self.text) from None
        sign = 1
        if self.cur.value == "-":
            self.take()
            sign = -1
        n = self.take()
        if n.kind != "int":
            self.fail("expected an integer inside <...>", n)
        self.expect(">")
        try:
            return GwElement.bracket(sign * int(n.value), self.field)
        except ValidationError as exc:
            raise ParseError(str(exc), open_tok.pos, self.text) from None


def parse_gw(text: str, field: Field) -> GwElement:
    """Evaluate a GW expression to its canonical form over ``field``."""
    return _Parser(text, field).parse()


def _entry(value, field: Field, path: str) -> GwElement:
    if isinstance(value, str):
        try:
            return parse_gw(value, field)
        except ParseError as exc:
            raise ValidationError(str(exc), path) from None
    if isinstance(value, int) and not isinstance(value, bool):
        return GwElement.one(field) * value
    if isinstance(value, dict):
        try:
            return GwElement.from_record(value, field)
        except ValidationError as exc:
            raise ValidationError(str(exc), path) from None
    raise ValidationError("entry must be an expression string, integer or element record", path)


def matrix_from_record(rec: dict, field: Field | None = None) -> GwMatrix:
    """Read ``{"field": ..., "entries": [[...], ...]}``.

    Entries are expression strings, integers (k<1>) or element records. An
    explicit ``field`` argument takes precedence over the record's field.
    """
    if not isinstance(rec, dict):
        raise ValidationError("matrix record must be an object")
    if field is None:
        if "field" not in rec:
            raise ValidationError("missing field", "field")
        field = Field.parse(rec["field"])
    rows = rec.get("entries")
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError("entries must be a non-empty list of rows", "entries")
    width = len(rows[0])
    out: list[list[GwElement]] = []
    for i, row in enumerate(rows):
        if len(row) != width or not width:
            raise ValidationError(f"row has {len(row)} entries, expected {width}", f"entries[{i}]")
        out.append([_entry(v, field, f"entries[{i}][{j}]") for j, v in enumerate(row)])
    return GwMatrix.from_rows(field, out)


def format_elements(elems: Sequence[GwElement]) -> str:
    return ", ".join(str(e) for e in elems)
