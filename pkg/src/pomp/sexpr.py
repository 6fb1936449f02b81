"""Tokenizer and reader for LISP-style s-expressions with source spans."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .model import SpecificationError


class ParseError(SpecificationError):
    """Malformed input. ``line`` and ``col`` are 1-based."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"{line}:{col}: " if line else ""
        super().__init__(f"{where}{message}")


@dataclass(eq=False)
class SExpr:
    value: Union[str, list["SExpr"]]
    line: int = 0
    col: int = 0

    @property
    def is_atom(self) -> bool:
        return isinstance(self.value, str)

    @property
    def items(self) -> list["SExpr"]:
        if self.is_atom:
            raise self.error(f"expected a list, found {self.value!r}")
        return self.value

    @property
    def atom(self) -> str:
        if not self.is_atom:
            raise self.error("expected a symbol, found a list")
        return self.value

    def head(self) -> str | None:
        """Lower-cased leading symbol of a list, if any."""
        if self.is_atom or not self.value or not self.value[0].is_atom:
            return None
        return self.value[0].value.lower()

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def to_data(self):
        if self.is_atom:
            return self.value
        return [x.to_data() for x in self.value]

    def __eq__(self, other) -> bool:
        return isinstance(other, SExpr) and self.to_data() == other.to_data()

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, i):
        return self.items[i]

    def __iter__(self) -> Iterator["SExpr"]:
        return iter(self.items)

    def __str__(self) -> str:
        if self.is_atom:
            return self.value
        return "(" + " ".join(str(x) for x in self.value) + ")"


_DELIMS = set("();")


def tokenize(text: str) -> Iterator[tuple[str, int, int]]:
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
        elif ch.isspace():
            col, i = col + 1, i + 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            col, i = col + 1, i + 1
        else:
            start, scol = i, col
            while i < n and not text[i].isspace() and text[i] not in _DELIMS:
                i += 1
            tok = text[start:i]
            col += i - start
            if any(not (c.isprintable()) for c in tok):
                raise ParseError(f"illegal character in token {tok!r}", line, scol)
            yield tok, line, scol


def read_all(text: str) -> list[SExpr]:
    """Read every top-level form in ``text``."""
    stack: list[SExpr] = []
    forms: list[SExpr] = []
    for tok, line, col in tokenize(text):
        if tok == "(":
            stack.append(SExpr([], line, col))
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, col)
            done = stack.pop()
            (stack[-1].value if stack else forms).append(done)
        else:
            atom = SExpr(tok, line, col)
            if stack:
                stack[-1].value.append(atom)
            else:
                forms.append(atom)
    if stack:
        top = stack[-1]
        raise ParseError("unbalanced '(': missing ')'", top.line, top.col)
    return forms


def read(text: str) -> SExpr:
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected exactly one form, found {len(forms)}", 1, 1)
    return forms[0]


def dumps(expr) -> str:
    """Print nested lists/strings (or SExprs) as s-expression text."""
    if isinstance(expr, SExpr):
        expr = expr.to_data()
    if isinstance(expr, str):
        return expr
    return "(" + " ".join(dumps(x) for x in expr) + ")"
