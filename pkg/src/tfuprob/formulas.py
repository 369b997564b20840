"""Boolean formulas over indexed propositions, plus their truth masks.

A formula evaluated against the canonical state ordering (proposition 0 on
the most significant bit, affirmative = 0) yields a boolean mask over the
2^n complete states; the classical engine turns such masks into diagonal
projectors. Grammar, loosest binding first:

    or_expr  := and_expr (('|' | 'or') and_expr)*
    and_expr := unary (('&' | 'and') unary)*
    unary    := ('~' | '!' | 'not') unary | atom
    atom     := name | '(' or_expr ')'

Names are either the short letters p, q, r (propositions 0..2) or indexed
identifiers p0, p1, ... with no upper bound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import FormulaError
from .logic import default_names


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


Formula = Var | Not | And | Or


def truth_mask(formula: Formula, n: int) -> np.ndarray:
    """Boolean mask over the 2^n complete states where the formula holds."""
    states = np.arange(1 << n)
    return _eval(formula, states, n)


def _eval(formula: Formula, states: np.ndarray, n: int) -> np.ndarray:
    if isinstance(formula, Var):
        if not 0 <= formula.index < n:
            raise FormulaError(
                f"proposition index {formula.index} out of range for n={n}"
            )
        return (states >> (n - 1 - formula.index)) & 1 == 0
    if isinstance(formula, Not):
        return ~_eval(formula.operand, states, n)
    if isinstance(formula, And):
        return _eval(formula.left, states, n) & _eval(formula.right, states, n)
    if isinstance(formula, Or):
        return _eval(formula.left, states, n) | _eval(formula.right, states, n)
    raise FormulaError(f"not a formula node: {formula!r}")


def unparse(formula: Formula, names: tuple[str, ...] | None = None) -> str:
    """Render with explicit parentheses around every binary node."""
    if isinstance(formula, Var):
        if names is not None and formula.index < len(names):
            return names[formula.index]
        return f"p{formula.index}"
    if isinstance(formula, Not):
        return "~" + unparse(formula.operand, names)
    if isinstance(formula, And):
        return f"({unparse(formula.left, names)} & {unparse(formula.right, names)})"
    return f"({unparse(formula.left, names)} | {unparse(formula.right, names)})"


_TOKEN = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[()&|~!∧∨¬]))"
)
_OP_ALIASES = {"∧": "&", "∨": "|", "¬": "~", "!": "~"}
_WORD_OPS = {"and": "&", "or": "|", "not": "~"}


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise FormulaError(f"cannot tokenize formula at {text[pos:]!r}")
        pos = m.end()
        tok = m.group("name") or m.group("op")
        low = tok.lower()
        if low in _WORD_OPS:
            tok = _WORD_OPS[low]
        else:
            tok = _OP_ALIASES.get(tok, tok)
        out.append(tok)
    return out


class _Parser:
    def __init__(self, tokens: list[str], names: tuple[str, ...]):
        self.tokens = tokens
        self.pos = 0
        self.names = {nm: i for i, nm in enumerate(names)}

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise FormulaError("formula ended unexpectedly")
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        node = self.or_expr()
        if self.peek() is not None:
            raise FormulaError(f"trailing input from token {self.peek()!r}")
        return node

    def or_expr(self) -> Formula:
        node = self.and_expr()
        while self.peek() == "|":
            self.take()
            node = Or(node, self.and_expr())
        return node

    def and_expr(self) -> Formula:
        node = self.unary()
        while self.peek() == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.take()
        if tok == "(":
            node = self.or_expr()
            if self.take() != ")":
                raise FormulaError("expected ')'")
            return node
        if tok in self.names:
            return Var(self.names[tok])
        m = re.fullmatch(r"p(\d+)", tok)
        if m:
            return Var(int(m.group(1)))
        raise FormulaError(f"unknown proposition name {tok!r}")


def parse(text: str, n: int | None = None, names: tuple[str, ...] | None = None) -> Formula:
    """Parse a formula string. When n is given, indices are range-checked."""
    if names is None:
        names = default_names(n if n is not None else 3)
    node = _Parser(_tokens(text), names).parse()
    if n is not None:
        truth_mask(node, n)  # raises FormulaError on out-of-range indices
    return node
