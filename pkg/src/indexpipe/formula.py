"""Mini-language for linear combinations of columns.

Grammar (whitespace ignored):

    expr := ['-'] term (('+' | '-') term)*
    term := [number '*'] identifier

The optional leading minus is a convenience superset so that every
programmatically built formula prints to parseable text.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import FormulaError, SchemaError
from .pipeline import PipelineContext, register_operation

_NUMBER = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_]\w*")
_WS = re.compile(r"\s*")


@dataclass(frozen=True)
class LinearFormula:
    """A sum of (coefficient, column) terms."""

    terms: tuple[tuple[float, str], ...]

    def __str__(self) -> str:
        parts: list[str] = []
        for i, (coef, name) in enumerate(self.terms):
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            body = name if mag == 1.0 else f"{mag!r}*{name}"
            if i == 0:
                parts.append(body if coef >= 0 else f"-{body}")
            else:
                parts.append(f"{sign} {body}")
        return " ".join(parts)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, pattern: re.Pattern) -> str | None:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if m is None:
            return None
        self.pos = m.end()
        return m.group(0)


def parse_formula(text: str) -> LinearFormula:
    """Parse formula text; raises FormulaError with the failing position."""
    s = _Scanner(text)
    terms: list[tuple[float, str]] = []
    if s.at_end():
        raise FormulaError("empty formula", s.pos)

    sign = 1.0
    if s.peek() == "-":
        s.pos += 1
        sign = -1.0
    while True:
        coef = sign
        num = s.take(_NUMBER)
        if num is not None:
            if s.peek() != "*":
                raise FormulaError("expected '*' after coefficient", s.pos)
            s.pos += 1
            coef = sign * float(num)
        ident = s.take(_IDENT)
        if ident is None:
            raise FormulaError("expected identifier", s.pos)
        terms.append((coef, ident))
        if s.at_end():
            break
        op = s.peek()
        if op not in "+-":
            raise FormulaError(f"expected '+' or '-', found {op!r}", s.pos)
        s.pos += 1
        sign = 1.0 if op == "+" else -1.0
    return LinearFormula(tuple(terms))


@register_operation("evaluate_formula")
def evaluate_formula(ctx: PipelineContext, formula, new_name: str) -> PipelineContext:
    """Evaluate a linear formula rowwise into a new column.

    ``formula`` may be formula text, a LinearFormula, or a list of
    (coefficient, column) pairs (the replayable record form).
    """
    if isinstance(formula, str):
        formula = parse_formula(formula)
    elif not isinstance(formula, LinearFormula):
        formula = LinearFormula(tuple((float(c), str(n)) for c, n in formula))
    unknown = [name for _, name in formula.terms if name not in ctx.table.columns]
    if unknown:
        raise SchemaError(f"formula references unknown column(s): {unknown}")
    total = np.zeros(len(ctx.table), dtype=float)
    for coef, name in formula.terms:
        total = total + coef * ctx.table[name].to_numpy(dtype=float)
    table = ctx.table.copy()
    table[new_name] = total
    return ctx.with_table(
        table, module="dimension-reduction", operation="evaluate_formula",
        formula=[[c, n] for c, n in formula.terms], new_name=new_name,
    )
