"""Ideal files and coefficient files.

Ideal file::

    # comment
    vars: x > y > z        # precedence, highest first (commas also accepted)
    params: t              # optional; coefficients then live in QQ(t)
    order: lex             # lex or grevlex, default lex
    x^2 - y
    x*y - 1

Coefficient file: one ``name = rational`` per line, ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .groebner import IdealSpec
from .prk import CoefficientSet, PRKSpec
from .ring import MonomialOrder, OrderKind, Polynomial, Symbol, SymbolKind, SymbolTable
from .text import parse_polynomial

__all__ = ["FileFormatError", "IdealFile", "parse_ideal_file", "parse_coefficients"]


class FileFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _names(text: str, line: int) -> list[str]:
    parts = [p.strip() for p in re.split(r"[>,]", text)] if text.strip() else []
    for p in parts:
        if not _IDENT.match(p):
            raise FileFormatError(f"bad identifier {p!r}", line)
    return parts


@dataclass
class IdealFile:
    variables: list[Symbol]
    params: list[Symbol]
    order: MonomialOrder
    polynomials: list[Polynomial]
    table: SymbolTable

    def ideal(self) -> IdealSpec:
        return IdealSpec(tuple(self.polynomials), self.order)

    def parse(self, text: str) -> Polynomial:
        """Parse an extra polynomial in this file's ring."""
        return parse_polynomial(text, self.table, self.order, self.params)


def parse_ideal_file(text: str) -> IdealFile:
    headers: dict[str, tuple[str, int]] = {}
    body: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        m = re.match(r"(vars|params|order)\s*:(.*)\Z", line)
        if m:
            if body:
                raise FileFormatError("header after the first polynomial", lineno)
            if m.group(1) in headers:
                raise FileFormatError(f"duplicate {m.group(1)!r} header", lineno)
            headers[m.group(1)] = (m.group(2).strip(), lineno)
        else:
            body.append((line, lineno))
    if "vars" not in headers:
        raise FileFormatError("missing 'vars:' header")
    var_names = _names(*headers["vars"])
    if not var_names:
        raise FileFormatError("no variables declared", headers["vars"][1])
    par_names = _names(*headers["params"]) if "params" in headers else []
    seen = set()
    for n in var_names + par_names:
        if n in seen:
            raise FileFormatError(f"identifier {n!r} declared twice")
        seen.add(n)
    kind_text, kind_line = headers.get("order", ("lex", None))
    try:
        kind = OrderKind(kind_text)
    except ValueError:
        raise FileFormatError(f"unknown order {kind_text!r} (use lex or grevlex)", kind_line) from None
    table = SymbolTable()
    variables = [table.add(n, SymbolKind.DERIVATIVE) for n in var_names]
    params = [table.add(n, SymbolKind.PARAMETER) for n in par_names]
    order = MonomialOrder(kind, tuple(variables))
    polys = []
    for line, lineno in body:
        polys.append(parse_polynomial(line, table, order, params, line=lineno))
    if not any(polys):
        raise FileFormatError("the file declares no nonzero polynomial")
    return IdealFile(variables, params, order, polys, table)


def parse_coefficients(text: str, spec: PRKSpec) -> CoefficientSet:
    values: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line:
            continue
        m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([-+]?\d+(?:\s*/\s*\d+)?)\Z", line)
        if not m:
            raise FileFormatError("expected 'name = rational'", lineno)
        name = m.group(1)
        if name in values:
            raise FileFormatError(f"{name!r} assigned twice", lineno)
        try:
            values[name] = Fraction(m.group(2).replace(" ", ""))
        except ZeroDivisionError:
            raise FileFormatError("zero denominator", lineno) from None
    try:
        return CoefficientSet.from_names(values, spec)
    except KeyError as exc:
        raise FileFormatError(exc.args[0]) from None
