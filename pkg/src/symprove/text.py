"""Plain-text polynomial syntax.

Grammar (whitespace is insignificant)::

    expr     := ['+' | '-'] term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := rational | identifier ['^' natural] | '(' expr ')'
    rational := integer ['/' positive-integer]

Multiplication is always explicit and the only division allowed is inside a
rational literal.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .ring import (
    QQ,
    MonomialOrder,
    Polynomial,
    RationalFunction,
    RationalFunctionField,
    Symbol,
    SymbolTable,
)

__all__ = ["PolynomialSyntaxError", "parse_polynomial", "render_polynomial", "split_parameters"]


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int, line: int = 1):
        self.message = message
        self.line = line
        self.column = pos + 1
        self.text = text
        super().__init__(f"line {line}, column {self.column}: {message}")


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str, line: int):
    pos = 0
    toks = []
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError(f"unexpected character {text[col]!r}", text, col, line)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, order: MonomialOrder, line: int, declared: set[str]):
        self.declared = declared
        self.text = text
        self.order = order
        self.line = line
        self.toks = _tokenize(text, line)
        self.i = 0

    def error(self, msg: str, tok=None):
        tok = tok or self.toks[self.i]
        raise PolynomialSyntaxError(msg, self.text, tok[2], self.line)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.i -= 1
            self.error(f"expected {op!r}")

    def parse(self) -> Polynomial:
        result = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return result

    def expr(self) -> Polynomial:
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                t = self.term()
                acc = acc + t if tok[1] == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                acc = acc * self.factor()
            elif tok[0] == "op" and tok[1] == "/":
                self.error("division is only allowed inside a rational literal")
            elif tok[0] in ("int", "name") or (tok[0] == "op" and tok[1] == "("):
                self.error("implicit multiplication is not allowed; use '*'")
            else:
                return acc

    def factor(self) -> Polynomial:
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "int":
            value = Fraction(int(val))
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int":
                    self.i -= 1
                    self.error("division is only allowed inside a rational literal")
                if int(den[1]) == 0:
                    self.error("zero denominator in rational literal", den)
                value /= int(den[1])
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.error("exponent on a number literal is not allowed")
            return Polynomial.constant(self.order, QQ, value)
        if kind == "name":
            sym = self.order.names.get(val)
            if sym is None:
                self.i -= 1
                if val in self.declared:
                    self.error(f"identifier {val!r} is not usable in this polynomial ring")
                self.error(f"unknown identifier {val!r}")
            p = Polynomial.variable(self.order, QQ, sym)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                self.take()
                exp_tok = self.peek()
                if exp_tok[0] == "op" and exp_tok[1] == "-":
                    self.error("exponent must be a positive integer")
                exp_tok = self.take()
                if exp_tok[0] != "int":
                    self.i -= 1
                    self.error("exponent must be a positive integer")
                e = int(exp_tok[1])
                if e == 0:
                    self.i -= 1
                    self.error("exponent must be a positive integer")
                p = p ** e
            return p
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                self.error("exponent on a parenthesised expression is not allowed")
            return inner
        self.i -= 1
        self.error("unexpected end of input" if kind == "end" else f"unexpected {val!r}")


def parse_polynomial(
    text: str,
    table: SymbolTable | MonomialOrder,
    order: MonomialOrder | None = None,
    params: Sequence[Symbol] = (),
    *,
    line: int = 1,
) -> Polynomial:
    """Parse ``text`` into a canonical polynomial.

    Identifiers are resolved against ``table``.  Without ``order`` the result
    is over QQ in all table symbols (lex, creation order).  With ``params``,
    those symbols become coefficients: the result lives over QQ(params) in
    the variables of ``order``.
    """
    if isinstance(table, MonomialOrder):
        declared = {s.name for s in table.precedence}
        order = order or table
    else:
        declared = {s.name for s in table}
    if params:
        if order is None:
            raise ValueError("parameters require an explicit variable order")
        full = MonomialOrder.lex(list(order.precedence) + [p for p in params if p not in order.index])
    elif order is not None:
        full = order
    else:
        full = MonomialOrder.lex(list(table))
    poly = _Parser(text, full, line, declared).parse()
    if params:
        return split_parameters(poly, order, RationalFunctionField(params))
    return poly


def split_parameters(poly: Polynomial, order: MonomialOrder, field: RationalFunctionField) -> Polynomial:
    """View a QQ-polynomial in variables+parameters as one over ``field`` in ``order``."""
    if poly.field != QQ:
        raise ValueError("split_parameters expects a polynomial over QQ")
    src = poly.order.precedence
    var_pos = [order.index.get(s) for s in src]
    par_pos = [field.index.get(s) for s in src]
    for s, vp, pp in zip(src, var_pos, par_pos):
        if vp is None and pp is None and poly.degree_in(s):
            raise ValueError(f"symbol {s.name!r} is neither a variable nor a parameter")
    npar = len(field.params)
    groups: dict[tuple[int, ...], dict[tuple[int, ...], Fraction]] = {}
    for e, c in poly.coefficient_map().items():
        ve = [0] * order.nvars
        pe = [0] * npar
        for x, vp, pp in zip(e, var_pos, par_pos):
            if x:
                if vp is not None:
                    ve[vp] = x
                else:
                    pe[pp] = x
        groups.setdefault(tuple(ve), {})[tuple(pe)] = c
    terms = {}
    porder = field.param_order
    for ve, coeffs in groups.items():
        terms[ve] = field.from_polynomial(Polynomial(porder, QQ, coeffs))
    return Polynomial(order, field, terms)


def _fmt_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_monomial(names: Sequence[str], e: Iterable[int]) -> str:
    return "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x)


def _join(terms: Iterable[tuple[Fraction, str]]) -> str:
    out = []
    for i, (c, mono) in enumerate(terms):
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _fmt_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_fmt_rational(a)}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out) or "0"


def render_polynomial(f: Polynomial) -> str:
    """Deterministic text in descending term order; parseable back.

    Over QQ(params), terms follow the ring order; a polynomial coefficient
    is expanded in place, parameters first (``y^2 - t*x``).  Genuine
    fractions render as ``(num)/(den)*monomial``, which is for display only.
    """
    names = [s.name for s in f.order.precedence]
    if isinstance(f.field, RationalFunctionField):
        pnames = [s.name for s in f.field.params]
        terms = []
        for e, c in f.items():
            vm = _fmt_monomial(names, e)
            if c.is_polynomial():
                for pe, pc in c.numerator.items():
                    pm = _fmt_monomial(pnames, pe)
                    terms.append((pc, "*".join(x for x in (pm, vm) if x)))
                continue
            num, sign = c.numerator, Fraction(1)
            if len(num) == 1 and num.lc < 0:
                num, sign = -num, Fraction(-1)
            frac = f"({render_polynomial(num)})/({render_polynomial(c.denominator)})"
            terms.append((sign, f"{frac}*{vm}" if vm else frac))
        return _join(terms)
    return _join((c, _fmt_monomial(names, e)) for e, c in f.items())


def render_rational_function(r: RationalFunction) -> tuple[str, str]:
    return render_polynomial(r.numerator), render_polynomial(r.denominator)
