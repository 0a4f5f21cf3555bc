"""Exact sparse multivariate polynomials.

Two coefficient fields are supported: the rationals ``QQ`` (coefficients are
:class:`fractions.Fraction`) and fields of rational functions in a tuple of
parameter symbols (coefficients are :class:`RationalFunction`).

Internally a polynomial is a dict mapping exponent tuples, aligned with the
precedence of its :class:`MonomialOrder`, to nonzero coefficients.  The
public term view is a list of ``(coefficient, Monomial)`` pairs in strictly
descending order.
"""

from __future__ import annotations

import enum
import heapq
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

import flint

__all__ = [
    "Symbol",
    "SymbolKind",
    "SymbolTable",
    "Monomial",
    "OrderKind",
    "MonomialOrder",
    "QQ",
    "RationalField",
    "RationalFunctionField",
    "RationalFunction",
    "Polynomial",
    "IncompatibleRingError",
    "monomial_compare",
    "ratfun_arith",
]

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class IncompatibleRingError(ValueError):
    """Operands live in different coefficient fields or monomial orders."""


# ---------------------------------------------------------------------------
# symbols


class SymbolKind(str, enum.Enum):
    DERIVATIVE = "derivative-indeterminate"
    RK_COEFFICIENT = "rk-coefficient"
    PARAMETER = "parameter"


@dataclass(frozen=True)
class Symbol:
    id: int
    name: str
    kind: SymbolKind = SymbolKind.PARAMETER

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Symbol({self.name!r})"


class SymbolTable:
    """Registry of named symbols; creation order is the internal total order."""

    def __init__(self, names: Iterable[str] = (), kind: SymbolKind = SymbolKind.PARAMETER):
        self._by_name: dict[str, Symbol] = {}
        self._symbols: list[Symbol] = []
        for name in names:
            self.add(name, kind)

    def add(self, name: str, kind: SymbolKind = SymbolKind.PARAMETER) -> Symbol:
        if not _IDENTIFIER.match(name):
            raise ValueError(f"invalid symbol name {name!r}")
        if name in self._by_name:
            raise ValueError(f"duplicate symbol name {name!r}")
        sym = Symbol(len(self._symbols), name, SymbolKind(kind))
        self._by_name[name] = sym
        self._symbols.append(sym)
        return sym

    def get_or_add(self, name: str, kind: SymbolKind = SymbolKind.PARAMETER) -> Symbol:
        if name in self._by_name:
            return self._by_name[name]
        return self.add(name, kind)

    def __getitem__(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown symbol {name!r}") from None

    def get(self, name: str) -> Symbol | None:
        return self._by_name.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def of_kind(self, kind: SymbolKind) -> list[Symbol]:
        return [s for s in self._symbols if s.kind == kind]


# ---------------------------------------------------------------------------
# monomials and orders


class Monomial:
    """Power product of symbols with positive exponents; empty means 1."""

    __slots__ = ("_items",)

    def __init__(self, exponents: Mapping[Symbol, int] | Iterable[tuple[Symbol, int]] = ()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        merged: dict[Symbol, int] = {}
        for sym, e in items:
            if not isinstance(e, int) or e < 0:
                raise ValueError(f"exponent of {sym} must be a nonnegative integer, got {e!r}")
            if e:
                merged[sym] = merged.get(sym, 0) + e
        self._items = tuple(sorted(merged.items(), key=lambda kv: kv[0].id))

    @property
    def exponents(self) -> dict[Symbol, int]:
        return dict(self._items)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self._items)

    def symbols(self) -> tuple[Symbol, ...]:
        return tuple(s for s, _ in self._items)

    def is_one(self) -> bool:
        return not self._items

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(self._items + other._items)

    def divides(self, other: Monomial) -> bool:
        theirs = dict(other._items)
        return all(theirs.get(s, 0) >= e for s, e in self._items)

    def lcm(self, other: Monomial) -> Monomial:
        exps = dict(self._items)
        for s, e in other._items:
            exps[s] = max(exps.get(s, 0), e)
        return Monomial(exps)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __str__(self) -> str:
        if not self._items:
            return "1"
        return "*".join(s.name if e == 1 else f"{s.name}^{e}" for s, e in self._items)

    def __repr__(self) -> str:
        return f"Monomial({self})"


class OrderKind(str, enum.Enum):
    LEX = "lex"
    GREVLEX = "grevlex"


def _grevlex_key(exps: tuple[int, ...]) -> tuple[int, ...]:
    return (sum(exps),) + tuple(-e for e in reversed(exps))


@dataclass(frozen=True)
class MonomialOrder:
    """Lex or graded reverse lex over ``precedence`` (highest symbol first)."""

    kind: OrderKind
    precedence: tuple[Symbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", OrderKind(self.kind))
        object.__setattr__(self, "precedence", tuple(self.precedence))
        if len(set(self.precedence)) != len(self.precedence):
            raise ValueError("monomial order precedence contains duplicate symbols")

    @classmethod
    def lex(cls, symbols: Iterable[Symbol]) -> MonomialOrder:
        return cls(OrderKind.LEX, tuple(symbols))

    @classmethod
    def grevlex(cls, symbols: Iterable[Symbol]) -> MonomialOrder:
        return cls(OrderKind.GREVLEX, tuple(symbols))

    @property
    def nvars(self) -> int:
        return len(self.precedence)

    @cached_property
    def index(self) -> dict[Symbol, int]:
        return {s: i for i, s in enumerate(self.precedence)}

    @cached_property
    def names(self) -> dict[str, Symbol]:
        return {s.name: s for s in self.precedence}

    @cached_property
    def key(self) -> Callable[[tuple[int, ...]], tuple[int, ...]]:
        """Sort key on exponent tuples; larger key means larger monomial."""
        if self.kind is OrderKind.LEX:
            return tuple
        return _grevlex_key

    @cached_property
    def one(self) -> tuple[int, ...]:
        return (0,) * len(self.precedence)

    def exponents(self, m: Monomial) -> tuple[int, ...]:
        exps = [0] * len(self.precedence)
        for sym, e in m._items:
            try:
                exps[self.index[sym]] = e
            except KeyError:
                raise ValueError(f"symbol {sym.name!r} is not in the monomial order") from None
        return tuple(exps)

    def monomial(self, exps: tuple[int, ...]) -> Monomial:
        return Monomial((s, e) for s, e in zip(self.precedence, exps) if e)

    def compare(self, m1: Monomial, m2: Monomial) -> int:
        k1 = self.key(self.exponents(m1))
        k2 = self.key(self.exponents(m2))
        return (k1 > k2) - (k1 < k2)

    def reversed(self) -> MonomialOrder:
        return MonomialOrder(self.kind, tuple(reversed(self.precedence)))

    def with_kind(self, kind: OrderKind | str) -> MonomialOrder:
        return MonomialOrder(OrderKind(kind), self.precedence)

    def __str__(self) -> str:
        return f"{self.kind.value}({' > '.join(s.name for s in self.precedence)})"


def monomial_compare(m1: Monomial, m2: Monomial, order: MonomialOrder) -> int:
    """Return -1, 0 or 1 as ``m1`` is less than, equal to or greater than ``m2``."""
    return order.compare(m1, m2)


# ---------------------------------------------------------------------------
# coefficient fields


class RationalField:
    """The field QQ; elements are ``Fraction`` instances."""

    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, value: Any) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, str)):
            return Fraction(value)
        if isinstance(value, RationalFunction):
            c = value.constant_value()
            if c is None:
                raise TypeError(f"{value} is not a rational constant")
            return c
        raise TypeError(f"cannot convert {type(value).__name__} to QQ")

    def sum(self, values: Iterable[Fraction]) -> Fraction:
        return sum(values, Fraction(0))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


def _to_fmpq(c: Fraction) -> flint.fmpq:
    return flint.fmpq(c.numerator, c.denominator)


def _from_fmpq(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


class RationalFunctionField:
    """QQ(params): quotients of polynomials over QQ in ``params``.

    The internal parameter order used for sign normalisation is the order of
    ``params`` (callers pass them in symbol-table creation order).
    """

    def __init__(self, params: Sequence[Symbol]):
        params = tuple(params)
        if len(set(params)) != len(params):
            raise ValueError("duplicate parameter symbols")
        self.params = params
        self.index = {s: i for i, s in enumerate(params)}
        names = tuple(s.name for s in params) or ("_unit",)
        self._ctx = flint.fmpq_mpoly_ctx.get(names, "lex")
        self.zero = RationalFunction(self, self._ctx.from_dict({}), self._ctx.constant(1), _canonical=True)
        self.one = RationalFunction(self, self._ctx.constant(1), self._ctx.constant(1), _canonical=True)

    @property
    def name(self) -> str:
        return f"QQ({', '.join(s.name for s in self.params)})"

    @cached_property
    def param_order(self) -> MonomialOrder:
        return MonomialOrder.lex(self.params)

    def __call__(self, value: Any) -> RationalFunction:
        if isinstance(value, RationalFunction):
            if value.field != self:
                raise IncompatibleRingError(f"{value.field.name} element used in {self.name}")
            return value
        if isinstance(value, (int, Fraction, str)):
            c = Fraction(value)
            if not c:
                return self.zero
            return RationalFunction(self, self._ctx.constant(_to_fmpq(c)), self._ctx.constant(1), _canonical=True)
        if isinstance(value, Polynomial):
            return self.from_polynomial(value)
        raise TypeError(f"cannot convert {type(value).__name__} to {self.name}")

    def gen(self, sym: Symbol) -> RationalFunction:
        exps = [0] * len(self._ctx.names())
        exps[self.index[sym]] = 1
        return RationalFunction(
            self, self._ctx.from_dict({tuple(exps): 1}), self._ctx.constant(1), _canonical=True
        )

    def _mpoly(self, poly: Polynomial) -> flint.fmpq_mpoly:
        if poly.field != QQ:
            raise IncompatibleRingError("rational function parts must have QQ coefficients")
        if poly.order.precedence == self.params:
            return self._ctx.from_dict({e: _to_fmpq(c) for e, c in poly._terms.items()})
        pos = []
        for s in poly.order.precedence:
            if s not in self.index:
                raise ValueError(f"symbol {s.name!r} is not a parameter of {self.name}")
            pos.append(self.index[s])
        n = len(self._ctx.names())
        out = {}
        for e, c in poly._terms.items():
            v = [0] * n
            for p, x in zip(pos, e):
                v[p] += x
            out[tuple(v)] = _to_fmpq(c)
        return self._ctx.from_dict(out)

    def from_polynomial(self, num: Polynomial, den: Polynomial | None = None) -> RationalFunction:
        n = self._mpoly(num)
        d = self._mpoly(den) if den is not None else self._ctx.constant(1)
        return RationalFunction(self, n, d)

    def to_polynomial(self, mp: flint.fmpq_mpoly, order: MonomialOrder | None = None) -> Polynomial:
        order = order or self.param_order
        terms = {}
        if order.precedence == self.params:
            for e, c in mp.to_dict().items():
                terms[tuple(map(int, e))] = _from_fmpq(c)
        else:
            pos = [order.index.get(s) for s in self.params]
            for e, c in mp.to_dict().items():
                v = [0] * order.nvars
                for p, x in zip(pos, map(int, e)):
                    if x:
                        if p is None:
                            raise ValueError(f"order lacks parameter {self.params[pos.index(p)].name!r}")
                        v[p] = x
                terms[tuple(v)] = _from_fmpq(c)
        return Polynomial(order, QQ, terms)

    def sum(self, values: Iterable[RationalFunction]) -> RationalFunction:
        """Sum with one gcd per distinct denominator instead of one per term."""
        groups: list[list] = []
        for v in values:
            if v._num.is_zero():
                continue
            for grp in groups:
                if grp[1] == v._den:
                    grp[0] = grp[0] + v._num
                    grp[2] += 1
                    break
            else:
                groups.append([v._num, v._den, 1])
        total = self.zero
        for num, den, count in groups:
            if num.is_zero():
                continue
            part = RationalFunction(self, num, den, _canonical=count == 1)
            total = total + part
        return total

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalFunctionField) and self.params == other.params

    def __hash__(self) -> int:
        return hash(("QQ(...)", self.params))

    def __repr__(self) -> str:
        return self.name


class RationalFunction:
    """Element of a :class:`RationalFunctionField`.

    Kept in lowest terms (full polynomial gcd) with a monic denominator, so
    the representation is canonical; equality is still decided by
    cross-multiplication.
    """

    __slots__ = ("field", "_num", "_den")

    def __init__(self, field: RationalFunctionField, num, den, *, _canonical: bool = False):
        self.field = field
        if _canonical:
            self._num, self._den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self._num, self._den = num, field._ctx.constant(1)
            return
        g = num.gcd(den)
        if not g.is_one():
            num = num / g
            den = den / g
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        self._num, self._den = num, den

    # parts as Polynomials over QQ in the field's parameters
    @property
    def numerator(self) -> Polynomial:
        return self.field.to_polynomial(self._num)

    @property
    def denominator(self) -> Polynomial:
        return self.field.to_polynomial(self._den)

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def __bool__(self) -> bool:
        return not self._num.is_zero()

    def is_polynomial(self) -> bool:
        return self._den.is_one()

    def constant_value(self) -> Fraction | None:
        if self._num.is_constant() and self._den.is_constant():
            if self._num.is_zero():
                return Fraction(0)
            return _from_fmpq(self._num.leading_coefficient()) / _from_fmpq(self._den.leading_coefficient())
        return None

    def _coerce(self, other: Any) -> RationalFunction | None:
        if isinstance(other, RationalFunction):
            if other.field != self.field:
                raise IncompatibleRingError(f"{other.field.name} element combined with {self.field.name}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return None

    def _coprime(self, num, den) -> RationalFunction:
        # num/den already in lowest terms; only the denominator's leading coefficient is fixed
        lc = den.leading_coefficient()
        if lc != 1:
            num = num / lc
            den = den / lc
        return RationalFunction(self.field, num, den, _canonical=True)

    def __add__(self, other: Any) -> RationalFunction:
        # Henrici: only gcds with the common factor of the denominators are needed
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o._num.is_zero():
            return self
        if self._num.is_zero():
            return o
        a, b, c, d = self._num, self._den, o._num, o._den
        if b == d:
            num = a + c
            if num.is_zero():
                return self.field.zero
            if b.is_one():
                return RationalFunction(self.field, num, b, _canonical=True)
            g = num.gcd(b)
            if g.is_one():
                return RationalFunction(self.field, num, b, _canonical=True)
            return self._coprime(num / g, b / g)
        if b.is_one() or d.is_one():
            return RationalFunction(self.field, a * d + c * b, b * d, _canonical=True)
        g = b.gcd(d)
        if g.is_one():
            return RationalFunction(self.field, a * d + c * b, b * d, _canonical=True)
        b1, d1 = b / g, d / g
        num = a * d1 + c * b1
        if num.is_zero():
            return self.field.zero
        h = num.gcd(g)
        if not h.is_one():
            num, g = num / h, g / h
        return self._coprime(num, b1 * d1 * g)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(self.field, -self._num, self._den, _canonical=True)

    def __sub__(self, other: Any) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: Any) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    @staticmethod
    def _cross(a, b, c, d):
        """(a/b) * (c/d) for reduced inputs, cancelling crosswise."""
        if not d.is_one():
            g = a.gcd(d)
            if not g.is_one():
                a, d = a / g, d / g
        if not b.is_one():
            g = c.gcd(b)
            if not g.is_one():
                c, b = c / g, b / g
        return a * c, b * d

    def __mul__(self, other: Any) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self._num.is_zero() or o._num.is_zero():
            return self.field.zero
        num, den = self._cross(self._num, self._den, o._num, o._den)
        return self._coprime(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o._num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        if self._num.is_zero():
            return self.field.zero
        num, den = self._cross(self._num, self._den, o._den, o._num)
        return self._coprime(num, den)

    def __rtruediv__(self, other: Any) -> RationalFunction:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int) -> RationalFunction:
        if n < 0:
            return self.field.one / (self ** -n)
        return RationalFunction(self.field, self._num ** n, self._den ** n, _canonical=True)

    def __eq__(self, other: object) -> bool:
        try:
            o = self._coerce(other)
        except IncompatibleRingError:
            return False
        if o is None:
            return NotImplemented
        return self._num * o._den == o._num * self._den

    def __hash__(self) -> int:
        c = self.constant_value()
        if c is not None:
            return hash(c)
        return hash((str(self._num), str(self._den)))

    def evaluate(self, assignment: Mapping[Symbol, Fraction]) -> Fraction:
        den = self.denominator.evaluate(assignment)
        if not den:
            raise ZeroDivisionError("denominator vanishes at the assignment")
        return self.numerator.evaluate(assignment) / den

    def __str__(self) -> str:
        from .text import render_polynomial

        num = render_polynomial(self.numerator)
        if self._den.is_one():
            return num
        return f"({num})/({render_polynomial(self.denominator)})"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"


def ratfun_arith(op: str, r1: RationalFunction, r2: RationalFunction | None = None) -> RationalFunction:
    """Apply ``op`` in {'add', 'mul', 'div', 'neg'} to rational functions."""
    if op == "neg":
        return -r1
    ops = {"add": operator.add, "mul": operator.mul, "div": operator.truediv}
    if op not in ops:
        raise ValueError(f"unknown rational function operation {op!r}")
    return ops[op](r1, r2)


# ---------------------------------------------------------------------------
# polynomials


def _madd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(map(operator.add, a, b))


def _mdivides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(map(operator.le, a, b))


def _msub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(map(operator.sub, a, b))


Field = Any  # RationalField | RationalFunctionField


class Polynomial:
    """Sparse polynomial over ``field`` in the symbols of ``order``.

    Values are immutable after construction.  Binary operations require both
    operands to share field and order.
    """

    __slots__ = ("order", "field", "_terms", "_sorted")

    def __init__(self, order: MonomialOrder, field: Field = QQ, terms: Mapping[tuple[int, ...], Any] | None = None):
        self.order = order
        self.field = field
        n = order.nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ValueError("exponent tuple does not match the monomial order")
                if c:
                    clean[e] = c
        self._terms = clean
        self._sorted = None

    @classmethod
    def _raw(cls, order: MonomialOrder, field: Field, terms: dict) -> Polynomial:
        p = cls.__new__(cls)
        p.order = order
        p.field = field
        p._terms = terms
        p._sorted = None
        return p

    @classmethod
    def from_terms(cls, order: MonomialOrder, field: Field, terms: Iterable[tuple[Any, Monomial]]) -> Polynomial:
        acc: dict[tuple[int, ...], Any] = {}
        for c, m in terms:
            e = order.exponents(m)
            acc[e] = acc.get(e, field.zero) + field(c)
        return cls(order, field, acc)

    @classmethod
    def constant(cls, order: MonomialOrder, field: Field, value: Any) -> Polynomial:
        c = field(value)
        return cls._raw(order, field, {order.one: c} if c else {})

    @classmethod
    def zero(cls, order: MonomialOrder, field: Field = QQ) -> Polynomial:
        return cls._raw(order, field, {})

    @classmethod
    def variable(cls, order: MonomialOrder, field: Field, sym: Symbol) -> Polynomial:
        e = [0] * order.nvars
        try:
            e[order.index[sym]] = 1
        except KeyError:
            raise ValueError(f"symbol {sym.name!r} is not in the monomial order") from None
        return cls._raw(order, field, {tuple(e): field.one})

    # -- views ------------------------------------------------------------
    def items(self) -> list[tuple[tuple[int, ...], Any]]:
        """Exponent/coefficient pairs in strictly descending order."""
        if self._sorted is None:
            key = self.order.key
            self._sorted = sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    @property
    def terms(self) -> list[tuple[Any, Monomial]]:
        mono = self.order.monomial
        return [(c, mono(e)) for e, c in self.items()]

    def coefficient_map(self) -> dict[tuple[int, ...], Any]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and self.order.one in self._terms)

    def constant_coefficient(self) -> Any:
        return self._terms.get(self.order.one, self.field.zero)

    def coefficient(self, m: Monomial) -> Any:
        return self._terms.get(self.order.exponents(m), self.field.zero)

    @property
    def lm(self) -> tuple[int, ...]:
        """Leading exponent tuple."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        if self._sorted is not None:
            return self._sorted[0][0]
        return max(self._terms, key=self.order.key)

    @property
    def lc(self) -> Any:
        return self._terms[self.lm]

    def leading_term(self) -> tuple[Any, Monomial]:
        e = self.lm
        return self._terms[e], self.order.monomial(e)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def degree_in(self, sym: Symbol) -> int:
        i = self.order.index[sym]
        return max((e[i] for e in self._terms), default=0)

    def symbols(self) -> set[Symbol]:
        used = set()
        for e in self._terms:
            used.update(i for i, x in enumerate(e) if x)
        return {self.order.precedence[i] for i in used}

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: Polynomial) -> None:
        if self.order != other.order:
            raise IncompatibleRingError("polynomials use different monomial orders")
        if self.field != other.field:
            raise IncompatibleRingError(f"polynomials over {self.field.name} and {other.field.name}")

    def _lift(self, other: Any) -> Polynomial | None:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, RationalFunction)):
            return Polynomial.constant(self.order, self.field, other)
        return None

    def __add__(self, other: Any) -> Polynomial:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if len(o._terms) > len(self._terms):
            big, small = o, self
        else:
            big, small = self, o
        out = dict(big._terms)
        for e, c in small._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.order, self.field, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.order, self.field, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> Polynomial:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            v = out.get(e)
            if v is None:
                out[e] = -c
            else:
                v = v - c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Polynomial._raw(self.order, self.field, out)

    def __rsub__(self, other: Any) -> Polynomial:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: Any) -> Polynomial:
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self.scale(self.field(other))
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[tuple[int, ...], Any] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                e = tuple(map(operator.add, ea, eb))
                v = get(e)
                out[e] = ca * cb if v is None else v + ca * cb
        return Polynomial._raw(self.order, self.field, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial exponent must be a nonnegative integer")
        result = Polynomial.constant(self.order, self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c: Any) -> Polynomial:
        c = self.field(c)
        if not c:
            return Polynomial._raw(self.order, self.field, {})
        return Polynomial._raw(self.order, self.field, {e: x * c for e, x in self._terms.items()})

    def mul_term(self, exps: tuple[int, ...], c: Any) -> Polynomial:
        if not c:
            return Polynomial._raw(self.order, self.field, {})
        return Polynomial._raw(
            self.order, self.field, {tuple(map(operator.add, e, exps)): x * c for e, x in self._terms.items()}
        )

    def monic(self) -> Polynomial:
        if not self._terms:
            return self
        lc = self.lc
        if lc == 1:
            return self
        inv = self.field.one / lc
        return Polynomial._raw(self.order, self.field, {e: c * inv for e, c in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction, RationalFunction)):
            return self == Polynomial.constant(self.order, self.field, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.order == other.order and self.field == other.field and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.order, frozenset(self._terms.items())))

    # -- exact division ---------------------------------------------------
    def divexact(self, other: Polynomial) -> Polynomial:
        """Quotient of an exact division; raises ``ValueError`` if inexact."""
        self._check(other)
        if not other._terms:
            raise ZeroDivisionError("division by the zero polynomial")
        key = self.order.key
        dl = other.lm
        dc = other._terms[dl]
        dtail = [(e, c) for e, c in other._terms.items() if e != dl]
        rem = dict(self._terms)
        heap = [(tuple(-k for k in key(e)), e) for e in rem]
        heapq.heapify(heap)
        quo = {}
        while heap:
            _, e = heapq.heappop(heap)
            c = rem.pop(e, None)
            if c is None:
                continue
            if not _mdivides(dl, e):
                raise ValueError("polynomial division is not exact")
            q = _msub(e, dl)
            qc = c / dc
            quo[q] = qc
            for te, tc in dtail:
                m = _madd(te, q)
                v = rem.get(m)
                if v is None:
                    rem[m] = -qc * tc
                    heapq.heappush(heap, (tuple(-k for k in key(m)), m))
                else:
                    v = v - qc * tc
                    if v:
                        rem[m] = v
                    else:
                        del rem[m]
        return Polynomial._raw(self.order, self.field, quo)

    # -- conversion -------------------------------------------------------
    def reorder(self, order: MonomialOrder) -> Polynomial:
        """Same polynomial viewed under ``order`` (must contain all used symbols)."""
        if order == self.order:
            return self
        pos = []
        for s in self.order.precedence:
            pos.append(order.index.get(s))
        n = order.nvars
        out = {}
        for e, c in self._terms.items():
            v = [0] * n
            for p, x in zip(pos, e):
                if x:
                    if p is None:
                        missing = self.order.precedence[[i for i, q in enumerate(pos) if q is None][0]]
                        raise ValueError(f"symbol {missing.name!r} is not in the target order")
                    v[p] = x
            out[tuple(v)] = c
        return Polynomial._raw(order, self.field, out)

    def map_coefficients(self, fn: Callable[[Any], Any], field: Field) -> Polynomial:
        return Polynomial(self.order, field, {e: fn(c) for e, c in self._terms.items()})

    def evaluate(self, assignment: Mapping[Symbol | str, Any]) -> Any:
        """Exact value under ``assignment`` (symbols or names to rationals)."""
        values = {}
        for k, v in assignment.items():
            values[k.name if isinstance(k, Symbol) else k] = v
        vec = []
        used = self.symbols()
        for s in self.order.precedence:
            if s in used:
                if s.name not in values:
                    raise KeyError(f"assignment is missing symbol {s.name!r}")
                vec.append(Fraction(values[s.name]))
            else:
                vec.append(None)
        total = Fraction(0)
        for e, c in self._terms.items():
            if isinstance(c, RationalFunction):
                c = c.evaluate({s: Fraction(values[s.name]) for s in c.field.params if s.name in values})
            t = c
            for x, v in zip(e, vec):
                if x:
                    t = t * v ** x
            total += t
        return total

    def __str__(self) -> str:
        from .text import render_polynomial

        return render_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({self})"
