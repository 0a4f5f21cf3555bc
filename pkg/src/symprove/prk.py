"""Polynomial systems attached to s-stage partitioned Runge-Kutta methods.

For a method specification this module builds

* the variational system: the linear equations linking the derivatives of
  the numerical solution and of the stage quantities with respect to
  ``(p^{n-1}, q^{n-1})``;
* the symplecticity target ``1 - det d(p^n, q^n)/d(p^{n-1}, q^{n-1})``;
* the ideal of the coefficient conditions that make the method symplectic;
* the variable orders used by the two reduction stages.

Symbol names are ASCII: ``a11``/``ah11`` for the two tableaux, ``b1``/``bh1``
for their weights, ``al11``/``alh11`` and ``be1``/``beh1`` for the noise
tableaux, ``h``, ``dB``, ``Hpp1``/``Hpq1``/``Hqp1``/``Hqq1`` for second
derivatives of H at stage 1 (``Ht...`` for the noise Hamiltonian), and
``dp_n_dp``, ``dP_n1_dq``, ``dQt_n2_dp`` ... for derivative indeterminates.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .groebner import IdealSpec
from .ring import (
    QQ,
    MonomialOrder,
    OrderKind,
    Polynomial,
    RationalFunctionField,
    Symbol,
    SymbolKind,
    SymbolTable,
)

__all__ = [
    "Kind",
    "PRKSpec",
    "PRKSymbols",
    "CoefficientSet",
    "symbols_for",
    "build_variational_ideal",
    "build_target",
    "build_symplectic_ideal",
    "default_variable_order",
    "variable_order",
    "random_symplectic_coefficients",
    "ORDER1_STYLES",
]


class Kind(str, enum.Enum):
    DETERMINISTIC = "deterministic"
    STOCHASTIC = "stochastic"

    @classmethod
    def parse(cls, value: str | Kind) -> Kind:
        if isinstance(value, Kind):
            return value
        aliases = {"det": cls.DETERMINISTIC, "stoch": cls.STOCHASTIC}
        return aliases.get(value) or cls(value)


@dataclass(frozen=True)
class PRKSpec:
    stages: int
    kind: Kind = Kind.DETERMINISTIC
    identify_mixed_partials: bool = True

    def __post_init__(self):
        if not isinstance(self.stages, int) or self.stages < 1:
            raise ValueError(f"stage count must be a positive integer, got {self.stages!r}")
        object.__setattr__(self, "kind", Kind.parse(self.kind))

    @property
    def stochastic(self) -> bool:
        return self.kind is Kind.STOCHASTIC


_WRT = ("p", "q")


class PRKSymbols:
    """All symbols of one method specification, created in a fixed order."""

    def __init__(self, spec: PRKSpec):
        self.spec = spec
        s = spec.stages
        sep = "_" if s >= 10 else ""
        self.table = t = SymbolTable()
        D, R, P = SymbolKind.DERIVATIVE, SymbolKind.RK_COEFFICIENT, SymbolKind.PARAMETER

        stage_entities = ["p", "q", "P", "Q"] + (["Pt", "Qt"] if spec.stochastic else [])
        self.deriv: dict[tuple[str, int | None, str], Symbol] = {}
        for ent in ("p", "q"):
            for w in _WRT:
                self.deriv[(ent, None, w)] = t.add(f"d{ent}_n_d{w}", D)
        for ent in stage_entities:
            for i in range(1, s + 1):
                for w in _WRT:
                    self.deriv[(ent, i, w)] = t.add(f"d{ent}_n{i}_d{w}", D)

        self.h = t.add("h", P)
        self.dB = t.add("dB", P) if spec.stochastic else None

        def hparams(prefix: str) -> dict[tuple[str, int], Symbol]:
            out = {}
            for kind in ("pp", "pq", "qp", "qq"):
                for i in range(1, s + 1):
                    if kind == "qp" and spec.identify_mixed_partials:
                        continue
                    out[(kind, i)] = t.add(f"{prefix}{kind}{i}", P)
            if spec.identify_mixed_partials:
                for i in range(1, s + 1):
                    out[("qp", i)] = out[("pq", i)]
            return out

        self.H = hparams("H")
        self.Ht = hparams("Ht") if spec.stochastic else {}

        def matrix(prefix: str) -> list[list[Symbol]]:
            return [[t.add(f"{prefix}{i}{sep}{j}", R) for j in range(1, s + 1)] for i in range(1, s + 1)]

        def vector(prefix: str) -> list[Symbol]:
            return [t.add(f"{prefix}{i}", R) for i in range(1, s + 1)]

        self.a = matrix("a")
        self.ah = matrix("ah")
        self.b = vector("b")
        self.bh = vector("bh")
        if spec.stochastic:
            self.al = matrix("al")
            self.alh = matrix("alh")
            self.be = vector("be")
            self.beh = vector("beh")
        else:
            self.al = self.alh = self.be = self.beh = None

    @property
    def derivatives(self) -> list[Symbol]:
        return self.table.of_kind(SymbolKind.DERIVATIVE)

    @property
    def coefficients(self) -> list[Symbol]:
        return self.table.of_kind(SymbolKind.RK_COEFFICIENT)

    @property
    def parameters(self) -> list[Symbol]:
        """h, dB and the Hamiltonian second derivatives."""
        return self.table.of_kind(SymbolKind.PARAMETER)

    def d(self, entity: str, stage: int | None, wrt: str) -> Symbol:
        return self.deriv[(entity, stage, wrt)]

    def stage1_field(self) -> RationalFunctionField:
        return _field(tuple(s for s in self.table if s.kind != SymbolKind.DERIVATIVE))

    def stage2_field(self) -> RationalFunctionField:
        return _field(tuple(self.parameters))


@lru_cache(maxsize=None)
def _field(params: tuple[Symbol, ...]) -> RationalFunctionField:
    return RationalFunctionField(params)


@lru_cache(maxsize=None)
def symbols_for(spec: PRKSpec) -> PRKSymbols:
    return PRKSymbols(spec)


# ---------------------------------------------------------------------------
# variable orders

ORDER1_STYLES = ("paper", "reversed", "grevlex", "det-paper", "stoch-paper")


def _det_pattern(sy: PRKSymbols) -> list[Symbol]:
    s = sy.spec.stages
    desc = range(s, 0, -1)
    out = [sy.d("p", None, "p"), sy.d("p", None, "q"), sy.d("q", None, "p"), sy.d("q", None, "q")]
    ents = ["P", "Q"] + (["Pt", "Qt"] if sy.spec.stochastic else []) + ["p", "q"]
    for ent in ents:
        for w in _WRT:
            out.extend(sy.d(ent, i, w) for i in desc)
    return out


def _stoch_pattern(sy: PRKSymbols) -> list[Symbol]:
    s = sy.spec.stages
    desc, asc = range(s, 0, -1), range(1, s + 1)
    out = []
    for ent in ("p", "q"):
        for w in _WRT:
            out.extend(sy.d(ent, i, w) for i in desc)
    for ent in ["P", "Q"] + (["Pt", "Qt"] if sy.spec.stochastic else []):
        for w in _WRT:
            out.extend(sy.d(ent, i, w) for i in asc)
    out += [sy.d("p", None, "p"), sy.d("p", None, "q"), sy.d("q", None, "p"), sy.d("q", None, "q")]
    return out


def _stage2_pattern(sy: PRKSymbols) -> list[Symbol]:
    s = sy.spec.stages
    desc = range(s - 1, -1, -1)
    pairs = [(i, j) for i in desc for j in desc]
    if not sy.spec.stochastic:
        return (
            [sy.bh[i] for i in desc]
            + [sy.b[i] for i in desc]
            + [sy.ah[i][j] for i, j in pairs]
            + [sy.a[i][j] for i, j in pairs]
        )
    out = []
    for i in desc:
        out += [sy.be[i], sy.b[i]]
    for i in desc:
        out += [sy.beh[i], sy.bh[i]]
    for i, j in pairs:
        out += [sy.al[i][j], sy.a[i][j]]
    for i, j in pairs:
        out += [sy.alh[i][j], sy.ah[i][j]]
    return out


def default_variable_order(spec: PRKSpec, stage: int) -> MonomialOrder:
    """Lex order used for stage ``stage`` (1: derivatives, 2: coefficients)."""
    sy = symbols_for(spec)
    if stage == 1:
        pattern = _stoch_pattern(sy) if spec.stochastic else _det_pattern(sy)
        return MonomialOrder.lex(pattern)
    if stage == 2:
        return MonomialOrder.lex(_stage2_pattern(sy))
    raise ValueError(f"stage must be 1 or 2, got {stage!r}")


def variable_order(spec: PRKSpec, stage: int, style: str = "paper", kind: str | OrderKind | None = None) -> MonomialOrder:
    """Named variants of the default orders.

    Stage 1 styles: ``paper`` (the default pattern for the spec's kind),
    ``det-paper`` / ``stoch-paper`` (either pattern regardless of kind),
    ``reversed`` and ``grevlex`` (paper precedence, graded reverse lex).
    Stage 2 styles: ``paper`` and ``reversed``; ``kind`` selects lex or grevlex.
    """
    if stage == 1:
        sy = symbols_for(spec)
        if style == "det-paper":
            order = MonomialOrder.lex(_det_pattern(sy))
        elif style == "stoch-paper":
            order = MonomialOrder.lex(_stoch_pattern(sy))
        elif style in ("paper", "reversed", "grevlex"):
            order = default_variable_order(spec, 1)
            if style == "reversed":
                order = order.reversed()
            elif style == "grevlex":
                order = order.with_kind(OrderKind.GREVLEX)
        else:
            raise ValueError(f"unknown stage-1 order style {style!r}")
    elif stage == 2:
        order = default_variable_order(spec, 2)
        if style == "reversed":
            order = order.reversed()
        elif style != "paper":
            raise ValueError(f"unknown stage-2 order style {style!r}")
    else:
        raise ValueError(f"stage must be 1 or 2, got {stage!r}")
    if kind is not None:
        order = order.with_kind(kind)
    return order


# ---------------------------------------------------------------------------
# systems


class _Linear:
    """Builder for polynomials linear in the variables of ``order``."""

    def __init__(self, order: MonomialOrder, field: RationalFunctionField):
        self.order = order
        self.field = field

    def __call__(self, constant=0, *terms) -> Polynomial:
        acc = {}
        one = self.order.one
        c = self.field(constant) if not hasattr(constant, "field") else constant
        if c:
            acc[one] = c
        for coeff, sym in terms:
            e = list(one)
            e[self.order.index[sym]] = 1
            e = tuple(e)
            acc[e] = acc.get(e, self.field.zero) + coeff
        return Polynomial(self.order, self.field, acc)


def build_variational_ideal(spec: PRKSpec, order: MonomialOrder | None = None) -> IdealSpec:
    """Stage-1 system: ``4 + 8s`` (deterministic) or ``4 + 12s`` linear polynomials."""
    sy = symbols_for(spec)
    order = order or default_variable_order(spec, 1)
    K = sy.stage1_field()
    lin = _Linear(order, K)
    g = K.gen
    h = g(sy.h)
    one = K.one
    s = spec.stages
    S = range(1, s + 1)
    d = sy.d
    gens: list[Polynomial] = []

    if not spec.stochastic:
        for w in _WRT:
            unit = one if w == "p" else K.zero
            gens.append(lin(-unit, (one, d("p", None, w)), *[(-h * g(sy.b[i - 1]), d("p", i, w)) for i in S]))
        for w in _WRT:
            unit = one if w == "q" else K.zero
            gens.append(lin(-unit, (one, d("q", None, w)), *[(-h * g(sy.bh[i - 1]), d("q", i, w)) for i in S]))
        for i in S:
            Hpp, Hpq, Hqp, Hqq = (g(sy.H[(k, i)]) for k in ("pp", "pq", "qp", "qq"))
            for w in _WRT:
                gens.append(lin(0, (one, d("p", i, w)), (Hqp, d("P", i, w)), (Hqq, d("Q", i, w))))
            for w in _WRT:
                gens.append(lin(0, (one, d("q", i, w)), (-Hpp, d("P", i, w)), (-Hpq, d("Q", i, w))))
            for w in _WRT:
                unit = one if w == "p" else K.zero
                gens.append(
                    lin(-unit, (one, d("P", i, w)), *[(-h * g(sy.a[i - 1][j - 1]), d("p", j, w)) for j in S])
                )
            for w in _WRT:
                unit = one if w == "q" else K.zero
                gens.append(
                    lin(-unit, (one, d("Q", i, w)), *[(-h * g(sy.ah[i - 1][j - 1]), d("q", j, w)) for j in S])
                )
        return IdealSpec(tuple(gens), order)

    dB = g(sy.dB)
    for w in _WRT:
        unit = one if w == "p" else K.zero
        gens.append(
            lin(
                -unit,
                (one, d("p", None, w)),
                *[(h * g(sy.b[i - 1]), d("P", i, w)) for i in S],
                *[(dB * g(sy.be[i - 1]), d("Pt", i, w)) for i in S],
            )
        )
    for w in _WRT:
        unit = one if w == "q" else K.zero
        gens.append(
            lin(
                -unit,
                (one, d("q", None, w)),
                *[(-h * g(sy.bh[i - 1]), d("Q", i, w)) for i in S],
                *[(-dB * g(sy.beh[i - 1]), d("Qt", i, w)) for i in S],
            )
        )
    for i in S:
        for w in _WRT:
            unit = one if w == "p" else K.zero
            gens.append(
                lin(
                    -unit,
                    (one, d("p", i, w)),
                    *[(h * g(sy.a[i - 1][j - 1]), d("P", j, w)) for j in S],
                    *[(dB * g(sy.al[i - 1][j - 1]), d("Pt", j, w)) for j in S],
                )
            )
        for w in _WRT:
            unit = one if w == "q" else K.zero
            gens.append(
                lin(
                    -unit,
                    (one, d("q", i, w)),
                    *[(-h * g(sy.ah[i - 1][j - 1]), d("Q", j, w)) for j in S],
                    *[(-dB * g(sy.alh[i - 1][j - 1]), d("Qt", j, w)) for j in S],
                )
            )
        for ent, tab in (("P", sy.H), ("Pt", sy.Ht)):
            for w in _WRT:
                gens.append(
                    lin(0, (one, d(ent, i, w)), (-g(tab[("qp", i)]), d("p", i, w)), (-g(tab[("qq", i)]), d("q", i, w)))
                )
        for ent, tab in (("Q", sy.H), ("Qt", sy.Ht)):
            for w in _WRT:
                gens.append(
                    lin(0, (one, d(ent, i, w)), (-g(tab[("pp", i)]), d("p", i, w)), (-g(tab[("pq", i)]), d("q", i, w)))
                )
    return IdealSpec(tuple(gens), order)


def build_target(spec: PRKSpec, order: MonomialOrder | None = None) -> Polynomial:
    """``-(dq^n/dq)(dp^n/dp) + (dp^n/dq)(dq^n/dp) + 1``."""
    sy = symbols_for(spec)
    order = order or default_variable_order(spec, 1)
    K = sy.stage1_field()
    v = lambda e, w: Polynomial.variable(order, K, sy.d(e, None, w))  # noqa: E731
    return -(v("q", "q") * v("p", "p")) + v("p", "q") * v("q", "p") + 1


def build_symplectic_ideal(spec: PRKSpec, order: MonomialOrder | None = None) -> IdealSpec:
    """Coefficient conditions: ``s + s^2`` (deterministic) or ``4s^2 + 2s`` generators over QQ."""
    sy = symbols_for(spec)
    order = order or default_variable_order(spec, 2)
    x = lambda sym: Polynomial.variable(order, QQ, sym)  # noqa: E731
    s = spec.stages
    R = range(s)
    gens = []
    if not spec.stochastic:
        gens += [x(sy.b[i]) - x(sy.bh[i]) for i in R]
        for i in R:
            for j in R:
                gens.append(x(sy.b[i]) * x(sy.ah[i][j]) + x(sy.bh[j]) * x(sy.a[j][i]) - x(sy.b[i]) * x(sy.bh[j]))
        return IdealSpec(tuple(gens), order)

    def family(u, uh, m, mh):
        # u_i uh_j - u_i mh_ij - uh_j m_ji
        return [
            x(u[i]) * x(uh[j]) - x(u[i]) * x(mh[i][j]) - x(uh[j]) * x(m[j][i])
            for i in R
            for j in R
        ]

    gens += family(sy.b, sy.bh, sy.a, sy.ah)
    gens += family(sy.be, sy.bh, sy.al, sy.ah)
    gens += family(sy.b, sy.beh, sy.a, sy.alh)
    gens += family(sy.be, sy.beh, sy.al, sy.alh)
    gens += [x(sy.b[i]) - x(sy.bh[i]) for i in R]
    gens += [x(sy.be[i]) - x(sy.beh[i]) for i in R]
    return IdealSpec(tuple(gens), order)


# ---------------------------------------------------------------------------
# coefficient sets


def _fr(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


def _mat(m) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(_fr(v) for v in row) for row in m)


def _vec(v) -> tuple[Fraction, ...]:
    return tuple(_fr(x) for x in v)


@dataclass(frozen=True)
class CoefficientSet:
    """Concrete tableaux; the noise tableaux are present only for stochastic methods."""

    a: tuple[tuple[Fraction, ...], ...]
    ah: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    bh: tuple[Fraction, ...]
    al: tuple[tuple[Fraction, ...], ...] | None = None
    alh: tuple[tuple[Fraction, ...], ...] | None = None
    be: tuple[Fraction, ...] | None = None
    beh: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", _mat(self.a))
        object.__setattr__(self, "ah", _mat(self.ah))
        object.__setattr__(self, "b", _vec(self.b))
        object.__setattr__(self, "bh", _vec(self.bh))
        noise = [self.al, self.alh, self.be, self.beh]
        if any(v is not None for v in noise) and not all(v is not None for v in noise):
            raise ValueError("stochastic coefficient sets need al, alh, be and beh")
        if self.al is not None:
            object.__setattr__(self, "al", _mat(self.al))
            object.__setattr__(self, "alh", _mat(self.alh))
            object.__setattr__(self, "be", _vec(self.be))
            object.__setattr__(self, "beh", _vec(self.beh))
        s = len(self.b)
        mats = [self.a, self.ah] + ([self.al, self.alh] if self.al is not None else [])
        vecs = [self.bh] + ([self.be, self.beh] if self.be is not None else [])
        if any(len(m) != s or any(len(r) != s for r in m) for m in mats) or any(len(v) != s for v in vecs):
            raise ValueError("coefficient dimensions do not match the stage count")

    @property
    def stages(self) -> int:
        return len(self.b)

    @property
    def stochastic(self) -> bool:
        return self.al is not None

    @property
    def kind(self) -> Kind:
        return Kind.STOCHASTIC if self.stochastic else Kind.DETERMINISTIC

    def assignment(self, spec: PRKSpec | None = None) -> dict[Symbol, Fraction]:
        spec = spec or PRKSpec(self.stages, self.kind)
        if spec.stages != self.stages or spec.stochastic != self.stochastic:
            raise ValueError("coefficient set does not match the method specification")
        sy = symbols_for(spec)
        out: dict[Symbol, Fraction] = {}
        for name in ("a", "ah", "al", "alh"):
            m = getattr(self, name)
            if m is not None:
                for i, row in enumerate(m):
                    for j, v in enumerate(row):
                        out[getattr(sy, name)[i][j]] = v
        for name in ("b", "bh", "be", "beh"):
            v = getattr(self, name)
            if v is not None:
                for i, x in enumerate(v):
                    out[getattr(sy, name)[i]] = x
        return out

    def as_names(self) -> dict[str, Fraction]:
        return {s.name: v for s, v in self.assignment().items()}

    @classmethod
    def from_names(cls, values: Mapping[str, Fraction], spec: PRKSpec) -> CoefficientSet:
        """Build from a ``name -> value`` mapping; every coefficient must be present."""
        sy = symbols_for(spec)
        missing = [s.name for s in sy.coefficients if s.name not in values]
        if missing:
            raise KeyError(f"missing coefficients: {', '.join(missing)}")
        extra = sorted(set(values) - {s.name for s in sy.coefficients})
        if extra:
            raise KeyError(f"unknown coefficients: {', '.join(extra)}")
        get = lambda sym: _fr(values[sym.name])  # noqa: E731
        kw = {}
        for name in ("a", "ah", "al", "alh"):
            m = getattr(sy, name)
            if m is not None:
                kw[name] = [[get(x) for x in row] for row in m]
        for name in ("b", "bh", "be", "beh"):
            v = getattr(sy, name)
            if v is not None:
                kw[name] = [get(x) for x in v]
        return cls(**kw)

    def to_text(self) -> str:
        lines = []
        for name, v in self.as_names().items():
            lines.append(f"{name} = {v}")
        return "\n".join(lines) + "\n"

    # catalogue -----------------------------------------------------------
    @classmethod
    def implicit_midpoint(cls, stochastic: bool = False) -> CoefficientSet:
        half = Fraction(1, 2)
        if stochastic:
            return cls([[half]], [[half]], [1], [1], [[half]], [[half]], [1], [1])
        return cls([[half]], [[half]], [1], [1])

    @classmethod
    def explicit_euler(cls, stochastic: bool = False) -> CoefficientSet:
        if stochastic:
            return cls([[0]], [[0]], [1], [1], [[0]], [[0]], [1], [1])
        return cls([[0]], [[0]], [1], [1])

    @classmethod
    def lobatto_3a3b(cls) -> CoefficientSet:
        half = Fraction(1, 2)
        return cls([[0, 0], [half, half]], [[half, 0], [half, 0]], [half, half], [half, half])


def random_symplectic_coefficients(spec: PRKSpec, seed=None) -> CoefficientSet:
    """Exact random point on the symplectic-condition variety.

    Draws nonzero weights ``b`` and arbitrary ``ah``, sets ``bh = b`` and
    ``a[j][i] = b[i] (b[j] - ah[i][j]) / b[j]``; stochastic sets also draw
    ``be``, with ``beh = be``, ``al[j][i] = be[i] (b[j] - ah[i][j]) / b[j]``
    and ``alh[i][j] = beh[j] (b[i] - a[j][i]) / b[i]``.
    """
    rng = random.Random(seed)
    s = spec.stages

    def rat(nonzero: bool = False) -> Fraction:
        while True:
            v = Fraction(rng.randint(-9, 9), rng.randint(1, 7))
            if v or not nonzero:
                return v

    b = [rat(nonzero=True) for _ in range(s)]
    ah = [[rat() for _ in range(s)] for _ in range(s)]
    a = [[Fraction(0)] * s for _ in range(s)]
    for i in range(s):
        for j in range(s):
            a[j][i] = b[i] * (b[j] - ah[i][j]) / b[j]
    if not spec.stochastic:
        return CoefficientSet(a, ah, b, list(b))
    be = [rat() for _ in range(s)]
    beh = list(be)
    al = [[Fraction(0)] * s for _ in range(s)]
    alh = [[Fraction(0)] * s for _ in range(s)]
    for i in range(s):
        for j in range(s):
            al[j][i] = be[i] * (b[j] - ah[i][j]) / b[j]
            alh[i][j] = beh[j] * (b[i] - a[j][i]) / b[i]
    return CoefficientSet(a, ah, b, list(b), al, alh, be, beh)


def check_coefficients(coeffs: CoefficientSet, spec: PRKSpec | None = None) -> list[tuple[Polynomial, Fraction]]:
    """Residual of every symplectic condition at ``coeffs`` (exact)."""
    spec = spec or PRKSpec(coeffs.stages, coeffs.kind)
    values = coeffs.assignment(spec)
    return [(g, g.evaluate(values)) for g in build_symplectic_ideal(spec).generators]
