"""Two-stage symplecticity prover.

Stage 1 reduces the symplecticity target modulo a Groebner basis of the
variational system over QQ(h, dB, H..., coefficients) and yields
``g_G = N / D`` with ``D(0) = 1``.  Stage 2 reduces ``N`` and ``D``
modulo a Groebner basis of the coefficient conditions.  A zero numerator
remainder with a nonzero denominator remainder means g_G is the zero
function on the condition variety, i.e. ``det = 1`` there.  A nonzero
remainder means only that this reduction did not close the proof.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping

from .groebner import DEFAULT_MAX_PAIRS, GroebnerBasis, GroebnerBudgetExceeded, buchberger, normal_form
from .linsolve import connected_components, solve_linear_system
from .prk import (
    PRKSpec,
    build_symplectic_ideal,
    build_target,
    build_variational_ideal,
    symbols_for,
    variable_order,
)
from .ring import QQ, MonomialOrder, OrderKind, Polynomial, RationalFunction, Symbol
from .text import render_polynomial, split_parameters

__all__ = [
    "GGExpression",
    "ProofOptions",
    "ProofCertificate",
    "Stage2Result",
    "SingularSystemError",
    "VERIFIED",
    "NOT_REDUCED",
    "stage1_normal_form",
    "linear_solve_oracle",
    "stage2_reduce",
    "prove",
    "STAGE2_ORDERS",
]

VERIFIED = "SYMPLECTIC-VERIFIED"
NOT_REDUCED = "NOT-REDUCED"

NOT_REDUCED_NOTE = (
    "No proof found by this method. This is not a proof that the method is "
    "non-symplectic; the reduction only failed to establish det = 1."
)
VERIFIED_NOTE = (
    "The numerator of g_G lies in the symplectic-condition ideal and the denominator does not, "
    "so g_G reduces to 0/1: det = 1 wherever the conditions hold."
)


class SingularSystemError(ArithmeticError):
    """The variational system does not determine the derivatives of (p^n, q^n)."""


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class GGExpression:
    """``numerator / denominator`` over QQ in the non-derivative symbols.

    Normalised so that the denominator has constant term 1.
    """

    numerator: Polynomial
    denominator: Polynomial

    @classmethod
    def normalised(cls, num: Polynomial, den: Polynomial) -> GGExpression:
        c = den.constant_coefficient()
        if not c:
            raise SingularSystemError("denominator vanishes at the origin; cannot normalise")
        inv = Fraction(1) / c
        return cls(num.scale(inv), den.scale(inv))

    @property
    def order(self) -> MonomialOrder:
        return self.numerator.order

    def evaluate(self, assignment: Mapping[Symbol | str, Any]) -> Fraction:
        d = self.denominator.evaluate(assignment)
        if not d:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.numerator.evaluate(assignment) / d

    def equals(self, other: GGExpression) -> bool:
        """Exact equality as rational functions (cross-multiplication)."""
        order = self.order
        on = other.numerator.reorder(order)
        od = other.denominator.reorder(order)
        if on == self.numerator and od == self.denominator:
            return True
        return self.numerator * od == on * self.denominator

    def numerator_constant_is_zero(self) -> bool:
        return not self.numerator.constant_coefficient()

    def render(self) -> dict[str, str]:
        return {
            "numerator": render_polynomial(self.numerator),
            "denominator": render_polynomial(self.denominator),
        }

    def digest(self) -> str:
        r = self.render()
        return _digest(r["numerator"] + "\n/\n" + r["denominator"])


def _stage1_field_order(spec: PRKSpec) -> MonomialOrder:
    return symbols_for(spec).stage1_field().param_order


def stage1_normal_form(
    spec: PRKSpec,
    order: MonomialOrder | None = None,
    *,
    criteria: bool = True,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    reduced_basis: bool = False,
) -> tuple[GGExpression, GroebnerBasis]:
    """Reduce the target modulo the variational system's Groebner basis.

    The basis is left unreduced by default: the normal form does not depend
    on it, and the final interreduction (a full back substitution with large
    rational-function coefficients) dominates the running time otherwise.
    """
    order = order or variable_order(spec, 1)
    ideal = build_variational_ideal(spec, order)
    gb = buchberger(ideal, criteria=criteria, max_pairs=max_pairs, reduce=reduced_basis)
    if gb.is_unit():
        raise SingularSystemError("the variational system is inconsistent")
    nf = normal_form(build_target(spec, order), gb.elements, order)
    if any(e != order.one for e in nf.coefficient_map()):
        raise SingularSystemError("the variational system does not determine all derivatives")
    r = nf.constant_coefficient()
    r = r if isinstance(r, RationalFunction) else ideal.field(r)
    return GGExpression.normalised(r.numerator, r.denominator), gb


def linear_solve_oracle(spec: PRKSpec) -> GGExpression:
    """g_G by fraction-free elimination, independent of the Groebner code."""
    sy = symbols_for(spec)
    ideal = build_variational_ideal(spec)
    porder = _stage1_field_order(spec)
    one_e = ideal.order.one
    rows, rhs = [], []
    for g in ideal.generators:
        row = {}
        b = Polynomial.zero(porder, QQ)
        for e, c in g.coefficient_map().items():
            if not c.is_polynomial():
                raise ValueError("variational coefficients must be polynomial")
            c = c.numerator
            if e == one_e:
                b = -c
            else:
                if sum(e) != 1:
                    raise ValueError("variational system must be linear")
                row[ideal.order.precedence[e.index(1)]] = c
        rows.append(row)
        rhs.append(b)
    sol: dict[Symbol, tuple[Polynomial, Polynomial]] = {}
    for comp in connected_components(rows):
        try:
            s = solve_linear_system([rows[i] for i in comp], [rhs[i] for i in comp])
        except ZeroDivisionError as exc:
            raise SingularSystemError(str(exc)) from exc
        for v, num in s.numerators.items():
            sol[v] = (num, s.determinant)
    d = lambda e, w: sol[sy.d(e, None, w)]  # noqa: E731
    (npp, dpp), (npq, dpq), (nqp, dqp), (nqq, dqq) = d("p", "p"), d("p", "q"), d("q", "p"), d("q", "q")
    # each product shares the denominator of the wrt-p block times the wrt-q block
    if not (dpp == dqp and dpq == dqq):
        raise AssertionError("derivatives wrt the same initial value must share a determinant")
    den = dpp * dpq
    num = den - nqq * npp + npq * nqp
    for factor in (dpp, dpq):
        try:
            n2, d2 = num.divexact(factor), den.divexact(factor)
        except ValueError:
            continue
        num, den = n2, d2
    return GGExpression.normalised(num, den)


@dataclass
class Stage2Result:
    numerator_nf: Polynomial
    denominator_nf: Polynomial
    basis: GroebnerBasis

    @property
    def verified(self) -> bool:
        """Numerator in the ideal while the denominator is not."""
        return not self.numerator_nf and bool(self.denominator_nf)

    @property
    def denominator_is_one(self) -> bool:
        d = self.denominator_nf
        return d.is_constant() and d.constant_coefficient() == 1

    def reduced_quotient(self) -> tuple[str, str]:
        """``g_G`` modulo the conditions as a canonical fraction; ``("0", "1")`` when verified."""
        if self.verified:
            return ("0", "1")
        return (render_polynomial(self.numerator_nf), render_polynomial(self.denominator_nf))


def stage2_reduce(
    gg: GGExpression,
    spec: PRKSpec,
    order: MonomialOrder | None = None,
    *,
    criteria: bool = True,
    max_pairs: int = DEFAULT_MAX_PAIRS,
) -> Stage2Result:
    """Reduce N and D modulo the coefficient-condition basis.

    The conditions have rational coefficients, so their basis is computed
    over QQ and then read over QQ(h, dB, H...): a Groebner basis stays one
    under a field extension.
    """
    sy = symbols_for(spec)
    order = order or variable_order(spec, 2, kind=OrderKind.GREVLEX)
    gb = buchberger(build_symplectic_ideal(spec, order), criteria=criteria, max_pairs=max_pairs)
    K = sy.stage2_field()
    basis = [g.map_coefficients(K, K) for g in gb.elements]
    num = split_parameters(gg.numerator, order, K)
    den = split_parameters(gg.denominator, order, K)
    return Stage2Result(normal_form(num, basis, order), normal_form(den, basis, order), gb)


@dataclass
class ProofOptions:
    order1: str = "paper"
    order2: str = "grevlex"
    cross_check: bool = False
    emit_gg: bool = False
    criteria: bool = True
    max_pairs: int = DEFAULT_MAX_PAIRS

    def as_dict(self) -> dict[str, Any]:
        return {
            "order1": self.order1,
            "order2": self.order2,
            "cross_check": self.cross_check,
            "emit_gg": self.emit_gg,
            "criteria": self.criteria,
            "max_pairs": self.max_pairs,
        }


def _stage2_order(spec: PRKSpec, name: str) -> MonomialOrder:
    if name in ("grevlex", "lex"):
        return variable_order(spec, 2, kind=name)
    if name in ("reversed-grevlex", "reversed-lex"):
        return variable_order(spec, 2, "reversed", kind=name.split("-")[1])
    raise ValueError(f"unknown stage-2 order {name!r}")


STAGE2_ORDERS = ("grevlex", "lex", "reversed-grevlex", "reversed-lex")


@dataclass
class ProofCertificate:
    system: dict[str, Any]
    options: dict[str, Any]
    input_digest: str
    stage1: dict[str, Any]
    stage2: dict[str, Any]
    verdict: str
    note: str
    cross_check: dict[str, Any] | None = None
    timings_ms: dict[str, float] = field(default_factory=dict)
    version: str = "1"

    @property
    def verified(self) -> bool:
        return self.verdict == VERIFIED

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": self.version,
            "system": self.system,
            "options": self.options,
            "input_digest": self.input_digest,
            "stage1": self.stage1,
            "stage2": self.stage2,
            "cross_check": self.cross_check,
            "verdict": self.verdict,
            "note": self.note,
            "timings_ms": self.timings_ms,
        }


def _system_digest(spec: PRKSpec, order1: MonomialOrder) -> str:
    ideal = build_variational_ideal(spec, order1)
    lines = [f"{spec.kind.value} s={spec.stages} identify={spec.identify_mixed_partials}"]
    lines += [render_polynomial(g) for g in ideal.generators]
    lines.append(render_polynomial(build_target(spec, order1)))
    lines += [render_polynomial(g) for g in build_symplectic_ideal(spec).generators]
    return _digest("\n".join(lines))


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000.0, 3)


def prove(spec: PRKSpec, options: ProofOptions | None = None) -> ProofCertificate:
    """Run both stages and return a certificate.

    S-pair budget exhaustion and singular systems do not raise; they end up
    in the certificate as NOT-REDUCED with the error text and statistics.
    """
    opts = options or ProofOptions()
    timings: dict[str, float] = {}
    order1 = variable_order(spec, 1, opts.order1)
    order2 = _stage2_order(spec, opts.order2)
    system = {
        "kind": spec.kind.value,
        "stages": spec.stages,
        "identify_mixed_partials": spec.identify_mixed_partials,
    }
    stage1: dict[str, Any] = {
        "order": [s.name for s in order1.precedence],
        "order_kind": order1.kind.value,
        "system_size": len(build_variational_ideal(spec, order1)),
    }
    stage2: dict[str, Any] = {
        "order": [s.name for s in order2.precedence],
        "order_kind": order2.kind.value,
        "ideal_size": len(build_symplectic_ideal(spec, order2)),
    }

    def finish(verdict: str, note: str, cross=None) -> ProofCertificate:
        return ProofCertificate(
            system=system,
            options=opts.as_dict(),
            input_digest=_system_digest(spec, order1),
            stage1=stage1,
            stage2=stage2,
            verdict=verdict,
            note=note,
            cross_check=cross,
            timings_ms=timings,
        )

    t0 = time.perf_counter()
    try:
        gg, gb1 = stage1_normal_form(spec, order1, criteria=opts.criteria, max_pairs=opts.max_pairs)
    except (GroebnerBudgetExceeded, SingularSystemError) as exc:
        timings["stage1"] = _ms(t0)
        stage1["error"] = str(exc)
        if isinstance(exc, GroebnerBudgetExceeded):
            stage1["stats"] = exc.stats
        return finish(NOT_REDUCED, "Stage 1 did not complete. " + NOT_REDUCED_NOTE)
    timings["stage1"] = _ms(t0)
    stage1.update(
        {
            "basis_size": len(gb1),
            "stats": gb1.stats,
            "gg_numerator_terms": len(gg.numerator),
            "gg_denominator_terms": len(gg.denominator),
            "gg_numerator_constant_zero": gg.numerator_constant_is_zero(),
            "gg_digest": gg.digest(),
        }
    )
    if opts.emit_gg:
        stage1["gg"] = gg.render()

    cross = None
    if opts.cross_check:
        t0 = time.perf_counter()
        oracle = linear_solve_oracle(spec)
        cross = {"oracle": "fraction-free-gauss-jordan", "agree": gg.equals(oracle)}
        timings["cross_check"] = _ms(t0)

    t0 = time.perf_counter()
    try:
        s2 = stage2_reduce(gg, spec, order2, criteria=opts.criteria, max_pairs=opts.max_pairs)
    except GroebnerBudgetExceeded as exc:
        timings["stage2"] = _ms(t0)
        stage2["error"] = str(exc)
        stage2["stats"] = exc.stats
        return finish(NOT_REDUCED, "Stage 2 did not complete. " + NOT_REDUCED_NOTE, cross)
    timings["stage2"] = _ms(t0)
    stage2.update(
        {
            "basis_size": len(s2.basis),
            "stats": s2.basis.stats,
            "numerator_normal_form": render_polynomial(s2.numerator_nf),
            "denominator_normal_form": render_polynomial(s2.denominator_nf),
            "denominator_normal_form_is_one": s2.denominator_is_one,
            "reduced_quotient": list(s2.reduced_quotient()),
        }
    )
    if cross is not None and not cross["agree"]:
        note = "Stage-1 result disagrees with the linear-algebra oracle. " + NOT_REDUCED_NOTE
        return finish(NOT_REDUCED, note, cross)
    if s2.verified:
        return finish(VERIFIED, VERIFIED_NOTE, cross)
    return finish(NOT_REDUCED, "The stage-2 remainder is nonzero. " + NOT_REDUCED_NOTE, cross)
