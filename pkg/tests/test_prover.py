import random

import pytest

from symprove.certificate import parse_certificate, render_certificate, same_content
from symprove.linsolve import solve_linear_system
from symprove.prk import (
    Kind,
    PRKSpec,
    build_variational_ideal,
    random_symplectic_coefficients,
    symbols_for,
    variable_order,
)
from symprove.prover import (
    NOT_REDUCED,
    VERIFIED,
    GGExpression,
    ProofOptions,
    SingularSystemError,
    prove,
    stage2_reduce,
)
from symprove.ring import QQ, MonomialOrder, Polynomial, SymbolKind, SymbolTable
from symprove.text import render_polynomial

from conftest import random_rational

DET, STOCH = Kind.DETERMINISTIC, Kind.STOCHASTIC


def test_det_s1_gg_closed_form(stage1):
    gg, gb = stage1(DET, 1)
    assert render_polynomial(gg.denominator) == (
        "h^2*Hpp1*Hqq1*a11*ah11 - h^2*Hpq1^2*a11*ah11 + h*Hpq1*a11 - h*Hpq1*ah11 + 1"
    )
    assert render_polynomial(gg.numerator) == (
        "h^2*Hpp1*Hqq1*a11*bh1 + h^2*Hpp1*Hqq1*ah11*b1 - h^2*Hpp1*Hqq1*b1*bh1"
        " - h^2*Hpq1^2*a11*bh1 - h^2*Hpq1^2*ah11*b1 + h^2*Hpq1^2*b1*bh1"
        " + h*Hpq1*b1 - h*Hpq1*bh1"
    )
    assert len(gb) == 12


@pytest.mark.parametrize("kind", [DET, STOCH])
def test_s1_normalisation_and_oracle(stage1, oracle, kind):
    gg, _ = stage1(kind, 1)
    assert gg.denominator.constant_coefficient() == 1
    assert gg.numerator_constant_is_zero()
    assert gg.equals(oracle(kind, 1))


@pytest.mark.parametrize("kind", [DET, STOCH])
def test_s1_gg_matches_determinant_pointwise(stage1, kind):
    """g_G = 1 - det M; compare with numbers substituted first and the system solved after."""
    gg, _ = stage1(kind, 1)
    rng = random.Random(5)
    sy = symbols_for(PRKSpec(1, kind))
    for _ in range(5):
        point = {s: random_rational(rng) for s in sy.table if s.kind is not SymbolKind.DERIVATIVE}
        other = oracle_at(PRKSpec(1, kind), point)
        assert gg.evaluate(point) == other


def oracle_at(spec, point):
    sy = symbols_for(spec)
    ideal = build_variational_ideal(spec)
    t = SymbolTable(["_"])
    order = MonomialOrder.lex(list(t))
    const = lambda v: Polynomial.constant(order, QQ, v)  # noqa: E731
    rows, rhs = [], []
    one = ideal.order.one
    for g in ideal.generators:
        row, b = {}, const(0)
        for e, c in g.coefficient_map().items():
            v = c.evaluate(point)
            if e == one:
                b = const(-v)
            else:
                row[ideal.order.precedence[e.index(1)]] = const(v)
        rows.append(row)
        rhs.append(b)
    sol = solve_linear_system(rows, rhs)
    x = {k: v.constant_coefficient() / sol.determinant.constant_coefficient() for k, v in sol.numerators.items()}
    d = lambda e, w: x[sy.d(e, None, w)]  # noqa: E731
    return -d("q", "q") * d("p", "p") + d("p", "q") * d("q", "p") + 1


@pytest.mark.parametrize("kind", [DET, STOCH])
def test_prove_s1_verified(kind):
    cert = prove(PRKSpec(1, kind), ProofOptions(cross_check=True))
    assert cert.verdict == VERIFIED and cert.verified
    assert cert.stage2["numerator_normal_form"] == "0"
    assert cert.stage2["reduced_quotient"] == ["0", "1"]
    assert cert.cross_check == {"oracle": "fraction-free-gauss-jordan", "agree": True}
    assert cert.stage1["gg_numerator_constant_zero"] is True


def test_distinct_mixed_partials_s1_not_reduced():
    cert = prove(PRKSpec(1, identify_mixed_partials=False))
    assert cert.verdict == NOT_REDUCED
    assert cert.stage2["numerator_normal_form"] == "-h*Hpq1*b1 + h*Hqp1*b1"
    assert "not a proof" in cert.note


def test_budget_exhaustion_is_reported_not_raised():
    cert = prove(PRKSpec(1), ProofOptions(max_pairs=1))
    assert cert.verdict == NOT_REDUCED
    assert cert.note.startswith("Stage 1 did not complete.")
    assert "budget" in cert.stage1["error"] and cert.stage1["stats"]["pairs_processed"] == 1


@pytest.mark.parametrize("order2", ["grevlex", "lex", "reversed-grevlex", "reversed-lex"])
def test_stage2_orders_agree_s1(order2):
    cert = prove(PRKSpec(1, STOCH), ProofOptions(order2=order2))
    assert cert.verified and cert.stage2["order_kind"] == order2.split("-")[-1]


@pytest.mark.parametrize("kind", [DET, STOCH])
def test_stage2_numerator_vanishes_on_variety(stage1, kind):
    spec = PRKSpec(1, kind)
    gg, _ = stage1(kind, 1)
    sy = symbols_for(spec)
    rng = random.Random(11)
    for seed in range(20):
        point = dict(random_symplectic_coefficients(spec, seed).assignment(spec))
        point.update({s: random_rational(rng) for s in sy.parameters})
        assert gg.numerator.evaluate(point) == 0
    s2 = stage2_reduce(gg, spec, variable_order(spec, 2, kind="lex"))
    assert s2.verified and not s2.denominator_is_one and s2.reduced_quotient() == ("0", "1")


def test_normalised_rejects_zero_constant():
    t = SymbolTable(["x"])
    order = MonomialOrder.lex(list(t))
    xp = Polynomial.variable(order, QQ, t["x"])
    with pytest.raises(SingularSystemError):
        GGExpression.normalised(xp, xp)
    g = GGExpression.normalised(xp, xp * 2 + 4)
    assert g.denominator.constant_coefficient() == 1
    assert g.equals(GGExpression(xp * 3, xp * 6 + 12))
    assert not g.equals(GGExpression(xp, xp + 1))


def test_certificate_round_trip_and_determinism():
    a = prove(PRKSpec(1, STOCH), ProofOptions(emit_gg=True))
    b = prove(PRKSpec(1, STOCH), ProofOptions(emit_gg=True))
    assert same_content(a, parse_certificate(render_certificate(a)))
    assert same_content(a, b)
    a.timings_ms, b.timings_ms = {}, {}
    assert render_certificate(a) == render_certificate(b)
    assert a.stage1["gg"]["denominator"].endswith("+ 1")
    assert a.input_digest.startswith("sha256:")
