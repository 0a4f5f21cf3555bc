import functools
import random
from fractions import Fraction

import pytest

from symprove.prk import PRKSpec, variable_order
from symprove.prover import linear_solve_oracle, stage1_normal_form

# (number, passed, detail) lines reported by tests/test_acceptance.py
ACCEPTANCE: list[tuple[int, bool, str]] = []


@functools.lru_cache(maxsize=None)
def _stage1(spec, order):
    return stage1_normal_form(spec, order)


@functools.lru_cache(maxsize=None)
def _oracle(spec):
    return linear_solve_oracle(spec)


@pytest.fixture(scope="session")
def stage1():
    """``stage1(kind, stages, identify=True, style="paper") -> (gg, basis)``, memoised per session.

    The cache is keyed on the concrete order, so styles naming the same order
    share one computation (the stochastic two-stage case takes about a minute).
    """

    def get(kind, stages, identify=True, style="paper"):
        spec = PRKSpec(stages, kind, identify)
        return _stage1(spec, variable_order(spec, 1, style))

    return get


@pytest.fixture(scope="session")
def oracle():
    def get(kind, stages, identify=True):
        return _oracle(PRKSpec(stages, kind, identify))

    return get


def random_rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(rng.randint(-20, 20), rng.randint(1, 9))
        if v or not nonzero:
            return v


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
