import math

import pytest

from symprove.numeric import (
    HAMILTONIANS,
    NOISES,
    ConvergenceError,
    get_hamiltonian,
    jacobian_fd,
    prk_step,
    symplectic_residual,
)
from symprove.prk import CoefficientSet, Kind, PRKSpec, random_symplectic_coefficients

MIDPOINT = CoefficientSet.implicit_midpoint()
EULER = CoefficientSet.explicit_euler()
LOBATTO = CoefficientSet.lobatto_3a3b()
SMIDPOINT = CoefficientSet.implicit_midpoint(stochastic=True)


def test_residual_examples():
    assert symplectic_residual([[1, 0], [0, 1]]) == 0
    assert symplectic_residual([[2, 0], [0, 0.5]]) == 0
    assert symplectic_residual([[1, -0.1], [0.1, 1]]) == pytest.approx(0.01, abs=1e-15)


def test_explicit_euler_step():
    r = prk_step(EULER, get_hamiltonian("harmonic"), (1.0, 0.0), 0.1)
    assert r.converged and r.state == (1.0, 0.1)


def test_euler_jacobian_matches_linearisation():
    h = 0.1
    M = jacobian_fd(EULER, get_hamiltonian("harmonic"), (0.3, -0.2), h)
    for got, want in zip(sum(M, []), [1, -h, h, 1]):
        assert got == pytest.approx(want, abs=1e-9)
    assert symplectic_residual(M) == pytest.approx(h * h, rel=1e-6)


@pytest.mark.parametrize("state", [(1.0, 0.0), (0.3, -0.9), (-2.0, 1.5)])
@pytest.mark.parametrize("h", [0.01, 0.1, 0.5])
def test_midpoint_conserves_quadratic_energy(state, h):
    ham = get_hamiltonian("harmonic")
    r = prk_step(MIDPOINT, ham, state, h)
    assert r.converged
    assert abs(ham.energy(*r.state) - ham.energy(*state)) < 1e-12


def test_zero_increment_reduces_to_deterministic():
    ham = get_hamiltonian("harmonic", "q")
    s = prk_step(SMIDPOINT, ham, (0.4, 0.8), 0.05, 0.0)
    d = prk_step(MIDPOINT, get_hamiltonian("harmonic"), (0.4, 0.8), 0.05)
    assert s.state == pytest.approx(d.state, abs=1e-15)


def test_identity_limit():
    M = jacobian_fd(LOBATTO, get_hamiltonian("pendulum"), (0.2, 0.5), 1e-9)
    for got, want in zip(sum(M, []), [1, 0, 0, 1]):
        assert got == pytest.approx(want, abs=1e-6)


@pytest.mark.parametrize("ham", sorted(HAMILTONIANS))
@pytest.mark.parametrize("coeffs", [MIDPOINT, LOBATTO], ids=["midpoint", "lobatto"])
def test_symplectic_methods_pass(ham, coeffs):
    M = jacobian_fd(coeffs, get_hamiltonian(ham), (0.3, 0.7), 0.01)
    assert symplectic_residual(M) < 1e-6


@pytest.mark.parametrize("ham", sorted(HAMILTONIANS))
def test_euler_detected(ham):
    M = jacobian_fd(EULER, get_hamiltonian(ham), (0.3, 0.7), 0.01)
    assert symplectic_residual(M) > 1e-5


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("kind", [Kind.DETERMINISTIC, Kind.STOCHASTIC])
def test_random_symplectic_coefficients_pass(kind, seed):
    c = random_symplectic_coefficients(PRKSpec(2, kind), seed)
    for ham in HAMILTONIANS:
        if c.stochastic:
            for noise in NOISES:
                M = jacobian_fd(c, get_hamiltonian(ham, noise), (0.3, 0.7), 0.01, 0.01, damping=0.5)
                assert symplectic_residual(M) < 1e-6
        else:
            M = jacobian_fd(c, get_hamiltonian(ham), (0.3, 0.7), 0.01, damping=0.5)
            assert symplectic_residual(M) < 1e-6


@pytest.mark.parametrize("noise", sorted(NOISES))
@pytest.mark.parametrize("dB", [0.0, 0.1, -0.1])
def test_stochastic_midpoint(noise, dB):
    M = jacobian_fd(SMIDPOINT, get_hamiltonian("harmonic", noise), (0.3, 0.7), 0.01, dB)
    assert symplectic_residual(M) < 1e-6


def test_stochastic_euler_detected():
    c = CoefficientSet.explicit_euler(stochastic=True)
    M = jacobian_fd(c, get_hamiltonian("pendulum", "p*q"), (0.3, 0.7), 0.01, 0.1)
    assert symplectic_residual(M) > 1e-5


def test_argument_checks():
    ham = get_hamiltonian("harmonic")
    with pytest.raises(ValueError):
        prk_step(MIDPOINT, ham, (0, 0), 0.0)
    with pytest.raises(ValueError):
        prk_step(MIDPOINT, ham, (0, 0), 0.1, 0.1)
    with pytest.raises(ValueError):
        prk_step(SMIDPOINT, ham, (0, 0), 0.1, 0.1)
    with pytest.raises(KeyError):
        get_hamiltonian("duffing")
    assert get_hamiltonian("cubic", "sinq").noise is NOISES["sin q"]


def test_non_convergence_reported():
    ham = get_hamiltonian("cubic")
    r = prk_step(MIDPOINT, ham, (5.0, 5.0), 2.0, max_iter=50)
    assert not r.converged
    with pytest.raises(ConvergenceError):
        jacobian_fd(MIDPOINT, ham, (5.0, 5.0), 2.0, max_iter=50)


def test_catalogue_mixed_partials_consistent():
    eps = 1e-5
    for fn in list(HAMILTONIANS.values()) + list(NOISES.values()):
        p, q = 0.4, -0.3
        fd_pq = (fn.fp(p, q + eps) - fn.fp(p, q - eps)) / (2 * eps)
        fd_qp = (fn.fq(p + eps, q) - fn.fq(p - eps, q)) / (2 * eps)
        assert math.isclose(fd_pq, fn.fpq(p, q), abs_tol=1e-8)
        assert math.isclose(fd_qp, fn.fpq(p, q), abs_tol=1e-8)
