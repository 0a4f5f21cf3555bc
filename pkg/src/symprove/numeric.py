"""Floating-point check of the symplectic identity for concrete methods.

Runs one PRK step on a catalogue Hamiltonian and differentiates the step map
by central differences.  Nothing here touches the symbolic code; the only
shared piece is the :class:`CoefficientSet` container.

Scheme, deterministic (``k = -H_q``, ``l = H_p`` at the stage values)::

    P_i = p + h sum_j a_ij k_j        Q_i = q + h sum_j ah_ij l_j
    p'  = p + h sum_i b_i k_i         q'  = q + h sum_i bh_i l_i

Stochastic, with noise Hamiltonian Ht and increment dB::

    p_i = p - h sum_j a_ij H_q(j) - dB sum_j al_ij Ht_q(j)
    q_i = q + h sum_j ah_ij H_p(j) + dB sum_j alh_ij Ht_p(j)
    p'  = p - h sum_i b_i H_q(i) - dB sum_i be_i Ht_q(i)
    q'  = q + h sum_i bh_i H_p(i) + dB sum_i beh_i Ht_p(i)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .prk import CoefficientSet

__all__ = [
    "ScalarFunction",
    "HamiltonianInstance",
    "StepResult",
    "HAMILTONIANS",
    "NOISES",
    "get_hamiltonian",
    "prk_step",
    "jacobian_fd",
    "symplectic_residual",
    "ConvergenceError",
    "TOLERANCE",
    "MAX_ITERATIONS",
]

TOLERANCE = 1e-14
MAX_ITERATIONS = 200

Fn = Callable[[float, float], float]


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class ScalarFunction:
    """f(p, q) with closed-form first and second partials."""

    name: str
    f: Fn
    fp: Fn
    fq: Fn
    fpp: Fn
    fpq: Fn
    fqq: Fn


@dataclass(frozen=True)
class HamiltonianInstance:
    name: str
    H: ScalarFunction
    noise: ScalarFunction | None = None

    def energy(self, p: float, q: float) -> float:
        return self.H.f(p, q)


_zero: Fn = lambda p, q: 0.0  # noqa: E731
_one: Fn = lambda p, q: 1.0  # noqa: E731

HAMILTONIANS: dict[str, ScalarFunction] = {
    "harmonic": ScalarFunction(
        "harmonic",
        lambda p, q: 0.5 * (p * p + q * q),
        lambda p, q: p,
        lambda p, q: q,
        _one,
        _zero,
        _one,
    ),
    "pendulum": ScalarFunction(
        "pendulum",
        lambda p, q: 0.5 * p * p - math.cos(q),
        lambda p, q: p,
        lambda p, q: math.sin(q),
        _one,
        _zero,
        lambda p, q: math.cos(q),
    ),
    "cubic": ScalarFunction(
        "cubic",
        lambda p, q: 0.5 * p * p + q**3 / 3.0,
        lambda p, q: p,
        lambda p, q: q * q,
        _one,
        _zero,
        lambda p, q: 2.0 * q,
    ),
}

NOISES: dict[str, ScalarFunction] = {
    "q": ScalarFunction("q", lambda p, q: q, _zero, _one, _zero, _zero, _zero),
    "sin q": ScalarFunction(
        "sin q",
        lambda p, q: math.sin(q),
        _zero,
        lambda p, q: math.cos(q),
        _zero,
        _zero,
        lambda p, q: -math.sin(q),
    ),
    "p*q": ScalarFunction("p*q", lambda p, q: p * q, lambda p, q: q, lambda p, q: p, _zero, _one, _zero),
}

_NOISE_ALIASES = {"sinq": "sin q", "sin": "sin q", "pq": "p*q"}


def get_hamiltonian(name: str, noise: str | None = None) -> HamiltonianInstance:
    if name not in HAMILTONIANS:
        raise KeyError(f"unknown Hamiltonian {name!r}; choose from {', '.join(HAMILTONIANS)}")
    if noise is None:
        return HamiltonianInstance(name, HAMILTONIANS[name])
    key = _NOISE_ALIASES.get(noise, noise)
    if key not in NOISES:
        raise KeyError(f"unknown noise Hamiltonian {noise!r}; choose from {', '.join(NOISES)}")
    return HamiltonianInstance(f"{name}+{key}", HAMILTONIANS[name], NOISES[key])


@dataclass
class StepResult:
    p: float
    q: float
    stage_p: list[float]
    stage_q: list[float]
    iterations: int
    converged: bool

    @property
    def state(self) -> tuple[float, float]:
        return (self.p, self.q)


def _floats(m):
    return [[float(x) for x in row] for row in m]


def prk_step(
    coeffs: CoefficientSet,
    ham: HamiltonianInstance,
    state: tuple[float, float],
    h: float,
    dB: float | None = None,
    *,
    tol: float = TOLERANCE,
    max_iter: int = MAX_ITERATIONS,
    damping: float = 1.0,
) -> StepResult:
    """One step from ``state``; stage equations by (damped) fixed-point iteration.

    ``damping`` in (0, 1] blends the new iterate with the old one.
    """
    if not h > 0:
        raise ValueError("step size must be positive")
    if coeffs.stochastic != (dB is not None):
        raise ValueError("dB is required exactly when stochastic coefficients are supplied")
    if coeffs.stochastic and ham.noise is None:
        raise ValueError("stochastic steps need a noise Hamiltonian")
    if not 0 < damping <= 1:
        raise ValueError("damping must lie in (0, 1]")
    s = coeffs.stages
    p0, q0 = state
    H = ham.H
    a, ah = _floats(coeffs.a), _floats(coeffs.ah)
    b, bh = [float(x) for x in coeffs.b], [float(x) for x in coeffs.bh]
    if coeffs.stochastic:
        N = ham.noise
        al, alh = _floats(coeffs.al), _floats(coeffs.alh)
        be, beh = [float(x) for x in coeffs.be], [float(x) for x in coeffs.beh]

        def forces(P, Q):
            return (
                [h * H.fq(x, y) for x, y in zip(P, Q)],
                [h * H.fp(x, y) for x, y in zip(P, Q)],
                [dB * N.fq(x, y) for x, y in zip(P, Q)],
                [dB * N.fp(x, y) for x, y in zip(P, Q)],
            )

        def stages(P, Q):
            fq, fp, gq, gp = forces(P, Q)
            newP = [p0 - sum(a[i][j] * fq[j] + al[i][j] * gq[j] for j in range(s)) for i in range(s)]
            newQ = [q0 + sum(ah[i][j] * fp[j] + alh[i][j] * gp[j] for j in range(s)) for i in range(s)]
            return newP, newQ

        def update(P, Q):
            fq, fp, gq, gp = forces(P, Q)
            return (
                p0 - sum(b[i] * fq[i] + be[i] * gq[i] for i in range(s)),
                q0 + sum(bh[i] * fp[i] + beh[i] * gp[i] for i in range(s)),
            )

    else:

        def stages(P, Q):
            k = [-H.fq(x, y) for x, y in zip(P, Q)]
            l = [H.fp(x, y) for x, y in zip(P, Q)]  # noqa: E741
            return (
                [p0 + h * sum(a[i][j] * k[j] for j in range(s)) for i in range(s)],
                [q0 + h * sum(ah[i][j] * l[j] for j in range(s)) for i in range(s)],
            )

        def update(P, Q):
            return (
                p0 - h * sum(b[i] * H.fq(P[i], Q[i]) for i in range(s)),
                q0 + h * sum(bh[i] * H.fp(P[i], Q[i]) for i in range(s)),
            )

    P, Q = [p0] * s, [q0] * s
    converged = False
    it = 0
    while it < max_iter:
        it += 1
        nP, nQ = stages(P, Q)
        if damping != 1.0:
            nP = [damping * x + (1 - damping) * y for x, y in zip(nP, P)]
            nQ = [damping * x + (1 - damping) * y for x, y in zip(nQ, Q)]
        delta = max(max(abs(x - y) for x, y in zip(nP, P)), max(abs(x - y) for x, y in zip(nQ, Q)))
        P, Q = nP, nQ
        if not all(math.isfinite(x) for x in P + Q):
            break
        if delta <= tol:
            converged = True
            break
    p1, q1 = update(P, Q)
    return StepResult(p1, q1, P, Q, it, converged)


def jacobian_fd(
    coeffs: CoefficientSet,
    ham: HamiltonianInstance,
    state: tuple[float, float],
    h: float,
    dB: float | None = None,
    eps: float = 1e-6,
    **step_kw,
) -> list[list[float]]:
    """Central-difference Jacobian of the one-step map at ``state``."""
    p, q = state
    cols = []
    for dp, dq in ((eps, 0.0), (0.0, eps)):
        plus = prk_step(coeffs, ham, (p + dp, q + dq), h, dB, **step_kw)
        minus = prk_step(coeffs, ham, (p - dp, q - dq), h, dB, **step_kw)
        if not (plus.converged and minus.converged):
            raise ConvergenceError("stage iteration did not converge at a perturbed state")
        cols.append(((plus.p - minus.p) / (2 * eps), (plus.q - minus.q) / (2 * eps)))
    return [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]]


def symplectic_residual(M) -> float:
    """max |(M^T J M - J)_ij| with J = [[0, 1], [-1, 0]]."""
    (m11, m12), (m21, m22) = M
    # M^T J M = det(M) J for 2x2 matrices, but compute it entrywise anyway
    J = ((0.0, 1.0), (-1.0, 0.0))
    Mt = ((m11, m21), (m12, m22))
    JM = [[sum(J[i][k] * M[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    R = [[sum(Mt[i][k] * JM[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    return max(abs(R[i][j] - J[i][j]) for i in range(2) for j in range(2))
