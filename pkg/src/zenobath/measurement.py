"""Frozen-direction measurements: projectors, survival decay, Zeno protocols.

A measurement direction mu splits the state space into the +1/-1 eigenblocks
of sigma_mu.  Monitoring that observable nonselectively replaces the
generator L by rho -> P L{rho} P + Q L{rho} Q, under which the populations
obey a classical two-state rate equation

    d p_plus / dt = F p_plus + b p_minus,

with F = -gamma |<-mu| S |+mu>|^2 <= 0 (leakage out of the + block) and
b = gamma |<+mu| S |-mu>|^2 >= 0 (feeding from the - block).  The survival
exponent F admits a closed trigonometric form; every numeric route here is
cross-checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import (
    BlochVector,
    DensityMatrix,
    MeasurementDirection,
    bloch_to_density,
    direction_eigenstates,
)
from .bath import BathParams, lindblad_operator
from .dynamics import (
    EXPANDED,
    TimeSeries,
    integrate,
    liouvillian_expanded,
    measured_form,
)

__all__ = [
    "Sign",
    "Projector",
    "projector",
    "projector_pair",
    "measured_liouvillian",
    "exponent_over_gamma",
    "decay_exponent",
    "block_transfer_rates",
    "survival_probability",
    "total_zeno_condition",
    "measured_steady_state",
    "discrete_zeno_protocol",
]


class Sign(Enum):
    PLUS = 1
    MINUS = -1


@dataclass(frozen=True, eq=False)
class Projector:
    """Rank-one eigenprojector of sigma_mu for one outcome sign."""

    direction: MeasurementDirection
    sign: Sign
    matrix: np.ndarray

    def weight(self, rho: DensityMatrix) -> float:
        """Outcome probability Tr(P rho)."""
        return float(np.trace(self.matrix @ rho.matrix).real)


def projector(direction: MeasurementDirection, sign: Sign) -> Projector:
    plus, minus = direction_eigenstates(direction)
    ket = plus.ket() if sign is Sign.PLUS else minus.ket()
    matrix = np.outer(ket, ket.conj())
    matrix.setflags(write=False)
    return Projector(direction, sign, matrix)


def projector_pair(direction: MeasurementDirection) -> tuple[Projector, Projector]:
    return projector(direction, Sign.PLUS), projector(direction, Sign.MINUS)


def measured_liouvillian(
    params: BathParams, direction: MeasurementDirection, rho: np.ndarray
) -> np.ndarray:
    """d rho / dt under nonselective monitoring of sigma_mu (matrix level)."""
    p, q = projector_pair(direction)
    flow = liouvillian_expanded(params, rho)
    return p.matrix @ flow @ p.matrix + q.matrix @ flow @ q.matrix


def exponent_over_gamma(nbar: float, phase: float, theta, phi):
    """Survival exponent F / gamma as a closed form, vectorised over angles.

    F/gamma = -(2N+1)(1 + cos^2 theta)/4 - (cos theta)/2
              - (M/2) sin^2 theta cos(2 phi + psi),

    which is exactly -|<-mu| S |+mu>|^2 / gamma.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    m = math.sqrt(nbar * (nbar + 1.0))
    x = np.cos(theta)
    value = (
        -(2.0 * nbar + 1.0) * (1.0 + x * x) / 4.0
        - x / 2.0
        - 0.5 * m * np.sin(theta) ** 2 * np.cos(2.0 * phi + phase)
    )
    if value.ndim == 0:
        return float(value)
    return value


def decay_exponent(params: BathParams, direction: MeasurementDirection) -> float:
    """Instantaneous survival exponent F (nonpositive, units of rate).

    Computed from the closed form and cross-checked against the monitored
    generator applied to the +mu eigenstate; disagreement beyond 1e-12 gamma
    raises ArithmeticError.
    """
    closed = params.gamma * exponent_over_gamma(
        params.nbar, params.phase, direction.theta, direction.phi
    )

    p, _ = projector_pair(direction)
    flow = measured_liouvillian(params, direction, p.matrix)
    numeric = float(np.trace(p.matrix @ flow).real)
    if abs(numeric - closed) > 1e-12 * params.gamma:
        raise ArithmeticError(
            f"survival exponent routes disagree: {closed!r} vs {numeric!r}"
        )
    return closed


def block_transfer_rates(
    params: BathParams, direction: MeasurementDirection
) -> tuple[float, float]:
    """(out_rate, in_rate) of the monitored two-state population equation.

    out_rate = gamma |<-mu| S |+mu>|^2 = -F, in_rate = gamma |<+mu| S |-mu>|^2.
    The in_rate is cross-checked against Tr(P L{Q}).
    """
    plus, minus = direction_eigenstates(direction)
    s_op = lindblad_operator(params)
    kp, km = plus.ket(), minus.ket()
    out_rate = params.gamma * abs(np.vdot(km, s_op @ kp)) ** 2
    in_rate = params.gamma * abs(np.vdot(kp, s_op @ km)) ** 2

    p, q = projector_pair(direction)
    in_numeric = float(np.trace(p.matrix @ liouvillian_expanded(params, q.matrix)).real)
    if abs(in_numeric - in_rate) > 1e-12 * params.gamma:
        raise ArithmeticError(
            f"feed-rate routes disagree: {in_rate!r} vs {in_numeric!r}"
        )
    return out_rate, in_rate


def survival_probability(
    params: BathParams, direction: MeasurementDirection, t: float
) -> float:
    """Probability exp(F t) of never leaving the + block under monitoring."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    return math.exp(decay_exponent(params, direction) * t)


def total_zeno_condition(
    params: BathParams, direction: MeasurementDirection, tol: float = 1e-10
) -> bool:
    """True when the survival exponent vanishes within tol * gamma."""
    return abs(decay_exponent(params, direction)) < tol * params.gamma


def measured_steady_state(
    params: BathParams, direction: MeasurementDirection
) -> DensityMatrix:
    """Fixed point of the monitored dynamics (block-diagonal in the mu basis).

    With coherences dephased the populations follow the two-state rate
    equation, whose fixed point is p_plus = in_rate / (in_rate + out_rate);
    the state p_plus P + (1 - p_plus) Q is returned.  Raises ArithmeticError
    when both rates vanish and no unique fixed point exists.
    """
    out_rate, in_rate = block_transfer_rates(params, direction)
    total = out_rate + in_rate
    if total < 1e-15 * params.gamma:
        raise ArithmeticError("monitored populations have no unique fixed point")
    p_plus = in_rate / total
    p, q = projector_pair(direction)
    return DensityMatrix(p_plus * p.matrix + (1.0 - p_plus) * q.matrix)


def _dephase(rho: np.ndarray, p: Projector, q: Projector) -> np.ndarray:
    return p.matrix @ rho @ p.matrix + q.matrix @ rho @ q.matrix


def discrete_zeno_protocol(
    params: BathParams,
    direction: MeasurementDirection,
    rho0: DensityMatrix,
    delta_t: float,
    n_steps: int,
    dt: float | None = None,
) -> TimeSeries:
    """Stroboscopic protocol: free evolution for delta_t, then a nonselective
    projection onto the sigma_mu eigenbasis, repeated n_steps times.

    The sampled series holds the post-projection states at times k delta_t.
    The survival column tracks the population of whichever eigenblock
    dominated the initial state; its deficit from 1 shrinks linearly with
    delta_t at the frozen directions.  Free segments are integrated with a
    substep delta_t / m, m = max(1, round(delta_t / dt_base)).
    """
    if not math.isfinite(delta_t) or delta_t <= 0.0:
        raise ValueError(f"delta_t must be positive, got {delta_t!r}")
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    dt_base = dt if dt is not None else 1e-3 / params.gamma
    m = max(1, round(delta_t / dt_base))
    dt_eff = delta_t / m

    p, q = projector_pair(direction)
    dominant = p if p.weight(rho0) >= q.weight(rho0) else q

    rho = _dephase(np.asarray(rho0.matrix), p, q)
    axis = direction.unit_vector()

    bloch = np.empty((n_steps + 1, 3))
    survival = np.empty(n_steps + 1)

    def _record(k: int, matrix: np.ndarray) -> None:
        bloch[k] = [
            (matrix[0, 1] + matrix[1, 0]).real,
            (1j * (matrix[0, 1] - matrix[1, 0])).real,
            (matrix[0, 0] - matrix[1, 1]).real,
        ]
        survival[k] = float(np.trace(dominant.matrix @ matrix).real)

    _record(0, rho)
    state = DensityMatrix(rho)
    for k in range(1, n_steps + 1):
        segment = integrate(EXPANDED, params, state, delta_t, dt_eff)
        rho = _dephase(
            np.asarray(bloch_to_density(BlochVector(*segment.bloch[-1])).matrix), p, q
        )
        _record(k, rho)
        state = DensityMatrix(rho)

    times = delta_t * np.arange(n_steps + 1)
    extras = (("sigma_mu_mean", bloch @ axis), ("survival", survival))
    return TimeSeries(
        times=times,
        bloch=bloch,
        dt=float(delta_t),
        bath=params,
        form=measured_form(direction),
        initial_bloch=BlochVector(*bloch[0]),
        extras=extras,
    )
