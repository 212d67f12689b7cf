"""Eigenstates of the jump operator and the uncertainty relation they saturate.

For nbar > 0 the jump operator S is invertible with eigenvalues
+-i sqrt(M) e^{i psi/2}.  Its two (non-orthogonal) eigenstates coincide with
the +1 eigenstates of sigma_mu along the two zero-exponent directions, and
each saturates var(J1) var(J2) >= <Jz>^2 / 4 for the bath-aligned quadrature
pair: they are the intelligent states of that relation.  A non-unitary
similarity transform built from a polar rotation, a real squeeze and two
z rotations diagonalises S explicitly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    DefectiveMatrixError,
    DensityMatrix,
    J_Z,
    StateVector2,
    bloch_to_density,
    BlochVector,
    direction_eigenstates,
    eigensystem_2x2,
    expectation,
    phase_aligned_distance,
)
from .bath import BathParams, lindblad_operator, rotated_quadrature_operators
from .directions import optimal_directions
from .dynamics import EXPANDED, bloch_flow, integrate
from .measurement import block_transfer_rates

__all__ = [
    "IntelligentStateReport",
    "jump_operator_eigenstates",
    "disentangling_transform",
    "quadrature_decay_curves",
    "initial_sigma_slope",
]


@dataclass(frozen=True, eq=False)
class IntelligentStateReport:
    """One jump-operator eigenstate with its uncertainty bookkeeping.

    saturation_residual = var_j1 var_j2 - jz_mean^2 / 4 is the slack in the
    Robertson bound for the pair (J1, J2); it vanishes for these states.
    """

    state: StateVector2
    eigenvalue: complex
    var_j1: float
    var_j2: float
    jz_mean: float
    saturation_residual: float

    def to_json_dict(self) -> dict:
        return {
            "amplitudes": [
                [self.state.c_plus.real, self.state.c_plus.imag],
                [self.state.c_minus.real, self.state.c_minus.imag],
            ],
            "eigenvalue": [self.eigenvalue.real, self.eigenvalue.imag],
            "jz_mean": self.jz_mean,
            "saturation_residual": self.saturation_residual,
            "var_j1": self.var_j1,
            "var_j2": self.var_j2,
        }


def _report_for(params: BathParams, state: StateVector2, eigenvalue: complex):
    rho = DensityMatrix.from_state(state)
    j1, j2 = rotated_quadrature_operators(params)
    var_j1 = expectation(j1 @ j1, rho) - expectation(j1, rho) ** 2
    var_j2 = expectation(j2 @ j2, rho) - expectation(j2, rho) ** 2
    jz_mean = expectation(np.asarray(J_Z), rho)
    residual = abs(var_j1 * var_j2 - jz_mean**2 / 4.0)
    return IntelligentStateReport(
        state=state,
        eigenvalue=eigenvalue,
        var_j1=var_j1,
        var_j2=var_j2,
        jz_mean=jz_mean,
        saturation_residual=residual,
    )


def jump_operator_eigenstates(
    params: BathParams,
) -> tuple[IntelligentStateReport, IntelligentStateReport]:
    """Both eigenstates of S, ordered to match the two zero-exponent directions.

    The first report carries the eigenstate equal (up to phase) to the +1
    eigenstate of sigma_mu along the first frozen direction; its eigenvalue
    is -i sqrt(M) e^{i psi/2}.  The second matches the second direction with
    the opposite eigenvalue.  Raises DefectiveMatrixError at nbar = 0, where
    S degenerates to the bare lowering operator.
    """
    if params.nbar <= 0.0:
        raise DefectiveMatrixError(
            "jump operator has a single eigenstate at nbar = 0"
        )
    s_op = lindblad_operator(params)
    pairs = eigensystem_2x2(s_op)

    dir_1, dir_2 = optimal_directions(params)
    targets = (direction_eigenstates(dir_1)[0], direction_eigenstates(dir_2)[0])

    reports: list[IntelligentStateReport | None] = [None, None]
    for eigenvalue, vector in pairs:
        residual = np.abs(s_op @ vector.ket() - eigenvalue * vector.ket()).max()
        if residual > 1e-10:
            raise ArithmeticError(f"eigenpair residual {residual:.3g}")
        overlaps = [abs(vector.overlap(t)) for t in targets]
        slot = int(np.argmax(overlaps))
        if phase_aligned_distance(vector, targets[slot]) > 1e-10:
            raise ArithmeticError(
                "jump-operator eigenstate does not match a frozen direction"
            )
        reports[slot] = _report_for(params, vector, eigenvalue)
    if reports[0] is None or reports[1] is None:
        raise ArithmeticError("both eigenstates matched the same direction")
    return reports[0], reports[1]


def disentangling_transform(params: BathParams) -> np.ndarray:
    """Similarity transform U with S = 2 lambda U Jz U^{-1}, det U = 1.

    U composes, right to left: a -pi/2 rotation about Jy, a z rotation by
    psi/2, a real squeeze exp(beta Jz) with e^beta = (nbar/(nbar+1))^{1/4},
    and a z rotation by pi/2.  U|-> and U|+> reproduce the two intelligent
    states.  The factorisation is verified to 1e-10 before returning.
    """
    if params.nbar <= 0.0:
        raise ValueError("disentangling transform needs nbar > 0")
    n, psi = params.nbar, params.phase
    quarter = (n / (n + 1.0)) ** 0.125  # e^{beta/2}

    def z_diag(angle: float) -> np.ndarray:
        return np.diag([cmath.exp(1j * angle / 2.0), cmath.exp(-1j * angle / 2.0)])

    rot_y = np.array([[1.0, -1.0], [1.0, 1.0]]) / math.sqrt(2.0)
    squeeze = np.diag([quarter, 1.0 / quarter])
    u = z_diag(math.pi / 2.0) @ squeeze @ z_diag(psi / 2.0) @ rot_y

    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    if abs(det - 1.0) > 1e-12:
        raise ArithmeticError(f"transform determinant {det!r} is not 1")
    u_inv = np.array([[u[1, 1], -u[0, 1]], [-u[1, 0], u[0, 0]]]) / det

    lam = 1j * math.sqrt(params.correlation) * cmath.exp(1j * psi / 2.0)
    rebuilt = 2.0 * lam * (u @ np.asarray(J_Z) @ u_inv)
    defect = np.abs(rebuilt - lindblad_operator(params)).max()
    if defect > 1e-10:
        raise ArithmeticError(f"factorisation defect {defect:.3g}")

    rep_1, rep_2 = jump_operator_eigenstates(params)
    for column, target in ((u[:, 1], rep_1.state), (u[:, 0], rep_2.state)):
        if phase_aligned_distance(StateVector2(*column), target) > 1e-8:
            raise ArithmeticError("transform columns do not match eigenstates")
    return u


def quadrature_decay_curves(
    params: BathParams, initial, t_grid
) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form <J1>(t), <J2>(t) from a given initial Bloch vector.

    The aligned quadrature decays at gamma (nbar + 1/2 + M), the orthogonal
    one at gamma (nbar + 1/2 - M) > 0.  A stride of samples is re-derived by
    direct integration of the master equation and must agree to 1e-6.
    """
    if not isinstance(initial, BlochVector):
        initial = BlochVector(*initial)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or t_grid.min() < 0.0:
        raise ValueError("t_grid must be nonempty and nonnegative")
    if t_grid.size > 1 and np.any(np.diff(t_grid) <= 0.0):
        raise ValueError("t_grid must be strictly increasing")
    n, m, g = params.nbar, params.correlation, params.gamma
    c, s = math.cos(params.phase / 2.0), math.sin(params.phase / 2.0)
    j1_0 = (c * initial.rx - s * initial.ry) / 2.0
    j2_0 = (s * initial.rx + c * initial.ry) / 2.0
    j1 = j1_0 * np.exp(-g * (n + 0.5 + m) * t_grid)
    j2 = j2_0 * np.exp(-g * (n + 0.5 - m) * t_grid)

    t_max = float(t_grid.max())
    if t_max > 0.0:
        series = integrate(EXPANDED, params, bloch_to_density(initial), t_max)
        stride = max(1, series.times.size // 5)
        idx = np.arange(0, series.times.size, stride)
        rx, ry = series.bloch[idx, 0], series.bloch[idx, 1]
        t_chk = series.times[idx]
        j1_chk = j1_0 * np.exp(-g * (n + 0.5 + m) * t_chk)
        j2_chk = j2_0 * np.exp(-g * (n + 0.5 - m) * t_chk)
        worst = max(
            np.abs((c * rx - s * ry) / 2.0 - j1_chk).max(),
            np.abs((s * rx + c * ry) / 2.0 - j2_chk).max(),
        )
        if worst > 1e-6:
            raise ArithmeticError(f"quadrature curves off by {worst:.3g}")
    return j1, j2


def initial_sigma_slope(
    params: BathParams, use_minus_eigenstate: bool = False
) -> float:
    """d<sigma_mu>/dt at t = 0 along the first frozen direction.

    Starting from the +1 eigenstate the slope is exactly zero (the state is
    dark); that is asserted to 1e-10 gamma.  Starting from the -1 eigenstate
    the slope equals twice the feed rate into the + block, so it is strictly
    positive: the meter axis relaxes upward, not towards the unmonitored
    steady state.
    """
    direction = optimal_directions(params)[0]
    axis = direction.unit_vector()
    r0 = -axis if use_minus_eigenstate else axis
    flow, drift = bloch_flow(params)
    slope = float(axis @ (flow @ r0 + drift))

    out_rate, in_rate = block_transfer_rates(params, direction)
    expected = 2.0 * in_rate if use_minus_eigenstate else -2.0 * out_rate
    if abs(slope - expected) > 1e-12 * params.gamma:
        raise ArithmeticError(
            f"slope routes disagree: {slope!r} vs {expected!r}"
        )
    if not use_minus_eigenstate and abs(slope) > 1e-10 * params.gamma:
        raise ArithmeticError(f"frozen direction is not dark: slope {slope!r}")
    return slope
