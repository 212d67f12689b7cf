"""Open-system dynamics of the two-level system coupled to the squeezed bath.

The master equation is represented as a 4x4 generator acting on the row-major
vectorisation of rho (vec(A rho B) = kron(A, B^T) vec(rho)).  Three generator
forms are supported:

  expanded  - damping, pumping and the two phase-sensitive cross terms spelled
              out separately,
  lindblad  - the same channel written with the single jump operator S,
  measured  - the expanded generator sandwiched between the eigenprojectors of
              a frozen measurement direction (nonselective monitoring).

The first two must agree to machine precision; tests rely on that redundancy.
Time stepping is classical fixed-step RK4.  Because the flow is linear the
whole RK4 update collapses to one precomputed 4x4 matrix per (form, dt), so
long trajectories cost one small matvec per step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algebra import (
    BlochVector,
    DensityMatrix,
    MeasurementDirection,
    SIGMA_MINUS,
    SIGMA_PLUS,
    direction_eigenstates,
)
from .bath import BathParams, lindblad_operator
from .formatting import write_csv

__all__ = [
    "IntegrationError",
    "SuperoperatorForm",
    "EXPANDED",
    "LINDBLAD",
    "measured_form",
    "generator_matrix",
    "liouvillian_expanded",
    "liouvillian_lindblad",
    "bloch_flow",
    "steady_state_bloch",
    "analytic_bloch",
    "TimeSeries",
    "integrate",
]

DEFAULT_STEP_SCALE = 1e-3  # default dt = 1e-3 / gamma


class IntegrationError(RuntimeError):
    """Numerical propagation produced an invalid state (trace or positivity)."""


@dataclass(frozen=True)
class SuperoperatorForm:
    """Which generator to build; `direction` only applies to kind='measured'."""

    kind: str
    direction: MeasurementDirection | None = None

    def __post_init__(self):
        if self.kind not in ("expanded", "lindblad", "measured"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "measured" and self.direction is None:
            raise ValueError("measured form needs a direction")
        if self.kind != "measured" and self.direction is not None:
            raise ValueError(f"{self.kind} form takes no direction")


EXPANDED = SuperoperatorForm("expanded")
LINDBLAD = SuperoperatorForm("lindblad")


def measured_form(direction: MeasurementDirection) -> SuperoperatorForm:
    return SuperoperatorForm("measured", direction)


def _kron_left(a: np.ndarray) -> np.ndarray:
    return np.kron(a, np.eye(2))


def _kron_right(b: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(2), b.T)


def _sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # vec(a rho b) = kron(a, b^T) vec(rho)
    return np.kron(a, b.T)


def _dissipator(op: np.ndarray) -> np.ndarray:
    opd = op.conj().T
    anti = opd @ op
    return _sandwich(op, opd) - 0.5 * (_kron_left(anti) + _kron_right(anti))


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@lru_cache(maxsize=None)
def _expanded_generator(params: BathParams) -> np.ndarray:
    n, m, psi, g = params.nbar, params.correlation, params.phase, params.gamma
    sp = np.asarray(SIGMA_PLUS)
    sm = np.asarray(SIGMA_MINUS)
    gen = g * (n + 1.0) * _dissipator(sm)
    gen += g * n * _dissipator(sp)
    gen -= g * m * np.exp(1j * psi) * _sandwich(sp, sp)
    gen -= g * m * np.exp(-1j * psi) * _sandwich(sm, sm)
    return _frozen(gen)


@lru_cache(maxsize=None)
def _lindblad_generator(params: BathParams) -> np.ndarray:
    return _frozen(params.gamma * _dissipator(lindblad_operator(params)))


@lru_cache(maxsize=None)
def _dephasing_map(direction: MeasurementDirection) -> np.ndarray:
    plus, minus = direction_eigenstates(direction)
    kp, km = plus.ket(), minus.ket()
    proj_p = np.outer(kp, kp.conj())
    proj_q = np.outer(km, km.conj())
    return _frozen(_sandwich(proj_p, proj_p) + _sandwich(proj_q, proj_q))


def generator_matrix(form: SuperoperatorForm, params: BathParams) -> np.ndarray:
    """4x4 generator of the requested form (read-only array)."""
    if form.kind == "expanded":
        return _expanded_generator(params)
    if form.kind == "lindblad":
        return _lindblad_generator(params)
    deph = _dephasing_map(form.direction)
    return deph @ _expanded_generator(params) @ deph


def _apply(gen: np.ndarray, rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        rho = rho.matrix
    return (gen @ np.asarray(rho, dtype=complex).reshape(4)).reshape(2, 2)


def liouvillian_expanded(params: BathParams, rho) -> np.ndarray:
    """d rho / dt under the expanded generator, at the matrix level."""
    return _apply(_expanded_generator(params), rho)


def liouvillian_lindblad(params: BathParams, rho) -> np.ndarray:
    """d rho / dt under the single-jump-operator generator."""
    return _apply(_lindblad_generator(params), rho)


def bloch_flow(params: BathParams) -> tuple[np.ndarray, np.ndarray]:
    """Affine Bloch flow dr/dt = A r + d0 of the unmonitored channel."""
    n, m, psi, g = params.nbar, params.correlation, params.phase, params.gamma
    half = n + 0.5
    a = -g * np.array(
        [
            [half + m * math.cos(psi), -m * math.sin(psi), 0.0],
            [-m * math.sin(psi), half - m * math.cos(psi), 0.0],
            [0.0, 0.0, 2.0 * n + 1.0],
        ]
    )
    d0 = np.array([0.0, 0.0, -g])
    return a, d0


def steady_state_bloch(params: BathParams) -> BlochVector:
    """Unique fixed point (0, 0, -1/(2 nbar + 1)) of the unmonitored flow."""
    return BlochVector(0.0, 0.0, -1.0 / (2.0 * params.nbar + 1.0))


def analytic_bloch(params: BathParams, initial, t):
    """Closed-form Bloch trajectory of the unmonitored channel.

    The transverse plane decouples into one quadrature decaying at
    gamma (nbar + 1/2 + M) and the orthogonal one at gamma (nbar + 1/2 - M);
    the inversion relaxes at gamma (2 nbar + 1) towards -1/(2 nbar + 1).
    Scalar t returns a BlochVector, an array of times returns an (n, 3) array.
    """
    if not isinstance(initial, BlochVector):
        initial = BlochVector(*initial)
    if np.any(np.asarray(t, dtype=float) < 0.0):
        raise ValueError("t must be nonnegative")
    n, m, psi, g = params.nbar, params.correlation, params.phase, params.gamma
    c, s = math.cos(psi / 2.0), math.sin(psi / 2.0)
    u1_0 = c * initial.rx - s * initial.ry
    u2_0 = s * initial.rx + c * initial.ry
    rz_ss = -1.0 / (2.0 * n + 1.0)

    t_arr = np.asarray(t, dtype=float)
    u1 = u1_0 * np.exp(-g * (n + 0.5 + m) * t_arr)
    u2 = u2_0 * np.exp(-g * (n + 0.5 - m) * t_arr)
    rx = c * u1 + s * u2
    ry = -s * u1 + c * u2
    rz = rz_ss + (initial.rz - rz_ss) * np.exp(-g * (2.0 * n + 1.0) * t_arr)
    if t_arr.ndim == 0:
        return BlochVector(float(rx), float(ry), float(rz))
    return np.column_stack([rx, ry, rz])


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Sampled trajectory: times[i] pairs with bloch[i] (and any extras)."""

    times: np.ndarray
    bloch: np.ndarray
    dt: float
    bath: BathParams
    form: SuperoperatorForm
    initial_bloch: BlochVector
    extras: tuple[tuple[str, np.ndarray], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.times.shape[0] != self.bloch.shape[0]:
            raise ValueError("times and bloch lengths differ")
        for name, values in self.extras:
            if values.shape[0] != self.times.shape[0]:
                raise ValueError(f"extra column {name!r} length differs")

    def extra(self, name: str) -> np.ndarray:
        for key, values in self.extras:
            if key == name:
                return values
        raise KeyError(name)

    def to_csv(self, path) -> None:
        header = ["t", "rx", "ry", "rz"] + [name for name, _ in self.extras]
        columns = [self.times, self.bloch[:, 0], self.bloch[:, 1], self.bloch[:, 2]]
        columns += [values for _, values in self.extras]
        write_csv(path, header, zip(*columns))


@lru_cache(maxsize=None)
def _rk4_step_matrix(
    form: SuperoperatorForm, params: BathParams, dt: float
) -> np.ndarray:
    gen = generator_matrix(form, params)
    step = np.eye(4, dtype=complex)
    term = np.eye(4, dtype=complex)
    for order in range(1, 5):
        term = term @ gen * (dt / order)
        step = step + term
    return _frozen(step)


def _check_state(matrix: np.ndarray, step_index: int) -> None:
    herm_defect = np.abs(matrix - matrix.conj().T).max()
    if herm_defect > 1e-6:
        raise IntegrationError(
            f"hermiticity defect {herm_defect:.3g} at step {step_index}"
        )
    trace_defect = abs(matrix[0, 0].real + matrix[1, 1].real - 1.0)
    if trace_defect > 1e-6:
        raise IntegrationError(f"trace drift {trace_defect:.3g} at step {step_index}")
    min_eig = DensityMatrix._min_eigenvalue(0.5 * (matrix + matrix.conj().T))
    if min_eig < -1e-6:
        raise IntegrationError(f"eigenvalue {min_eig:.3g} at step {step_index}")


def integrate(
    form: SuperoperatorForm,
    params: BathParams,
    rho0: DensityMatrix,
    t_max: float,
    dt: float | None = None,
) -> TimeSeries:
    """Propagate rho0 for a duration t_max with fixed-step RK4.

    Every step is validated: trace and positivity drifting beyond 1e-6 abort
    with IntegrationError rather than being renormalised away.  For the
    measured form the initial state is first dephased in the measurement
    basis, mirroring the opening nonselective readout of the protocol.
    """
    if not math.isfinite(t_max) or t_max <= 0.0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    if dt is None:
        dt = DEFAULT_STEP_SCALE / params.gamma
    if not math.isfinite(dt) or dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if dt > t_max * (1.0 + 1e-12):
        raise ValueError("dt must not exceed t_max")
    n_steps = max(1, round(t_max / dt))

    vec = np.asarray(rho0.matrix, dtype=complex).reshape(4).copy()
    if form.kind == "measured":
        vec = _dephasing_map(form.direction) @ vec

    step = _rk4_step_matrix(form, params, float(dt))
    states = np.empty((n_steps + 1, 4), dtype=complex)
    states[0] = vec
    for i in range(1, n_steps + 1):
        vec = step @ vec
        _check_state(vec.reshape(2, 2), i)
        states[i] = vec

    matrices = states.reshape(-1, 2, 2)
    bloch = np.column_stack(
        [
            (matrices[:, 0, 1] + matrices[:, 1, 0]).real,
            (1j * (matrices[:, 0, 1] - matrices[:, 1, 0])).real,
            (matrices[:, 0, 0] - matrices[:, 1, 1]).real,
        ]
    )
    times = dt * np.arange(n_steps + 1)

    extras: tuple[tuple[str, np.ndarray], ...] = ()
    if form.kind == "measured":
        axis = form.direction.unit_vector()
        along = bloch @ axis
        extras = (("sigma_mu_mean", along), ("survival", (1.0 + along) / 2.0))

    return TimeSeries(
        times=times,
        bloch=bloch,
        dt=float(dt),
        bath=params,
        form=form,
        initial_bloch=BlochVector(*bloch[0]),
        extras=extras,
    )
