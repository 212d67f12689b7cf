import math

import numpy as np
import pytest

from zenobath.algebra import (
    BlochVector,
    DensityMatrix,
    MeasurementDirection,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    bloch_to_density,
)
from zenobath.bath import BathParams
from zenobath.dynamics import (
    EXPANDED,
    LINDBLAD,
    IntegrationError,
    SuperoperatorForm,
    analytic_bloch,
    bloch_flow,
    integrate,
    liouvillian_expanded,
    liouvillian_lindblad,
    measured_form,
    steady_state_bloch,
)

from test_algebra import random_bloch


def random_params(rng):
    return BathParams(
        nbar=rng.uniform(0.0, 6.0),
        phase=rng.uniform(0.0, 2 * math.pi),
        gamma=rng.uniform(0.3, 3.0),
    )


def test_form_validation():
    with pytest.raises(ValueError):
        SuperoperatorForm("weird")
    with pytest.raises(ValueError):
        SuperoperatorForm("measured")  # direction required
    with pytest.raises(ValueError):
        SuperoperatorForm("expanded", MeasurementDirection(1.0, 0.0))


def test_vacuum_fixed_points():
    p = BathParams(nbar=0.0)
    ground = np.diag([0.0, 1.0]).astype(complex)
    assert np.abs(liouvillian_expanded(p, ground)).max() == 0.0
    excited = np.diag([1.0, 0.0]).astype(complex)
    expected = p.gamma * (np.diag([0.0, 1.0]) - np.diag([1.0, 0.0]))
    np.testing.assert_allclose(liouvillian_expanded(p, excited), expected, atol=1e-15)


def test_steady_state_annihilated():
    rng = np.random.default_rng(41)
    for _ in range(30):
        p = random_params(rng)
        rho_ss = bloch_to_density(steady_state_bloch(p))
        assert np.abs(liouvillian_expanded(p, rho_ss)).max() < 1e-12 * p.gamma
        assert np.abs(liouvillian_lindblad(p, rho_ss)).max() < 1e-12 * p.gamma


def test_liouvillian_output_structure():
    rng = np.random.default_rng(43)
    for _ in range(1000):
        p = random_params(rng)
        rho = bloch_to_density(random_bloch(rng))
        for flow in (liouvillian_expanded(p, rho), liouvillian_lindblad(p, rho)):
            assert abs(np.trace(flow)) < 1e-13 * p.gamma
            assert np.abs(flow - flow.conj().T).max() < 1e-13 * p.gamma


def test_form_equivalence_and_linearity():
    rng = np.random.default_rng(47)
    for _ in range(200):
        p = random_params(rng)
        rho_a = bloch_to_density(random_bloch(rng))
        rho_b = bloch_to_density(random_bloch(rng))
        gap = liouvillian_expanded(p, rho_a) - liouvillian_lindblad(p, rho_a)
        assert np.abs(gap).max() < 1e-12 * p.gamma
        a = rng.uniform()
        mix = DensityMatrix(a * rho_a.matrix + (1 - a) * rho_b.matrix)
        combined = a * liouvillian_expanded(p, rho_a) + (1 - a) * liouvillian_expanded(
            p, rho_b
        )
        assert np.abs(liouvillian_expanded(p, mix) - combined).max() < 1e-12 * p.gamma


def test_bloch_flow_matches_superoperator():
    rng = np.random.default_rng(53)
    paulis = (SIGMA_X, SIGMA_Y, SIGMA_Z)
    for _ in range(100):
        p = random_params(rng)
        b = random_bloch(rng)
        flow = liouvillian_expanded(p, bloch_to_density(b))
        derivative = np.array([np.trace(s @ flow).real for s in paulis])
        a, d0 = bloch_flow(p)
        np.testing.assert_allclose(derivative, a @ b.as_array() + d0, atol=1e-12)


def test_analytic_bloch_basics():
    p = BathParams(nbar=1.0)
    b0 = BlochVector(0.4, -0.3, 0.2)
    at0 = analytic_bloch(p, b0, 0.0)
    assert (at0.rx, at0.ry, at0.rz) == (b0.rx, b0.ry, b0.rz)
    # transverse decay at the fast rate: e^{-(1.5 + sqrt 2)}
    val = analytic_bloch(p, BlochVector(1.0, 0.0, 0.0), 1.0)
    assert val.rx == pytest.approx(math.exp(-(1.5 + math.sqrt(2.0))), rel=1e-12)
    assert val.ry == pytest.approx(0.0, abs=1e-15)
    # relaxation toward (0, 0, -1/(2N+1))
    late = analytic_bloch(p, BlochVector(0.0, 0.0, 0.0), 50.0)
    assert late.rz == pytest.approx(-1.0 / 3.0, abs=1e-12)
    with pytest.raises(ValueError):
        analytic_bloch(p, b0, -0.5)
    arr = analytic_bloch(p, b0, np.linspace(0.0, 2.0, 7))
    assert arr.shape == (7, 3)


def test_integrate_matches_analytic():
    rng = np.random.default_rng(59)
    for _ in range(5):
        p = random_params(rng)
        b0 = random_bloch(rng)
        series = integrate(EXPANDED, p, bloch_to_density(b0), 5.0 / p.gamma)
        exact = analytic_bloch(p, b0, series.times)
        assert np.abs(series.bloch - exact).max() < 1e-6


def test_integrate_form_agreement():
    p = BathParams(nbar=1.3, phase=2.1)
    rho0 = bloch_to_density(BlochVector(0.5, 0.2, -0.4))
    a = integrate(EXPANDED, p, rho0, 2.0, 1e-3)
    b = integrate(LINDBLAD, p, rho0, 2.0, 1e-3)
    assert np.abs(a.bloch - b.bloch).max() < 1e-10
    np.testing.assert_array_equal(a.times, b.times)


def test_integrate_single_coarse_step():
    p = BathParams(nbar=1.0)
    rho0 = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
    series = integrate(EXPANDED, p, rho0, 0.3, 0.3)
    assert series.times.size == 2
    exact = analytic_bloch(p, BlochVector(0.0, 0.0, 1.0), 0.3)
    # one coarse step: truncation ~ (4/3) (h lambda)^5 / 5! with h lambda = -0.9
    assert abs(series.bloch[-1][2] - exact.rz) < 1e-2


def test_integrate_rejects_bad_grid():
    p = BathParams(nbar=1.0)
    rho0 = DensityMatrix.maximally_mixed()
    with pytest.raises(ValueError):
        integrate(EXPANDED, p, rho0, -1.0)
    with pytest.raises(ValueError):
        integrate(EXPANDED, p, rho0, 1.0, 2.0)  # dt > t_max


def test_integrate_flags_unstable_step():
    # dt far beyond the stability region: truncated series amplifies modes
    p = BathParams(nbar=5.0)
    rho0 = bloch_to_density(BlochVector(0.0, 0.0, 1.0))
    with pytest.raises(IntegrationError):
        integrate(EXPANDED, p, rho0, 5.0, 0.5)


def test_measured_form_dephases_initial_state():
    p = BathParams(nbar=1.0)
    direction = MeasurementDirection(0.0, 0.0)  # monitor sigma_z
    rho0 = bloch_to_density(BlochVector(0.8, 0.0, 0.3))
    series = integrate(measured_form(direction), p, rho0, 0.1, 1e-3)
    np.testing.assert_allclose(series.bloch[0], [0.0, 0.0, 0.3], atol=1e-14)
    assert series.initial_bloch.rz == pytest.approx(0.3, abs=1e-14)
    axis = direction.unit_vector()
    np.testing.assert_allclose(
        series.extra("sigma_mu_mean"), series.bloch @ axis, atol=0
    )
    np.testing.assert_allclose(
        series.extra("survival"), (1.0 + series.bloch @ axis) / 2.0, atol=0
    )


def test_time_series_grid_and_csv(tmp_path):
    p = BathParams(nbar=0.5)
    series = integrate(EXPANDED, p, DensityMatrix.maximally_mixed(), 0.02, 1e-3)
    steps = np.diff(series.times)
    np.testing.assert_allclose(steps, 1e-3, rtol=1e-12)
    out = tmp_path / "series.csv"
    series.to_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "t,rx,ry,rz"
    assert len(lines) == series.times.size + 1
