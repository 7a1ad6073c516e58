"""Time integration: exactness, conservation, order, speed measurement.

The integrating-factor RK4 scheme is exact on plane waves (the nonlinear
term reduces to a frequency shift absorbed by the rotating frame), which
gives a roundoff-level end-to-end check.  Fourth order is measured on the
pole-family wave against the analytic sampler; halving dt must shrink the
error by about 2^4 (we require >= 12 to leave room for roundoff).
"""

import numpy as np
import pytest

from cslab import (
    BlowupDetected,
    DimensionMismatch,
    EvolveConfig,
    HardyCoeffs,
    InvalidParameter,
    NotATravelingWave,
    OutsideTheory,
    UnderResolved,
    WaveSampler,
    build_lax,
    conservation_report,
    evolve,
    evolve_basis,
    make_fixture,
    measure_speed,
    phase_law_report,
    sample_wave,
    spectral_decompose,
)


def _wave_state(name, K):
    fx = make_fixture(name)
    return fx, fx.coeffs(K)


def test_config_validation():
    with pytest.raises(InvalidParameter):
        EvolveConfig(sign="defocusing", K=1, T=1.0, dt=1e-3)
    with pytest.raises(InvalidParameter):
        EvolveConfig(sign="defocusing", K=8, T=1.0, dt=0.0)
    with pytest.raises(InvalidParameter):
        EvolveConfig(sign="defocusing", K=8, T=1.0, dt=1e-3, record_every=0)
    with pytest.raises(InvalidParameter):
        EvolveConfig(sign="defocusing", K=8, T=1.0, dt=1e-3, scheme="euler")
    with pytest.raises(InvalidParameter):
        EvolveConfig(sign="squeezing", K=8, T=1.0, dt=1e-3)


def test_plane_wave_evolution_is_exact():
    fx, u0 = _wave_state("plane:1:0.5", 32)
    w = fx.wave
    cfg = EvolveConfig(sign="defocusing", K=32, T=0.3, dt=1e-3)
    traj = evolve(u0, cfg)
    want = sample_wave(w, 0.3, 32).coeffs
    assert np.abs(traj.states[-1].coeffs - want).max() < 1e-12


def test_snapshot_cadence_and_final_time():
    _, u0 = _wave_state("wave:defocusing:1:0.5:1", 64)
    cfg = EvolveConfig(sign="defocusing", K=64, T=0.01, dt=1e-3,
                       record_every=3)
    traj = evolve(u0, cfg)
    np.testing.assert_allclose(traj.times, [0.0, 0.003, 0.006, 0.009, 0.01],
                               atol=1e-15)
    assert traj.coeff_matrix().shape == (5, 64)
    assert len(traj.l2) == len(traj.times) == len(traj.mean)


def test_fourth_order_convergence_on_pole_wave():
    fx, u0 = _wave_state("wave:defocusing:1:0.5:1", 64)
    w = fx.wave
    T = 0.1
    errs = []
    for dt in (8e-4, 4e-4):
        cfg = EvolveConfig(sign="defocusing", K=64, T=T, dt=dt,
                           record_every=10 ** 9)
        traj = evolve(u0, cfg)
        exact = sample_wave(w, T, 64).coeffs
        errs.append(np.linalg.norm(traj.states[-1].coeffs - exact))
    assert errs[0] / errs[1] > 12.0, f"order ratio {errs[0]/errs[1]:.2f}"


def test_conservation_on_wave_flow():
    _, u0 = _wave_state("wave:focusing:1:0.5:1", 128)
    cfg = EvolveConfig(sign="focusing", K=128, T=0.2, dt=2e-4,
                       record_every=50)
    rep = conservation_report(evolve(u0, cfg))
    assert rep.l2_drift < 1e-8
    assert rep.mean_drift < 1e-8
    assert rep.eig_drift < 1e-6
    assert rep.n_eigs == 10


def test_measured_speed_matches_closed_form():
    fx, u0 = _wave_state("wave:focusing:1:0.5:1", 128)
    cfg = EvolveConfig(sign="focusing", K=128, T=0.2, dt=5e-4,
                       record_every=10)
    traj = evolve(u0, cfg)
    c = measure_speed(traj, u0)
    assert c == pytest.approx(-1.0 / 3.0, abs=1e-6)


def test_measure_speed_guards():
    fx, u0 = _wave_state("wave:defocusing:1:0.5:1", 64)
    cfg = EvolveConfig(sign="defocusing", K=64, T=0.05, dt=5e-4,
                       record_every=10)
    traj = evolve(u0, cfg)
    other = HardyCoeffs(u0.coeffs * 1.5)
    with pytest.raises(InvalidParameter):
        measure_speed(traj, other)
    with pytest.raises(DimensionMismatch):
        measure_speed(traj, make_fixture("wave:defocusing:1:0.5:1").coeffs(48))


def test_superposition_is_not_a_traveling_wave():
    u1 = make_fixture("wave:defocusing:1:0.5:1").coeffs(64).coeffs
    u2 = make_fixture("plane:2:0.7").coeffs(64).coeffs
    mix = HardyCoeffs(u1 + u2)
    cfg = EvolveConfig(sign="defocusing", K=64, T=0.05, dt=5e-4)
    traj = evolve(mix, cfg)
    with pytest.raises(NotATravelingWave):
        measure_speed(traj, mix)


def test_blowup_threshold_guard():
    _, u0 = _wave_state("wave:defocusing:1:0.5:1", 64)
    cfg = EvolveConfig(sign="defocusing", K=64, T=0.05, dt=5e-4,
                       blowup_threshold=0.5)
    with pytest.raises(BlowupDetected):
        evolve(u0, cfg)


def test_under_resolved_initial_data_rejected():
    bad = np.zeros(64, dtype=complex)
    bad[-2] = 1.0
    with pytest.raises(UnderResolved):
        evolve(HardyCoeffs(bad), EvolveConfig(sign="defocusing", K=64,
                                              T=0.01, dt=1e-4))


def test_truncation_mismatch_rejected():
    _, u0 = _wave_state("wave:defocusing:1:0.5:1", 64)
    with pytest.raises(DimensionMismatch):
        evolve(u0, EvolveConfig(sign="defocusing", K=128, T=0.01, dt=1e-4))


def test_focusing_large_norm_warns_outside_theory():
    u0 = make_fixture("modulated:3:0.5").coeffs(64)  # norm^2 = 13/7 > 1
    cfg = EvolveConfig(sign="focusing", K=64, T=0.005, dt=1e-3)
    with pytest.warns(OutsideTheory):
        evolve(u0, cfg)


def test_evolved_basis_norms_and_phase_laws():
    fx, u0 = _wave_state("wave:defocusing:1:0.5:1", 64)
    cfg = EvolveConfig(sign="defocusing", K=64, T=0.05, dt=2.5e-4,
                       record_every=1)
    traj = evolve(u0, cfg)
    dec = spectral_decompose(build_lax(u0, "defocusing"))
    basis = evolve_basis(traj, dec.vectors[:, :4])
    norms = np.linalg.norm(basis.columns[-1], axis=0)
    np.testing.assert_allclose(norms, 1.0, atol=1e-10)
    rep = phase_law_report(traj, basis)
    for law in ("potential_law", "mean_law", "shift_law"):
        assert rep[law] < 1e-8, f"{law} residual {rep[law]:.3e}"


def test_evolve_basis_shape_guard():
    _, u0 = _wave_state("wave:defocusing:1:0.5:1", 64)
    traj = evolve(u0, EvolveConfig(sign="defocusing", K=64, T=0.01, dt=1e-3))
    with pytest.raises(DimensionMismatch):
        evolve_basis(traj, np.eye(32, 2, dtype=complex))


def test_time_sampler_agrees_with_flow():
    """Independent cross-check: the analytic sampler solves the same PDE the
    integrator discretizes, so end states must agree to scheme accuracy."""
    fx, u0 = _wave_state("modulated:3:0.5", 64)
    w = fx.wave
    cfg = EvolveConfig(sign="focusing", K=64, T=0.1, dt=2e-4)
    with pytest.warns(OutsideTheory):  # norm^2 = 13/7 exceeds the smallness bar
        traj = evolve(u0, cfg)
    exact = WaveSampler(w)(0.1, 64).coeffs
    assert np.abs(traj.states[-1].coeffs - exact).max() < 1e-10
