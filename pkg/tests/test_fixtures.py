"""Fixture registry: name parsing, closed-form data, seeded draws."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cslab import (
    InvalidParameter,
    RATIONAL_FIXTURES,
    WAVE_SPEED_FIXTURES,
    build_lax,
    make_fixture,
    potential_coeffs,
    random_decaying,
    random_pole_config,
    sample_wave,
    spectral_decompose,
)


def test_all_rational_fixture_names_parse():
    assert len(RATIONAL_FIXTURES) == 6
    for name in RATIONAL_FIXTURES:
        fx = make_fixture(name)
        assert fx.coeffs(64).K == 64


def test_wave_speed_fixture_table():
    speeds = [c for _, c in WAVE_SPEED_FIXTURES]
    assert speeds == pytest.approx([11.0 / 3.0, -1.0 / 3.0, 0.0])


def test_name_parse_errors():
    for bad in ("wave:defocusing:1:0.5",  # missing beta
                "plane:2",                # missing amplitude
                "modulated:3",            # missing pole
                "nonsense"):
        with pytest.raises(InvalidParameter):
            make_fixture(bad)


def test_pole_override():
    fx = make_fixture("appendix1", p=0.25)
    u = fx.coeffs(32)
    assert u.coeffs[1] / u.coeffs[0] == pytest.approx(0.25, abs=1e-14)


def test_spectrum_heads():
    np.testing.assert_allclose(make_fixture("appendix1").spectrum_head(5),
                               [-1, 0, 1, 2, 3], atol=0)
    np.testing.assert_allclose(make_fixture("appendix2").spectrum_head(5),
                               [-1, 0, 0, 1, 2], atol=0)


def test_spectrum_head_matches_eigensolver():
    for name in ("appendix1", "appendix2"):
        fx = make_fixture(name)
        u = fx.coeffs(256)
        dec = spectral_decompose(build_lax(u, fx.sign))
        np.testing.assert_allclose(dec.eigenvalues[:5], fx.spectrum_head(5),
                                   atol=1e-8)


def test_fixture_coeffs_agree_with_producing_module():
    """The registry must hand out exactly what waves/finitegap compute."""
    fx = make_fixture("wave:focusing:1:0.5:1")
    np.testing.assert_allclose(fx.coeffs(64).coeffs,
                               sample_wave(fx.wave, 0.0, 64).coeffs, atol=0)
    fx = make_fixture("appendix2")
    np.testing.assert_allclose(fx.coeffs(64).coeffs,
                               potential_coeffs(fx.finite_gap, 64).coeffs,
                               atol=1e-15)


@settings(deadline=None, max_examples=25, derandomize=True)
@given(seed=st.integers(0, 10 ** 6))
def test_random_decaying_respects_envelope(seed):
    u = random_decaying(seed, 64, rho=0.8)
    assert np.all(np.abs(u.coeffs) <= 0.8 ** np.arange(64) + 1e-15)
    again = random_decaying(seed, 64, rho=0.8)
    assert np.array_equal(u.coeffs, again.coeffs)


@settings(deadline=None, max_examples=25, derandomize=True)
@given(seed=st.integers(0, 10 ** 6))
def test_random_pole_config_invariants(seed):
    m0, poles, mults = random_pole_config(seed)
    assert m0 in (0, 1)
    assert 1 <= len(poles) <= 3
    assert all(m in (1, 2) for m in mults)
    for p in poles:
        assert 0.25 <= abs(p) <= 0.65
    for i, p in enumerate(poles):
        for q in poles[i + 1:]:
            assert abs(p - q) >= 0.2
