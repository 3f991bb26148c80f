from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from whichpath.errors import ConfigError, DomainError
from whichpath.interference import (
    de_broglie_wavelength, density_matrix_after_flight, fringe_intensity, fringe_map,
    fringe_spacing, sanity_estimates, screen_grid, two_slit_phase, visibility,
    visibility_from_extremes, write_fringe_csv, write_pgm,
)
from whichpath.materials import EV, ExperimentSetup
from whichpath.dephasing import inverse_decoherence_length

lengths = st.floats(0.0, 1.0)
inverse_lengths = st.floats(0.0, 1e4)
phases = st.floats(-50.0, 50.0)


def nominal(**kw):
    return ExperimentSetup.from_energy(150 * EV, **{"D": 10e-6, "z0": 100e-6, **kw})


class TestDensityMatrix:
    def test_no_plate(self):
        rho = density_matrix_after_flight(0.0, 123.0).as_array()
        psi = np.array([1.0, 1.0]) / math.sqrt(2)
        np.testing.assert_allclose(rho, np.outer(psi, psi), atol=1e-16)

    def test_full_dephasing(self):
        rho = density_matrix_after_flight(1.0, 1e4).as_array()
        np.testing.assert_allclose(rho, np.diag([0.5, 0.5]), atol=1e-300)

    def test_ln2(self):
        rho = density_matrix_after_flight(math.log(2.0), 1.0)
        assert rho.rho01 == pytest.approx(0.25, rel=1e-15)
        assert rho.rho10 == rho.rho01

    @given(lengths, inverse_lengths)
    def test_state_properties(self, L, inv):
        rho = density_matrix_after_flight(L, inv)
        assert rho.is_hermitian()
        assert abs(rho.trace - 1) <= 1e-12
        assert rho.eigenvalues().min() >= -1e-15
        assert rho.rho00 == rho.rho11 == 0.5

    @pytest.mark.parametrize("L,inv", [(-1.0, 1.0), (1.0, -1.0)])
    def test_negative_inputs(self, L, inv):
        with pytest.raises(DomainError):
            density_matrix_after_flight(L, inv)


class TestVisibility:
    def test_no_dephasing(self):
        assert visibility(1.0, 0.0) == 1.0

    def test_gold_example(self, gold):
        inv = inverse_decoherence_length(nominal(), gold).inverse_length
        alpha = visibility(1e-2, inv)
        assert alpha == pytest.approx(math.exp(-1e-2 * inv), rel=1e-15)
        assert 1e-3 < alpha < 1e-2

    @given(lengths, inverse_lengths)
    def test_extremes_identity(self, L, inv):
        alpha = visibility(L, inv)
        i0, ipi = fringe_intensity(0.0, L, inv), fringe_intensity(math.pi, L, inv)
        # I(0) - I(pi) cancels to a few ulp of 2 when alpha is tiny
        assert (i0 - ipi) / (i0 + ipi) == pytest.approx(alpha, rel=1e-12, abs=1e-15)

    @given(lengths, inverse_lengths, st.lists(phases, min_size=1, max_size=30))
    def test_random_grid_extremes(self, L, inv, extra):
        dphi = np.concatenate([[0.0, math.pi], extra])
        i = fringe_intensity(dphi, L, inv)
        assert visibility_from_extremes(i) == pytest.approx(visibility(L, inv), rel=1e-12,
                                                            abs=1e-15)


class TestFringeIntensity:
    def test_quarter_phase(self):
        assert fringe_intensity(math.pi / 2, 0.3, 7.0, j=1.5) == pytest.approx(3.0, rel=1e-15)

    def test_perfect_dark(self):
        assert fringe_intensity(math.pi, 0.0, 0.0) == 0.0

    @given(phases, lengths, inverse_lengths, st.floats(0.0, 10.0))
    def test_bounds_and_period(self, dphi, L, inv, j):
        alpha = visibility(L, inv)
        i = fringe_intensity(dphi, L, inv, j)
        assert 2 * j * (1 - alpha) - 1e-12 <= i <= 2 * j * (1 + alpha) + 1e-12
        assert fringe_intensity(dphi + 2 * math.pi, L, inv, j) == pytest.approx(i, rel=1e-9,
                                                                                abs=1e-12)

    def test_negative_beam(self):
        with pytest.raises(DomainError):
            fringe_intensity(0.0, 1.0, 1.0, j=-1.0)


class TestGeometry:
    def test_origin(self):
        assert two_slit_phase(0.0, nominal()) == 0.0

    def test_spacing(self):
        s = nominal()
        lam = de_broglie_wavelength(s.velocity, s.particle_mass)
        assert lam == pytest.approx(1.0e-10, rel=0.01)
        assert lam == pytest.approx(2 * math.pi * oracles.HBAR / (oracles.ME * s.velocity), rel=1e-8)
        assert fringe_spacing(s) == pytest.approx(lam * 1.0 / 10e-6, rel=1e-15)
        assert fringe_spacing(s) == pytest.approx(10e-6, rel=0.01)
        assert two_slit_phase(fringe_spacing(s), s) == pytest.approx(2 * math.pi, rel=1e-14)

    def test_bad_screen(self):
        with pytest.raises(ConfigError):
            two_slit_phase(1.0, nominal(screen_distance=0.0))

    def test_grid_hits_extremes(self):
        s = nominal()
        phi = two_slit_phase(screen_grid(s, 2, 8), s)
        assert np.any(np.isclose(np.cos(phi), 1.0)) and np.any(np.isclose(np.cos(phi), -1.0))

    def test_grid_rejects_odd(self):
        with pytest.raises(ConfigError):
            screen_grid(nominal(), 2, 7)


@pytest.fixture(scope="module")
def fmap(gold):
    s = nominal()
    return fringe_map(np.linspace(20e-6, 400e-6, 24), screen_grid(s, 3, 8), s, gold)


class TestFringeMap:
    def test_envelope(self, fmap, gold):
        np.testing.assert_allclose(fmap.row_visibility(), fmap.visibility, rtol=1e-6, atol=1e-12)
        for z0, alpha in zip(fmap.z0[::6], fmap.visibility[::6]):
            ref = inverse_decoherence_length(nominal(z0=float(z0)), gold).visibility
            assert alpha == pytest.approx(ref, rel=1e-12)

    def test_normalised(self, fmap):
        assert fmap.intensity.max() == 1.0
        assert fmap.intensity.min() >= 0.0

    def test_monotone(self, fmap):
        assert np.all(np.diff(fmap.visibility) > 0)

    def test_edges(self, fmap, gold):
        s = nominal()
        high = fringe_map([1e-3, 2e-3], screen_grid(s, 1, 8), s, gold)
        assert high.visibility[0] > 0.9 and high.visibility[1] > 0.98
        low = fmap.intensity[0]
        assert np.ptp(low) < 1e-6 * low.mean()

    def test_executor_same_result(self, fmap, gold):
        s = nominal()
        with ThreadPoolExecutor(3) as ex:
            other = fringe_map(fmap.z0, fmap.x_s, s, gold, executor=ex)
        assert np.array_equal(other.intensity, fmap.intensity)

    def test_csv_layout(self, fmap):
        buf = io.StringIO()
        write_fringe_csv(fmap, buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == len(fmap.z0) + 1
        header = lines[0].split(",")
        assert header[0] == "z0\\x_S"
        assert [float(v) for v in header[1:]] == list(fmap.x_s)
        first = [float(v) for v in lines[1].split(",")]
        assert first[0] == fmap.z0[0] and first[1:] == list(fmap.intensity[0])

    def test_pgm(self, fmap):
        buf = io.StringIO()
        write_pgm(fmap, buf)
        tokens = buf.getvalue().split()
        assert tokens[0] == "P2"
        assert (int(tokens[1]), int(tokens[2]), int(tokens[3])) == (len(fmap.x_s), len(fmap.z0), 255)
        pix = np.array(tokens[4:], dtype=int)
        assert pix.size == fmap.intensity.size and pix.max() == 255 and pix.min() >= 0


class TestSanity:
    def test_nominal(self, gold):
        est = sanity_estimates(nominal(L=1e-2), gold)
        assert est["image_force_deflection"] == pytest.approx(6e-9, rel=0.05)
        assert est["image_force_deflection"] < 100e-9
        assert est["frequency_ratio"] == pytest.approx(1e-5, rel=0.2)

    def test_dispersion(self):
        est = sanity_estimates(nominal(L=1e-2), packet_width=2e-6)
        t = 1e-2 / nominal().velocity
        s0 = 2e-6
        ref = s0 * (math.hypot(1.0, oracles.HBAR * t / (oracles.ME * s0**2)) - 1.0)
        assert est["dispersion_spread"] == pytest.approx(ref, rel=1e-6)
        assert 1e-10 < est["dispersion_spread"] < 1e-7

    def test_crossover(self):
        est = sanity_estimates(ExperimentSetup(velocity=7e6, z0=1e-4))
        assert est["crossover_temperature"] == pytest.approx(0.53, abs=0.01)
        assert "frequency_ratio" not in est
