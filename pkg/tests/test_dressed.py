import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import jv

from dressed_cqed.dressed import (
    LabelingError,
    bessel_j,
    build_effective_resonance,
    dressed_sigma_x_element,
    probe_expanded_energies,
    transmission_x,
    transmission_z,
    x_dressed_spectrum,
    z_dressed_spectrum,
    z_dressed_state,
)
from dressed_cqed.fock import displacement_operator
from dressed_cqed.models import DrivenModelSpec, build_z_driven

# J_1(ALPHA_HALF) = 0.5, root-found on scipy.special.jv.
ALPHA_HALF = 1.2067184630059078


def series_j(n, x, terms=60):
    return sum(
        (-1) ** k * (x / 2) ** (2 * k + n) / (math.factorial(k) * math.factorial(k + n))
        for k in range(terms)
    )


class TestBessel:
    def test_values_at_origin(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(1, 0.0) == 0.0
        assert bessel_j(2, 0.0) == 0.0

    def test_first_zero(self):
        assert abs(series_j(0, 2.404826)) < 1e-6
        assert abs(bessel_j(0, 2.404826)) < 1e-6

    @pytest.mark.parametrize("order", range(11))
    def test_against_scipy(self, order):
        x = np.linspace(-50, 50, 4001)
        assert np.max(np.abs(bessel_j(order, x) - jv(order, x))) < 1e-12

    @pytest.mark.parametrize("order", [0, 1, 3])
    def test_against_series_oracle(self, order):
        for x in np.linspace(0, 10, 41):
            assert bessel_j(order, x) == pytest.approx(series_j(order, x), abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            bessel_j(11, 1.0)
        with pytest.raises(ValueError):
            bessel_j(-1, 1.0)
        with pytest.raises(ValueError):
            bessel_j(0, 51.0)


class TestZDressedState:
    def test_bare_limit(self):
        s = z_dressed_state(+1, 3, 0.0, 16)
        expect = np.zeros(32)
        expect[3] = 1
        np.testing.assert_allclose(s.vector.amplitudes, expect, atol=1e-15)
        s = z_dressed_state(-1, 3, 0.0, 16)
        expect = np.zeros(32)
        expect[19] = 1
        np.testing.assert_allclose(s.vector.amplitudes, expect, atol=1e-15)

    @pytest.mark.parametrize("N, eta", [(0, 0.2), (4, 0.35), (9, 0.1)])
    def test_drive_overlap_is_double_displacement(self, N, eta):
        dim = 60
        plus = z_dressed_state(+1, N, eta, dim).vector.amplitudes[:dim]
        minus = z_dressed_state(-1, N, eta, dim).vector.amplitudes[dim:]
        D2 = displacement_operator(2 * eta, dim).matrix
        assert np.vdot(plus, minus) == pytest.approx(D2[N, N], abs=1e-12)

    @pytest.mark.parametrize("branch", [1, -1])
    @pytest.mark.parametrize("N, eta", [(0, 0.3), (5, 0.3), (12, 0.15)])
    def test_energy_expectation(self, branch, N, eta):
        eps0, dim = 0.37, 80
        H = build_z_driven(DrivenModelSpec.z_drive(eps0=eps0, lam=0.0, eta=eta, drive_dim=dim))
        s = z_dressed_state(branch, N, eta, dim, eps0=eps0)
        assert s.vector.expect(H).real == pytest.approx(N - branch * eps0 - eta**2, abs=1e-8)
        assert s.energy == pytest.approx(N - branch * eps0 - eta**2, abs=1e-15)
        assert abs(s.vector.norm - 1) < 1e-10

    def test_bad_input(self):
        with pytest.raises(ValueError):
            z_dressed_state(0, 1, 0.1, 10)
        with pytest.raises(ValueError):
            z_dressed_state(1, 10, 0.1, 10)

    def test_numeric_spectrum_labels(self):
        spec = DrivenModelSpec.z_drive(eps0=0.3, lam=0.0, eta=0.2, drive_dim=60)
        for s in z_dressed_spectrum(spec, range(0, 5)):
            assert s.labeled
            assert s.energy == pytest.approx(s.N - s.branch * 0.3 - 0.04, abs=1e-10)


class TestSigmaXElement:
    def test_origin(self):
        for mode in ("exact", "asymptotic"):
            assert dressed_sigma_x_element(10, 1, 0.0, mode) == 1.0
            assert dressed_sigma_x_element(10, 2, 0.0, mode) == 0.0

    def test_positive_for_small_eta(self):
        assert dressed_sigma_x_element(5, 1, 1e-6) > 0

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_bessel_limit_large_n(self, m):
        N = 10**4
        alpha = np.linspace(0, 6, 121)
        eta = alpha / (4 * math.sqrt(N))
        exact = np.array([dressed_sigma_x_element(N, m, e) for e in eta])
        assert np.max(np.abs(exact - jv(m - 1, alpha))) < 5e-3

    @settings(max_examples=40, deadline=None)
    @given(st.integers(3, 100), st.integers(1, 4), st.floats(0.0, 0.3))
    def test_matches_brute_force_displacement(self, N, m, eta):
        dim = 200
        D = displacement_operator(2 * eta, dim).matrix
        assert dressed_sigma_x_element(N, m, eta) == pytest.approx(D[N, N - m + 1].real, abs=1e-8)

    def test_errors(self):
        with pytest.raises(ValueError):
            dressed_sigma_x_element(1, 3, 0.1)
        with pytest.raises(ValueError):
            dressed_sigma_x_element(5, 1, 0.1, mode="bogus")


class TestEffectiveResonance:
    def test_diagonal_case(self):
        # alpha at the first zero of J_0 kills the m=1 coupling
        r = build_effective_resonance(1, omega_m0=1.0, omega_p=0.95, omega_d=1.0, g=1e-3, alpha=2.404825557695773)
        assert abs(r.coupling) < 1e-15
        assert r.delta_m < (1 - 1) * r.Delta_m
        np.testing.assert_allclose(r.ground_vector, [1, 0], atol=1e-12)

    def test_degenerate_diagonal(self):
        # m=2, omega_d=1: Delta = 1 - w/2, delta = wp - w/2; choose delta = -Delta
        w = 1.98
        Delta = 1 - w / 2
        r = build_effective_resonance(2, omega_m0=w, omega_p=w / 2 - Delta, omega_d=1.0, g=1e-3, alpha=ALPHA_HALF)
        assert r.delta_m == pytest.approx((1 - 2) * r.Delta_m, abs=1e-15)
        s = np.sign(r.coupling)
        np.testing.assert_allclose(r.ground_vector, np.array([1, -s]) / math.sqrt(2), atol=1e-7)

    def test_closed_form_vs_generic_solver(self):
        r = build_effective_resonance(2, omega_m0=1.98, omega_p=0.9901, omega_d=1.0, g=1e-3, alpha=ALPHA_HALF)
        assert r.delta_m == pytest.approx(1e-4, abs=1e-12)
        assert r.Delta_m == pytest.approx(0.01, abs=1e-12)
        assert r.coupling == pytest.approx(5e-4, abs=1e-12)
        np.testing.assert_array_equal(r.matrix, [[r.delta_m, r.coupling], [r.coupling, -r.Delta_m]])
        vals, vecs = np.linalg.eigh(r.matrix)
        np.testing.assert_allclose(r.eigenvalues, vals, atol=1e-15)
        ref = vecs[:, 0] * np.sign(vecs[0, 0])
        np.testing.assert_allclose(r.ground_vector, ref, atol=1e-12)

    def test_offset_kept_out_of_matrix(self):
        a = build_effective_resonance(3, 2.9, 0.98, 1.0, 1e-3, 1.0, N=0)
        b = build_effective_resonance(3, 2.9, 0.98, 1.0, 1e-3, 1.0, N=500)
        np.testing.assert_array_equal(a.eigenvalues, b.eigenvalues)
        assert b.omega0 - a.omega0 == 500


class TestTransmissionZ:
    def test_examples(self):
        assert transmission_z(1, 0.0) == 1.0
        assert abs(transmission_z(1, 2.404826)) < 1e-6

    def test_third_order_small_alpha(self):
        ratio = transmission_z(3, 0.02) / transmission_z(3, 0.01)
        assert ratio == pytest.approx(4.0, rel=0.01)

    def test_first_zeros_ordered(self):
        zeros = []
        for m in (1, 2, 3):
            x = np.linspace(0.1, 6, 5901)
            y = transmission_z(m, x)
            k = np.flatnonzero(np.sign(y[:-1]) != np.sign(y[1:]))[0]
            zeros.append(x[k])
        np.testing.assert_allclose(zeros, [2.4048, 3.8317, 5.1356], atol=2e-3)
        assert zeros[0] < zeros[1] < zeros[2]


class TestXSpectrum:
    def test_bare_ladder(self):
        spec = DrivenModelSpec.x_drive(lam=0.45, eta=0.0, drive_dim=30)
        states = x_dressed_spectrum(spec, range(0, 10))
        for s in states:
            assert s.energy == pytest.approx(s.N + s.branch * 0.45, abs=1e-14)
            assert s.overlap == pytest.approx(1.0)
        assert len({(s.branch, s.N) for s in states}) == len(states)

    def test_parity_labels(self):
        spec = DrivenModelSpec.x_drive(lam=0.45, eta=0.1, drive_dim=30)
        for s in x_dressed_spectrum(spec, range(0, 10)):
            # branch +1 is the sz=-1 atom state
            assert s.parity == -s.branch * (-1) ** s.N

    @pytest.mark.parametrize("lam", [0.45, 1.0, 1.45])
    def test_bessel_energy_residual_scales_as_eta_squared(self, lam):
        def residual(eta):
            spec = DrivenModelSpec.x_drive(lam=lam, eta=eta, drive_dim=80)
            return max(
                abs(s.energy - (s.N + s.branch * lam * jv(0, 4 * eta * math.sqrt(s.N))))
                for s in x_dressed_spectrum(spec, range(1, 11))
            )

        ratio = residual(0.02) / residual(0.01)
        assert 1 / 1.5 * 4 <= ratio <= 1.5 * 4

    def test_window_precondition(self):
        with pytest.raises(ValueError):
            x_dressed_spectrum(DrivenModelSpec.x_drive(lam=0.45, eta=0.1, drive_dim=30), range(10, 20))

    def test_overlap_labeling_flags_failures(self):
        spec = DrivenModelSpec.x_drive(lam=0.5, eta=0.2, drive_dim=80)
        states = x_dressed_spectrum(spec, [20, 21], labeling="overlap")
        assert any(not s.labeled for s in states)
        assert all(s.overlap < 0.5 for s in states if not s.labeled)

    def test_exact_resonance_is_ambiguous(self):
        spec = DrivenModelSpec.x_drive(lam=0.5, eta=0.05, drive_dim=40)
        states = x_dressed_spectrum(spec, [5])
        assert not all(s.labeled for s in states)


class TestTransmissionX:
    def test_bare_element_vanishes(self):
        spec = DrivenModelSpec.x_drive(lam=0.5 - 1e-3, eta=0.0, drive_dim=60)
        assert transmission_x(spec, 20) == 0.0

    def test_oscillatory(self):
        alphas = np.linspace(0, 6, 61)
        vals = []
        for a in alphas:
            spec = DrivenModelSpec.x_drive(lam=0.95, eta=a / (4 * math.sqrt(20)), drive_dim=80)
            vals.append(transmission_x(spec, 20))
        vals = np.array(vals)
        assert np.any(np.sign(vals[1:-1]) != np.sign(vals[2:]))

    @pytest.mark.parametrize("alpha", [0.2, 0.4])
    def test_truncation_converged(self, alpha):
        for eta in (alpha / (4 * math.sqrt(20)), alpha / (8 * math.sqrt(20))):
            pair = [
                transmission_x(DrivenModelSpec.x_drive(lam=0.95, eta=eta, drive_dim=d), 20)
                for d in (80, 160)
            ]
            assert abs(pair[0] - pair[1]) < 1e-8

    def test_g_scales(self):
        spec = DrivenModelSpec.x_drive(lam=0.95, eta=0.1, drive_dim=80)
        assert transmission_x(spec, 20, g=2e-3) == pytest.approx(2e-3 * transmission_x(spec, 20), rel=1e-12)

    def test_labeling_failure_raises(self):
        spec = DrivenModelSpec.x_drive(lam=0.5, eta=0.05, drive_dim=60)
        with pytest.raises(LabelingError):
            transmission_x(spec, 20)


def test_probe_expanded_energy_conventions():
    e0 = probe_expanded_energies(+1, 10, 0.4, 0, eta=0.1, g=0.01)
    assert e0["cavity_shift"] == pytest.approx(10 - 0.4 - 1e-4)
    assert e0["drive_shift"] == pytest.approx(10 - 0.4 - 1e-2)
    e1 = probe_expanded_energies(-1, 10, 0.4, 1, delta=0.002)
    assert e1["cavity_shift"] == e1["drive_shift"] == pytest.approx(10 + 0.4 + 1 + 0.002)
