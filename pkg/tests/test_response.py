"""Tests for the frequency- and time-domain response machinery.

Closed-form references: the Ohmic-bath oscillator has the damped-cosine
response χ_qq(t) = e^{−Dt/2} sin(ω₁t)/ω₁ with ω₁ = √(ω₀²−D²/4); its
divisibility residual is D·χ̃_qq²·[[1, iω],[−iω, ω²]].  Mean evolution
after a kick solves q̈ + Dq̇ + ω₀²q = 0 from (q, p)(0⁺) = (−a_p, a_q+D·a_p),
where the D·a_p term is the friction impulse of the delta-correlated
kernel acting on the position jump.
"""
import math

import numpy as np
import pytest

from nonmarkov.errors import CutoffSensitive, DivisionNearZero
from nonmarkov.quadrature import QuadratureConfig, integrate
from nonmarkov.response import (
    CHI_PLUS,
    CHI_PLUS_INV,
    ComplexMatrix2,
    ModelParams,
    chi_matrix,
    chi_prime_matrix,
    chi_qq,
    chi_qq_vec,
    chi_time,
    divisibility_residual,
    feature_frequencies,
    propagate_means,
)
from nonmarkov.spectral import OhmicSD, PeakedSD

P1 = ModelParams(omega0=1.0, beta=2.0)
PEAKED = PeakedSD(coupling=1.0, width=0.5, resonance=2.0)


def ohmic_chi_closed(damping: float, omega0: float, t: float) -> np.ndarray:
    w1 = math.sqrt(omega0 ** 2 - damping ** 2 / 4.0)
    e = math.exp(-damping * t / 2.0)
    s, c = math.sin(w1 * t), math.cos(w1 * t)
    qq = e * s / w1
    dot = e * (c - damping / (2.0 * w1) * s)
    pp = e * ((omega0 ** 2 - damping ** 2 / 2.0) / w1 * s + damping * c)
    return np.array([[qq, -dot], [dot, pp]])


def damped_means_closed(damping, omega0, a_q, a_p, t):
    w1 = math.sqrt(omega0 ** 2 - damping ** 2 / 4.0)
    q0, p0 = -a_p, a_q + damping * a_p
    e = math.exp(-damping * t / 2.0)
    s, c = math.sin(w1 * t), math.cos(w1 * t)
    q = e * (q0 * c + (p0 + damping * q0 / 2.0) / w1 * s)
    p = e * (p0 * c - (omega0 ** 2 * q0 + damping * p0 / 2.0) / w1 * s)
    return q, p


class TestChiQQ:
    def test_static_susceptibility(self):
        p = ModelParams(omega0=2.0, beta=1.0)
        assert chi_qq(p, OhmicSD(0.4), 0.0) == pytest.approx(0.25, abs=1e-15)

    def test_ohmic_on_resonance(self):
        assert chi_qq(P1, OhmicSD(1.0), 1.0) == pytest.approx(1j, abs=1e-15)

    def test_high_frequency_falloff(self):
        val = chi_qq(P1, OhmicSD(1.0), 1e3)
        assert abs(val) < 1.1 / 1e6

    def test_undamped_resonance_rejected(self):
        with pytest.raises(DivisionNearZero):
            chi_qq(P1, OhmicSD(0.0), 1.0)


class TestChiMatrix:
    def test_entry_ratios(self):
        for sd in (OhmicSD(0.7), PEAKED):
            for w in (-3.2, 0.4, 1.0, 7.7):
                m = chi_matrix(P1, sd, w)
                assert abs(m.qp - 1j * w * m.qq) < 1e-12
                assert abs(m.pq + 1j * w * m.qq) < 1e-12
                assert abs(m.pp - (1.0 + w ** 2 * m.qq)) < 1e-12

    def test_hermitian_frequency_symmetry(self):
        for sd in (OhmicSD(0.7), PEAKED):
            for w in (0.3, 1.1, 4.5):
                plus = chi_matrix(P1, sd, w).as_array()
                minus = chi_matrix(P1, sd, -w).as_array()
                assert np.abs(minus - plus.conj()).max() < 1e-12

    def test_decoupled_pp_is_free_oscillator(self):
        m = chi_matrix(P1, OhmicSD(0.0), 0.5)
        assert m.pp == pytest.approx(1.0 + 0.25 / 0.75, abs=1e-14)


class TestChiPrime:
    def test_matches_central_differences(self):
        for sd in (OhmicSD(0.7), PEAKED):
            for w in (0.37, 1.0, 2.2):
                m = chi_prime_matrix(P1, sd, w)
                h = 1e-5 * max(1.0, abs(w))
                for name in ("qq", "qp", "pq", "pp"):
                    vals = [getattr(chi_matrix(P1, sd, w + s), name)
                            for s in (h, -h, h / 2, -h / 2)]
                    d1 = (vals[0] - vals[1]) / (2.0 * h)
                    d2 = (vals[2] - vals[3]) / h
                    oracle = (4.0 * d2 - d1) / 3.0
                    assert getattr(m, name) == pytest.approx(oracle, rel=1e-7)

    def test_ohmic_derivative_at_zero(self):
        # χ̃_qq'(0) = χ̃_qq(0)²·(i·damping) = i·damping/ω₀⁴
        assert chi_prime_matrix(P1, OhmicSD(0.7), 0.0).qq == pytest.approx(
            0.7j, abs=1e-15)
        p2 = ModelParams(omega0=1.3, beta=1.0)
        assert chi_prime_matrix(p2, OhmicSD(0.4), 0.0).qq == pytest.approx(
            0.4j / 1.3 ** 4, abs=1e-15)


class TestDivisibilityResidual:
    def test_decoupled_is_zero(self):
        for sd in (OhmicSD(0.0), PeakedSD(0.0, 0.5, 2.0)):
            r = divisibility_residual(P1, sd, 0.7).as_array()
            assert np.abs(r).max() < 1e-14

    def test_ohmic_point_value(self):
        r = divisibility_residual(P1, OhmicSD(1.0), 1.0).as_array()
        expect = -np.array([[1.0, 1j], [-1j, 1.0]])
        assert np.abs(r - expect).max() < 1e-12

    def test_ohmic_closed_form_on_grid(self):
        for damping in (0.1, 1.0):
            sd = OhmicSD(damping)
            for w in np.linspace(-10.0, 10.0, 100):
                r = divisibility_residual(P1, sd, w).as_array()
                c = chi_qq(P1, sd, w)
                expect = damping * c * c * np.array([[1.0, 1j * w],
                                                     [-1j * w, w * w]])
                assert np.abs(r - expect).max() < 1e-10


class TestChiPlus:
    def test_round_trip(self):
        assert np.array_equal(CHI_PLUS @ CHI_PLUS_INV, np.eye(2))

    def test_skew_and_unit_determinant(self):
        assert np.array_equal(CHI_PLUS.T, -CHI_PLUS)
        assert np.linalg.det(CHI_PLUS) == pytest.approx(1.0, abs=1e-15)
        assert CHI_PLUS[1, 0] == 1.0 and CHI_PLUS[0, 1] == -1.0


class TestChiTime:
    def test_zero_time_is_zero_matrix(self):
        assert np.array_equal(chi_time(P1, OhmicSD(0.2), 0.0), np.zeros((2, 2)))
        assert np.array_equal(chi_time(P1, PEAKED, 0.0), np.zeros((2, 2)))

    def test_ohmic_damped_oscillation(self):
        sd = OhmicSD(0.2)
        for t in (0.3, 1.0, 2.7, 5.0, 12.0, 20.0):
            got = chi_time(P1, sd, t)
            assert np.abs(got - ohmic_chi_closed(0.2, 1.0, t)).max() < 1e-4

    def test_strongly_damped(self):
        sd = OhmicSD(1.5)
        for t in (0.5, 3.0, 9.0):
            got = chi_time(P1, sd, t)
            assert np.abs(got - ohmic_chi_closed(1.5, 1.0, t)).max() < 1e-4

    def test_decoupled_free_rotation(self):
        t = 1.234
        got = chi_time(P1, OhmicSD(0.0), t)
        s, c = math.sin(t), math.cos(t)
        assert np.abs(got - np.array([[s, -c], [c, s]])).max() < 1e-14

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            chi_time(P1, OhmicSD(0.2), -0.1)

    def test_deterministic(self):
        a = chi_time(P1, PEAKED, 2.5)
        b = chi_time(P1, PEAKED, 2.5)
        assert np.array_equal(a, b)


class TestPropagateMeans:
    def test_post_kick_values(self):
        assert propagate_means(P1, OhmicSD(0.2), 1.0, 1.0, 0.0) == (-1.0, 1.0)

    def test_smooth_kernel_limit(self):
        sd = PeakedSD(0.3, 0.5, 2.0)
        q, p = propagate_means(P1, sd, 1.0, 1.0, 1e-4)
        assert q == pytest.approx(-1.0, abs=5e-4)
        assert p == pytest.approx(1.0, abs=5e-4)

    def test_free_rotation_conserves_energy(self):
        sd = OhmicSD(0.0)
        e0 = 1.0 ** 2 * 1.0 + 0.5 ** 2  # ω₀²·a_p² + a_q² at t=0⁺... energy of (−a_p, a_q)
        for t in (0.7, 2.0, 5.5, 11.0):
            q, p = propagate_means(P1, sd, 0.5, 1.0, t)
            assert q ** 2 + p ** 2 == pytest.approx(e0, rel=1e-12)

    def test_ohmic_matches_damped_closed_form(self):
        # Fig-2 style kick: a_p/√ω₀ = √ω₀·a_q = 1 with ω₀ = 1
        sd = OhmicSD(0.2)
        for t in np.linspace(0.25, 20.0, 12):
            got = propagate_means(P1, sd, 1.0, 1.0, t)
            ref = damped_means_closed(0.2, 1.0, 1.0, 1.0, t)
            assert abs(got[0] - ref[0]) < 1e-4
            assert abs(got[1] - ref[1]) < 1e-4


class TestSumRule:
    def test_static_value_recovered(self):
        # (2/π)∫₀^∞ Im χ̃_qq/ω dω must equal the static susceptibility 1/ω₀²
        cfg = QuadratureConfig()
        cases = [OhmicSD(0.1), OhmicSD(1.0), PEAKED]
        for sd in cases:
            bp = feature_frequencies(P1, sd)

            def ratio(w, sd=sd):
                return np.imag(chi_qq_vec(P1, sd, w)) / w + 0.0j

            val = integrate(ratio, 0.0, math.inf, cfg, breakpoints=bp)
            assert 2.0 / math.pi * val.real == pytest.approx(1.0, rel=1e-6)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(omega0=0.0, beta=1.0)
        with pytest.raises(ValueError):
            ModelParams(omega0=1.0, beta=-2.0)
        with pytest.raises(ValueError):
            ModelParams(omega0=1.0, beta=1.0, hbar=-0.5)
        with pytest.raises(ValueError):
            ModelParams(omega0=1.0, beta=1.0, cutoff=0.5)

    def test_low_cutoff_warns(self):
        with pytest.warns(CutoffSensitive):
            ModelParams(omega0=1.0, beta=1.0, cutoff=5.0)

    def test_default_cutoff(self):
        assert ModelParams(omega0=2.0, beta=1.0).cutoff == 2000.0


class TestFeatureFrequencies:
    def test_contains_resonance(self):
        pts = feature_frequencies(P1, OhmicSD(0.2))
        assert any(abs(x - 1.0) < 0.2 for x in pts)
        assert all(x > 0 for x in pts)
        assert pts == sorted(pts)

    def test_peaked_includes_mode_structure(self):
        pts = feature_frequencies(P1, PEAKED)
        assert any(abs(x - PEAKED.resonance) < PEAKED.width for x in pts)
