"""Tests for equilibrium covariances and correlation spectra."""
import math
import warnings

import numpy as np
import pytest

from nonmarkov.correlations import (
    CovarianceMatrix,
    covariance0,
    exact_cqq_vec,
    exact_spectrum,
    rt_entries_vec,
    rt_spectrum,
    rt_spectrum_general,
)
from nonmarkov.errors import CutoffSensitive
from nonmarkov.response import ModelParams
from nonmarkov.spectral import OhmicSD, PeakedSD

PEAKED = PeakedSD(coupling=1.0, width=0.5, resonance=2.0)
FREE_QUANTUM_CQQ = 0.6565176427496657  # (ħ/2ω₀)·coth(βħω₀/2) at ħ=1, β=2, ω₀=1


class TestCovariance0:
    def test_classical_equipartition(self):
        p = ModelParams(omega0=1.0, beta=2.0)
        for sd in (OhmicSD(0.1), OhmicSD(0.5), PEAKED,
                   PeakedSD(0.75, 0.3, 1.0)):
            c = covariance0(p, sd)
            assert c.c_qq == pytest.approx(0.5, rel=1e-6)
            assert c.c_pp == pytest.approx(0.5, rel=1e-6)

    def test_classical_scales_with_frequency(self):
        p = ModelParams(omega0=2.0, beta=1.5)
        c = covariance0(p, OhmicSD(0.3))
        assert c.c_qq == pytest.approx(1.0 / (1.5 * 4.0), rel=1e-6)
        assert c.c_pp == pytest.approx(1.0 / 1.5, rel=1e-6)

    def test_off_diagonals_vanish(self):
        c = covariance0(ModelParams(omega0=1.0, beta=2.0), OhmicSD(0.5))
        assert c.c_qp == 0.0 and c.c_pq == 0.0

    def test_decoupled_quantum_closed_form(self):
        p = ModelParams(omega0=1.0, beta=2.0, hbar=1.0)
        c = covariance0(p, OhmicSD(0.0))
        assert c.c_qq == pytest.approx(FREE_QUANTUM_CQQ, rel=1e-12)
        assert c.c_pp == pytest.approx(FREE_QUANTUM_CQQ, rel=1e-12)

    def test_weak_coupling_approaches_free_limit(self):
        p = ModelParams(omega0=1.0, beta=2.0, hbar=1.0)
        c = covariance0(p, OhmicSD(0.01))
        assert c.c_qq == pytest.approx(FREE_QUANTUM_CQQ, abs=1e-3)

    def test_quantum_ohmic_momentum_is_cutoff_limited(self):
        p = ModelParams(omega0=1.0, beta=2.0, hbar=1.0)
        with pytest.warns(CutoffSensitive):
            covariance0(p, OhmicSD(0.5))

    def test_quantum_peaked_is_cutoff_clean(self):
        p = ModelParams(omega0=1.0, beta=2.0, hbar=1.0)
        with warnings.catch_warnings():
            warnings.simplefilter("error", CutoffSensitive)
            c = covariance0(p, PEAKED)
        assert c.c_qq > 0.5  # zero-point motion on top of thermal

    def test_deterministic(self):
        p = ModelParams(omega0=1.0, beta=2.0)
        a = covariance0(p, OhmicSD(0.3))
        b = covariance0(p, OhmicSD(0.3))
        assert (a.c_qq, a.c_pp) == (b.c_qq, b.c_pp)

    def test_validation(self):
        with pytest.raises(ValueError):
            CovarianceMatrix(0.0, 1.0)
        with pytest.raises(ValueError):
            CovarianceMatrix(1.0, -0.2)


class TestExactSpectrum:
    def test_classical_point_value(self):
        p = ModelParams(omega0=1.0, beta=1.0)
        m = exact_spectrum(p, OhmicSD(1.0), 1.0)
        assert m.qq == pytest.approx(2.0, abs=1e-14)

    def test_matrix_structure(self):
        p = ModelParams(omega0=1.0, beta=1.3, hbar=0.8)
        for w in (-2.1, 0.4, 1.0, 3.3):
            m = exact_spectrum(p, PEAKED, w)
            assert abs(m.qp - 1j * w * m.qq) < 1e-12
            assert abs(m.pq + 1j * w * m.qq) < 1e-12
            assert abs(m.pp - w ** 2 * m.qq) < 1e-12

    def test_detailed_balance(self):
        p = ModelParams(omega0=1.0, beta=1.3, hbar=0.8)
        for w in (0.7, 2.2, 1e-5):
            plus = complex(exact_cqq_vec(p, PEAKED, np.array([w]))[0])
            minus = complex(exact_cqq_vec(p, PEAKED, np.array([-w]))[0])
            assert abs(minus - math.exp(-p.beta * p.hbar * w) * plus) < 1e-12

    def test_classical_limit_pointwise(self):
        beta = 1.0
        quantum = ModelParams(omega0=1.0, beta=beta, hbar=1e-9)
        classical = ModelParams(omega0=1.0, beta=beta)
        sd = OhmicSD(0.7)
        for w in (0.5, 1.0, 2.0):
            assert beta * quantum.hbar * w < 1e-6
            a = float(exact_cqq_vec(quantum, sd, np.array([w]))[0].real)
            b = float(exact_cqq_vec(classical, sd, np.array([w]))[0].real)
            assert a == pytest.approx(b, rel=1e-8)

    def test_bose_series_joins_smoothly(self):
        # series branch must agree with an expm1-based direct evaluation
        p = ModelParams(omega0=1.0, beta=1.0, hbar=1.0)
        sd = OhmicSD(0.5)
        for w in (0.2e-4, 0.99e-4, 1.01e-4):
            got = float(exact_cqq_vec(p, sd, np.array([w]))[0].real)
            bose = 2.0 * p.hbar * w / (-math.expm1(-p.beta * p.hbar * w))
            g = sd.gamma_tilde(w)
            from nonmarkov.response import chi_qq
            want = bose * g.re * abs(chi_qq(p, sd, w)) ** 2
            assert got == pytest.approx(want, rel=1e-10)


class TestRTSpectrum:
    def test_general_form_equals_explicit_entries(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p = ModelParams(omega0=rng.uniform(0.5, 2.0),
                            beta=rng.uniform(0.5, 3.0),
                            hbar=float(rng.choice([0.0, 1.0])))
            sd = OhmicSD(rng.uniform(0.05, 1.0))
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", CutoffSensitive)
                c0 = covariance0(p, sd)
            w = rng.uniform(-5.0, 5.0)
            e = rt_spectrum(p, sd, w, c0).as_array()
            g = rt_spectrum_general(p, sd, w, c0).as_array()
            assert np.abs(e - g).max() < 1e-12

    def test_conjugate_pair_symmetry(self):
        p = ModelParams(omega0=1.0, beta=2.0)
        c0 = covariance0(p, PEAKED)
        for w in (0.3, 1.7, 4.0):
            m = rt_spectrum(p, PEAKED, w, c0)
            assert m.qp == pytest.approx(np.conj(m.pq), abs=1e-15)

    def test_diagonal_vanishes_at_zero_frequency(self):
        p = ModelParams(omega0=1.0, beta=2.0)
        c0 = covariance0(p, OhmicSD(0.4))
        m = rt_spectrum(p, OhmicSD(0.4), 0.0, c0)
        assert m.qq == 0.0 and m.pp == 0.0

    def test_entries_vec_matches_scalar(self):
        p = ModelParams(omega0=1.0, beta=2.0)
        c0 = covariance0(p, PEAKED)
        ws = np.array([0.5, 1.5, 3.0])
        e = rt_entries_vec(p, PEAKED, ws, c0)
        for i, w in enumerate(ws):
            m = rt_spectrum(p, PEAKED, float(w), c0)
            assert e["qp"][i] == pytest.approx(m.qp, abs=1e-15)
