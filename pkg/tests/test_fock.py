import math

import numpy as np
import pytest

from oracles import loglog_fit
from stringmass.dynamics import ModeCoefficients
from stringmass.errors import BasisMismatch, InsufficientModes
from stringmass.fock import (
    OneParticleVector,
    boundary_indicator_coefficients,
    classify_partial_sums,
    factorization_diagnostic,
    inner_plus,
    inner_plus_data,
    negative_frequency_norm,
    positive_frequency,
    quantum_frequencies,
    to_cauchy_coefficients,
)
from stringmass.model import ModelParams, calibrate
from stringmass.mufunc import GridSpec, MuFunction, inner_mu
from stringmass.spectrum import build_spectrum


@pytest.fixture(scope="module")
def deep_spectrum(generic_params, generic_cal):
    return build_spectrum(generic_params, generic_cal, n_neg=520)


def _coeffs(q, p, spec):
    return ModeCoefficients(q=np.asarray(q), p=np.asarray(p), spectrum=spec,
                            n_grid=2048)


def test_lossless_positive_frequency_datum(generic_spectrum):
    # P_n = +i*om_n*Q_n is the lossless (purely positive-frequency) datum
    n = 12
    om = quantum_frequencies(generic_spectrum, n)
    rng = np.random.default_rng(2)
    q = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    coeffs = _coeffs(q, 1j * om * q, generic_spectrum)
    vec = positive_frequency(coeffs)
    assert negative_frequency_norm(coeffs) <= 1e-12 * np.linalg.norm(q)
    expected = math.sqrt(2.0) * om ** 0.25 * q
    assert np.max(np.abs(vec.coeffs - expected)) <= 1e-12
    # the opposite sign is purely negative frequency: zero positive part
    anti = _coeffs(q, -1j * om * q, generic_spectrum)
    assert positive_frequency(anti).norm_sq() <= 1e-24
    assert negative_frequency_norm(anti) > 0


def test_standing_data_splits_half_half(generic_spectrum):
    n = 8
    for k in (0, 3):
        q = np.zeros(n)
        q[k] = 1.0
        coeffs = _coeffs(q, np.zeros(n), generic_spectrum)
        vec = positive_frequency(coeffs)
        om_k = quantum_frequencies(generic_spectrum, n)[k]
        assert abs(vec.coeffs[k]) == pytest.approx(om_k ** 0.25 / math.sqrt(2.0),
                                                   rel=1e-13)
        assert negative_frequency_norm(coeffs) == pytest.approx(
            math.sqrt(2.0 * math.sqrt(om_k)) * 0.5, rel=1e-13)


def test_inner_plus_unit_basis(generic_spectrum):
    e2 = np.zeros(6, dtype=complex)
    e2[2] = 1.0
    assert inner_plus(OneParticleVector(e2), OneParticleVector(e2)) == 1.0
    # <Y_n, Y_n>_+ = 2*sqrt(w2 - lambda_n) in Y-coefficient form
    q = np.zeros(6)
    q[2] = 1.0
    om = quantum_frequencies(generic_spectrum, 6)[2]
    assert inner_plus_data(q, q, generic_spectrum) == pytest.approx(
        2.0 * om, rel=1e-14)


def test_inner_plus_sesquilinear(generic_spectrum):
    rng = np.random.default_rng(13)
    n = 10
    u = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    w = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = 0.7 - 0.4j
    lhs = inner_plus_data(u, a * v + w, generic_spectrum)
    rhs = (a * inner_plus_data(u, v, generic_spectrum)
           + inner_plus_data(u, w, generic_spectrum))
    assert abs(lhs - rhs) <= 1e-12 * (1.0 + abs(lhs))
    # conjugate under antilinear first slot
    conj_lhs = inner_plus_data(a * u, v, generic_spectrum)
    conj_rhs = np.conj(a) * inner_plus_data(u, v, generic_spectrum)
    assert abs(conj_lhs - conj_rhs) <= 1e-12 * (1.0 + abs(conj_lhs))
    assert inner_plus_data(u, v, generic_spectrum) == pytest.approx(
        np.conj(inner_plus_data(v, u, generic_spectrum)), abs=1e-12)
    # positive definiteness
    assert inner_plus_data(u, u, generic_spectrum).real > 0
    with pytest.raises(BasisMismatch):
        inner_plus_data(u, v[:5], generic_spectrum)


def test_quantum_frequencies_zero_mode():
    p = ModelParams(1.0, 1.0, 1.0, 0.5, 2.0)  # zero-mode locus
    spec = build_spectrum(p, n_neg=4)
    freqs = quantum_frequencies(spec, len(spec.modes))
    zero_idx = [i for i, m in enumerate(spec.modes) if m.kind == "zero"]
    assert len(zero_idx) == 1
    assert freqs[zero_idx[0]] == pytest.approx(math.sqrt(p.w2), rel=1e-14)
    assert np.all(freqs > 0)


def test_quantum_frequencies_resonance_asymptote(resonant_params):
    spec = build_spectrum(resonant_params, n_neg=60)
    freqs = quantum_frequencies(spec, 60)
    mode = spec.negative_modes[49]  # n = 50
    f50 = math.sqrt(resonant_params.w2 + mode.omega ** 2)
    # high modes approach multiples of pi (bracket index k = 49 here)
    k = round(f50 / math.pi)
    assert abs(f50 - k * math.pi) <= 0.02
    assert f50 in freqs


def test_two_inner_plus_forms_agree(generic_spectrum, generic_cal, grid4096):
    # Fourier-sum form vs the mu-integral form with modewise sqrt scaling
    rng = np.random.default_rng(3)
    n = 12
    q1 = rng.standard_normal(n)
    q2 = rng.standard_normal(n)
    fourier = inner_plus_data(q1, q2, generic_spectrum)
    om = quantum_frequencies(generic_spectrum, n)
    basis = generic_spectrum.basis(grid4096)[:n]
    f1 = MuFunction.zeros(grid4096)
    f2 = MuFunction.zeros(grid4096)
    for c1, c2, w, y in zip(q1, q2, om, basis):
        f1 = f1 + c1 * y
        f2 = f2 + (w * c2) * y  # sqrt(w2 - Lap) acts modewise
    integral = 2.0 * inner_mu(f1, f2, generic_cal)
    assert abs(fourier - integral) <= 1e-9 * (1.0 + abs(fourier))


def test_round_trip(generic_spectrum):
    rng = np.random.default_rng(23)
    n = 14
    vec = OneParticleVector(rng.standard_normal(n)
                            + 1j * rng.standard_normal(n))
    q, p = to_cauchy_coefficients(vec, generic_spectrum)
    back = positive_frequency(_coeffs(q, p, generic_spectrum))
    assert np.max(np.abs(back.coeffs - vec.coeffs)) <= 1e-12
    assert negative_frequency_norm(_coeffs(q, p, generic_spectrum)) <= 1e-12


def test_boundary_coefficients_closed_form(deep_spectrum, generic_cal,
                                           generic_params):
    coeffs = boundary_indicator_coefficients(deep_spectrum, generic_cal, 10)
    f0 = 1.0 - generic_cal.alpha0 * generic_params.mu0 * generic_params.delta(0)
    for c, m in zip(coeffs, deep_spectrum.negative_modes):
        y0 = f0 * m.profile(0.0) / m.g
        expected = (math.sqrt(2.0) * (generic_params.w2 - m.lam) ** 0.25
                    * generic_cal.alpha0 * y0)
        assert c == pytest.approx(expected, rel=1e-13)
    with pytest.raises(InsufficientModes):
        boundary_indicator_coefficients(deep_spectrum, generic_cal, 1000)


def test_boundary_coefficient_asymptote(deep_spectrum, generic_cal,
                                        generic_params):
    coeffs = boundary_indicator_coefficients(deep_spectrum, generic_cal, 500)
    ns = np.arange(50, 501)
    slope, pref = loglog_fit(ns, np.abs(coeffs[49:500]))
    assert slope == pytest.approx(-0.5, abs=0.03)
    expected_pref = 2.0 * math.sqrt(generic_cal.alpha0) / math.sqrt(
        generic_params.mu0 * math.pi)
    assert abs(pref - expected_pref) <= 0.03 * expected_pref


def test_classify_partial_sums_control_cases():
    n = np.arange(1, 1025)
    verdict, _, lo, hi = classify_partial_sums(1.0 / n ** 2)
    assert verdict == "CONVERGENT"
    assert hi < 0.75 * lo
    verdict, slope, lo, hi = classify_partial_sums(1.0 / n)
    assert verdict == "DIVERGENT"
    assert slope == pytest.approx(1.0, rel=0.05)
    # finitely supported: partial sums stabilize exactly
    fin = np.zeros(256)
    fin[:5] = 1.0
    verdict, _, _, hi = classify_partial_sums(fin)
    assert verdict == "CONVERGENT"
    assert hi == 0.0
    with pytest.raises(InsufficientModes):
        classify_partial_sums(np.ones(4))


def test_factorization_diagnostic(deep_spectrum, generic_cal):
    report = factorization_diagnostic(deep_spectrum, generic_cal, 500)
    assert report.verdict == "DIVERGENT"
    assert np.all(np.diff(report.partial_sums) > 0)
    assert report.expected_slope == pytest.approx(
        4.0 * generic_cal.alpha0 / (deep_spectrum.params.mu0 * math.pi),
        rel=1e-14)
    assert report.log_slope == pytest.approx(report.expected_slope, rel=0.10)
    parsed = report.to_json()
    assert '"verdict": "DIVERGENT"' in parsed
    with pytest.raises(InsufficientModes):
        factorization_diagnostic(deep_spectrum, generic_cal, 50)


def test_indicator_is_in_l2_mu_but_not_in_h(deep_spectrum, generic_cal,
                                            grid512):
    # the same function has finite mu-norm while its Z-coefficients are not
    # square summable: the one-particle space is not built on L^2_mu
    F = MuFunction(np.zeros(grid512.n_grid + 1), 1.0, 0.0)
    assert inner_mu(F, F, generic_cal) == pytest.approx(generic_cal.alpha0,
                                                        abs=1e-15)
    report = factorization_diagnostic(deep_spectrum, generic_cal, 500)
    assert report.partial_sums[-1] > 4.0 * inner_mu(F, F, generic_cal)
    assert report.verdict == "DIVERGENT"


def test_inner_plus_vector_mismatch():
    with pytest.raises(BasisMismatch):
        inner_plus(OneParticleVector(np.ones(3)), OneParticleVector(np.ones(4)))
