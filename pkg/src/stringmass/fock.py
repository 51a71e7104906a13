"""One-particle structure and the non-factorization diagnostic.

The positive-frequency component of real Cauchy data, the scalar product
weighted by sqrt(w2 - lambda_n), the orthonormal basis rescaling, and the
partial-sum diagnostic showing that the boundary indicator function has
non-square-summable coefficients.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import ModeCoefficients
from .errors import BasisMismatch, FrequencyDomainError, InsufficientModes
from .model import CalibratedMeasure
from .spectrum import Spectrum


@dataclass(frozen=True)
class OneParticleVector:
    """Complex coefficients in the unit-norm mode basis Z_n."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs",
                           np.asarray(self.coeffs, dtype=complex))

    @property
    def n_max(self) -> int:
        return self.coeffs.size

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))


def positive_frequency(coeffs: ModeCoefficients) -> OneParticleVector:
    """Project real data onto its positive-frequency half and rescale to Z_n.

    psi_n = sqrt(2) * (w2 - lambda_n)^(1/4) * (Q_n - i P_n/sqrt(w2-lambda_n))/2.
    """
    spec = coeffs.spectrum
    lam = spec.lambdas[: coeffs.q.size]
    if np.any(lam >= spec.params.w2):
        raise FrequencyDomainError("mode with lambda >= w2 in positive-frequency split")
    om = np.sqrt(spec.params.w2 - lam)
    q_plus = 0.5 * (np.asarray(coeffs.q, dtype=complex)
                    - 1j * np.asarray(coeffs.p, dtype=complex) / om)
    return OneParticleVector(math.sqrt(2.0) * om ** 0.25 * q_plus)


def negative_frequency_norm(coeffs: ModeCoefficients) -> float:
    """Z-basis norm of the discarded negative-frequency half (0 for Eq-compliant data)."""
    spec = coeffs.spectrum
    lam = spec.lambdas[: coeffs.q.size]
    om = np.sqrt(spec.params.w2 - lam)
    q_minus = 0.5 * (np.asarray(coeffs.q, dtype=complex)
                     + 1j * np.asarray(coeffs.p, dtype=complex) / om)
    return float(np.sqrt(np.sum(2.0 * np.sqrt(om) * np.abs(q_minus) ** 2)))


def to_cauchy_coefficients(vec: OneParticleVector,
                           spec: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    """(Q_n, P_n) of the positive-frequency solution represented by ``vec``."""
    lam = spec.lambdas[: vec.n_max]
    om = np.sqrt(spec.params.w2 - lam)
    q = vec.coeffs / (math.sqrt(2.0) * om ** 0.25)
    # the positive-frequency constraint fixes P_n = i*om_n*Q_n
    p = 1j * om * q
    return q, p


def inner_plus_data(q1: np.ndarray, q2: np.ndarray, spec: Spectrum) -> complex:
    """Scalar product 2 sum_n sqrt(w2-lambda_n) conj(Q1_n) Q2_n on Y-coefficients."""
    q1 = np.asarray(q1, dtype=complex)
    q2 = np.asarray(q2, dtype=complex)
    if q1.size != q2.size:
        raise BasisMismatch(f"{q1.size} vs {q2.size} coefficients")
    lam = spec.lambdas[: q1.size]
    om = np.sqrt(spec.params.w2 - lam)
    return complex(2.0 * np.sum(om * np.conj(q1) * q2))


def inner_plus(v1: OneParticleVector, v2: OneParticleVector) -> complex:
    """Scalar product in the Z_n basis (plain l2 form)."""
    if v1.n_max != v2.n_max:
        raise BasisMismatch(f"{v1.n_max} vs {v2.n_max} coefficients")
    return complex(np.sum(np.conj(v1.coeffs) * v2.coeffs))


def quantum_frequencies(spec: Spectrum, n: int) -> np.ndarray:
    """One-particle energies sqrt(w2 - lambda) of the first n modes (hbar left to caller)."""
    lam = spec.lambdas[:n]
    return np.sqrt(spec.params.w2 - lam)


def boundary_indicator_coefficients(spec: Spectrum, cal: CalibratedMeasure,
                                    n_max: int) -> np.ndarray:
    """<F, Z_n>_+ for the indicator of the left boundary atom, oscillatory family.

    The mu-inner product against the indicator collapses to the atom value:
    <Y_n, F>_mu = alpha0 * Y_n(0), evaluated in closed form (no quadrature).
    """
    modes = spec.negative_modes[:n_max]
    if len(modes) < n_max:
        raise InsufficientModes(
            f"spectrum carries {len(modes)} oscillatory modes, need {n_max}")
    params = spec.params
    f0 = 1.0 - cal.alpha0 * params.mu0 * params.delta(0)
    out = np.empty(n_max)
    for i, m in enumerate(modes):
        y_atom0 = f0 * m.profile(0.0) / m.g
        coef_mu = cal.alpha0 * y_atom0
        out[i] = math.sqrt(2.0) * (params.w2 - m.lam) ** 0.25 * coef_mu
    return out


def classify_partial_sums(sq_coeffs: np.ndarray) -> tuple[str, float, float, float]:
    """Classify sum growth from the last two octaves of partial sums.

    Returns (verdict, log_slope, slope_lo, slope_hi) where log_slope is the
    least-squares slope of S_N against ln N over the upper half of the range.
    Logarithmic divergence shows equal octave increments; a convergent tail
    shows the later octave increment collapsing relative to the earlier one.
    """
    s = np.cumsum(np.asarray(sq_coeffs, dtype=float))
    n = s.size
    if n < 8:
        raise InsufficientModes("need at least 8 coefficients to classify")
    ns = np.arange(1, n + 1)
    sel = ns >= n // 2
    log_slope = float(np.polyfit(np.log(ns[sel]), s[sel], 1)[0])
    ln2 = math.log(2.0)
    slope_lo = (s[n // 2 - 1] - s[n // 4 - 1]) / ln2
    slope_hi = (s[-1] - s[n // 2 - 1]) / ln2
    divergent = slope_hi > 0 and slope_hi >= 0.75 * slope_lo
    return ("DIVERGENT" if divergent else "CONVERGENT",
            log_slope, float(slope_lo), float(slope_hi))


@dataclass
class FactorizationReport:
    """Partial-sum diagnostic for the boundary indicator function."""

    coefficients: np.ndarray
    partial_sums: np.ndarray
    log_slope: float
    expected_slope: float
    slope_lo: float
    slope_hi: float
    verdict: str

    def to_json(self) -> str:
        return json.dumps({
            "coefficients": [float(c) for c in self.coefficients],
            "partial_sums": [float(s) for s in self.partial_sums],
            "log_slope": self.log_slope,
            "expected_slope": self.expected_slope,
            "verdict": self.verdict,
        }, indent=2)


def factorization_diagnostic(spec: Spectrum, cal: CalibratedMeasure,
                             n_max: int) -> FactorizationReport:
    """Partial sums of |<F,Z_n>_+|^2 and the divergence verdict."""
    if n_max < 100:
        raise InsufficientModes("diagnostic needs n_max >= 100")
    coeffs = boundary_indicator_coefficients(spec, cal, n_max)
    sq = coeffs * coeffs
    verdict, log_slope, lo, hi = classify_partial_sums(sq)
    return FactorizationReport(
        coefficients=coeffs,
        partial_sums=np.cumsum(sq),
        log_slope=log_slope,
        expected_slope=4.0 * cal.alpha0 / (spec.params.mu0 * math.pi),
        slope_lo=lo,
        slope_hi=hi,
        verdict=verdict,
    )
