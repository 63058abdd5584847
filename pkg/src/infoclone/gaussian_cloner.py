"""Reference statistics of the optimal Gaussian copier, for comparison runs.

Copies carry the full source parameter alpha_0 plus Gaussian noise controlled
by the amplification parameter A = M*N/(N-1) (M sources copied to M*N
outputs).  Closed forms for the overlap fidelity and the measurement-fidelity
law F**c, c = M^2 N^2 / (2(MN + 2N - 2)), live here next to the Monte Carlo
driver that reproduces them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .measurement import (
    GAUSS_SCHEME,
    FidelityRun,
    FidelitySample,
    _positive_int,
    _quadrature_means,
    _samples_from_estimates,
    _SQRT2,
    info_mean_fraction,
)

__all__ = [
    "amplification_A",
    "amplification_fraction",
    "overlap_fidelity_gaussian",
    "gauss_quadrature_sampler",
    "run_gauss_trials",
    "gauss_exponent",
    "gauss_exponent_fraction",
    "gauss_pdf",
    "gauss_cdf",
    "gauss_mean_fraction",
    "gauss_mean_fidelity",
    "ComparisonRow",
    "comparison_table",
]


def _validate_case(sources, copies):
    m = _positive_int(sources, "sources")
    n = _positive_int(copies, "copies")
    if n < 2:
        raise ValueError("copies must be at least 2; the amplification diverges for a perfect copy")
    return m, n


def amplification_fraction(sources: int, copies: int) -> Fraction:
    """Exact amplification parameter A = M*N/(N-1)."""
    m, n = _validate_case(sources, copies)
    return Fraction(m * n, n - 1)


def amplification_A(sources: int, copies: int) -> float:
    """Noise-amplification parameter A = M*N/(N-1) of the optimal copier."""
    return float(amplification_fraction(sources, copies))


def overlap_fidelity_gaussian(n_in: int, m_out: int) -> float:
    """Optimal Gaussian overlap fidelity for n_in -> m_out copying.

    Equals m*n / (m*n + m - n); 1 when no extra copies are made, and exactly
    A/(A+1) for the M -> M*N chain.
    """
    n = _positive_int(n_in, "n_in")
    m = _positive_int(m_out, "m_out")
    if m < n:
        raise ValueError("cannot produce fewer copies than inputs")
    return m * n / (m * n + m - n)


def gauss_quadrature_sampler(alpha0_component: float, amplification: float, count: int,
                             rng: np.random.Generator) -> np.ndarray:
    """Quadrature samples of a single copier output.

    The coherent-state width convolves with the 1/A mixture noise per
    quadrature, giving mean sqrt(2)*component and variance (A+2)/(2A); the
    A -> infinity limit recovers the pure-state width 1/2.
    """
    if amplification <= 0:
        raise ValueError("amplification must be positive")
    if count < 1:
        raise ValueError("count must be positive")
    sd = math.sqrt((amplification + 2.0) / (2.0 * amplification))
    return rng.normal(_SQRT2 * alpha0_component, sd, count)


def gauss_exponent_fraction(sources: int, copies: int) -> Fraction:
    """Exact exponent c = MNA/(2(A+2)) = M^2 N^2 / (2(MN + 2N - 2)) of the
    fidelity law F**c."""
    m, n = _validate_case(sources, copies)
    return Fraction(m * m * n * n, 2 * (m * n + 2 * n - 2))


def gauss_exponent(sources: int, copies: int) -> float:
    return float(gauss_exponent_fraction(sources, copies))


def run_gauss_trials(run: FidelityRun, workers: int = 1) -> list[FidelitySample]:
    """Monte Carlo fidelity samples for the Gaussian-copier scheme.

    Copies carry the full source parameter, so the estimate is
    (y + iz)/sqrt(2) with no rescaling.  Per-measurement draws use variance
    (A+2)/A, twice the single-copy marginal of
    :func:`gauss_quadrature_sampler`: that is the noise level whose trial law
    is exactly F**c with c = gauss_exponent, consistent with
    :func:`gauss_pdf` and :func:`gauss_mean_fidelity`.
    """
    if run.scheme != GAUSS_SCHEME:
        raise ValueError(f"run scheme is {run.scheme!r}; expected {GAUSS_SCHEME!r}")
    amp = amplification_A(run.sources, run.copies)
    sd = math.sqrt((amp + 2.0) / amp)
    y, z = _quadrature_means(
        run.seed,
        run.trials,
        run.measurements_per_quadrature,
        _SQRT2 * run.alpha_true.real,
        _SQRT2 * run.alpha_true.imag,
        sd,
        workers,
    )
    factor = 1.0 / _SQRT2
    estimates = factor * y + 1j * (factor * z)
    return _samples_from_estimates(run.alpha_true, estimates)


def gauss_pdf(sources: int, copies: int):
    """Density c * F**(c-1) of the copier's measurement-fidelity law."""
    c = gauss_exponent(sources, copies)

    def density(f):
        return c * np.asarray(f, dtype=float) ** (c - 1.0)

    return density


def gauss_cdf(sources: int, copies: int):
    """CDF F**c of the copier's measurement-fidelity law."""
    c = gauss_exponent(sources, copies)

    def cdf(f):
        return np.asarray(f, dtype=float) ** c

    return cdf


def gauss_mean_fraction(sources: int, copies: int) -> Fraction:
    """Exact mean fidelity M^2 N^2 / (M^2 N^2 + 2MN + 4N - 4), i.e. c/(c+1)."""
    m, n = _validate_case(sources, copies)
    mn2 = m * m * n * n
    return Fraction(mn2, mn2 + 2 * m * n + 4 * n - 4)


def gauss_mean_fidelity(sources: int, copies: int) -> float:
    return float(gauss_mean_fraction(sources, copies))


@dataclass(frozen=True)
class ComparisonRow:
    """Mean measurement fidelities of both schemes for one (sources, copies) case."""

    sources: int
    copies: int
    gauss_mean: Fraction
    info_mean: Fraction


def comparison_table(cases) -> list[ComparisonRow]:
    """Gaussian-copier vs information-cloning mean fidelities, exact rationals.

    The information column depends on the source count only.
    """
    rows = []
    for sources, copies in cases:
        rows.append(
            ComparisonRow(
                sources=int(sources),
                copies=int(copies),
                gauss_mean=gauss_mean_fraction(sources, copies),
                info_mean=info_mean_fraction(sources),
            )
        )
    return rows
