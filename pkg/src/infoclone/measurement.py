"""Monte Carlo quadrature measurements on information clones.

Each trial measures half of the available copies in position and half in
momentum, averages, reconstructs the source parameter, and scores the
reconstruction by the squared coherent-state overlap exp(-|true - est|^2).
For Gaussian quadrature statistics the sample means are exactly Gaussian, so
the closed-form fidelity laws hold without any asymptotic caveat.

Determinism contract: trials are partitioned into fixed batches of
``TRIAL_BATCH`` with independent counter-based streams keyed by
(seed, batch index); within a batch the position block is drawn before the
momentum block.  Results are bit-identical for a given seed regardless of
how batches are assigned to workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import ks_2samp, kstwobign

__all__ = [
    "INFO_SCHEME",
    "GAUSS_SCHEME",
    "TRIAL_BATCH",
    "QUADRATURE_SD",
    "FidelityRun",
    "FidelitySample",
    "DistributionSummary",
    "trial_rng",
    "sample_quadrature",
    "estimate_alpha",
    "measurement_fidelity",
    "run_info_trials",
    "info_pdf",
    "info_cdf",
    "info_mean_fraction",
    "info_mean_fidelity",
    "fidelity_values",
    "summarize",
    "ks_statistic",
    "ks_critical",
    "ks_two_sample",
    "ks_critical_two_sample",
]

INFO_SCHEME = "info_cloning"
GAUSS_SCHEME = "gaussian"
TRIAL_BATCH = 4096
QUADRATURE_SD = math.sqrt(0.5)
_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class FidelityRun:
    """Configuration of one Monte Carlo fidelity experiment.

    ``sources * copies`` clones are available per trial; half are measured in
    position and half in momentum, so the product must be even (and >= 2).
    """

    alpha_true: complex
    sources: int
    copies: int
    trials: int
    seed: int
    scheme: str = INFO_SCHEME

    def __post_init__(self):
        if self.scheme not in (INFO_SCHEME, GAUSS_SCHEME):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.sources < 1 or self.copies < 1:
            raise ValueError("sources and copies must be positive")
        total = self.sources * self.copies
        if total < 2 or total % 2:
            raise ValueError(
                "sources*copies must be even and at least 2 for the "
                "position/momentum split"
            )
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit nonnegative integer")
        object.__setattr__(self, "alpha_true", complex(self.alpha_true))

    @property
    def measurements_per_quadrature(self) -> int:
        return self.sources * self.copies // 2


@dataclass(frozen=True)
class FidelitySample:
    """One trial's reconstructed parameter and its measurement fidelity."""

    alpha_est: complex
    fidelity: float


@dataclass(frozen=True)
class DistributionSummary:
    """Mean, variance, histogram, and KS distance of a fidelity sample set."""

    count: int
    mean: float
    variance: float
    bin_edges: np.ndarray
    counts: np.ndarray
    ks_statistic: float


def trial_rng(seed: int, batch_index: int) -> np.random.Generator:
    """Independent counter-based stream for one batch of trials."""
    key = np.random.SeedSequence(entropy=seed, spawn_key=(batch_index,))
    return np.random.Generator(np.random.Philox(key))


def _batch_ranges(trials: int):
    return [(start, min(start + TRIAL_BATCH, trials)) for start in range(0, trials, TRIAL_BATCH)]


def _quadrature_means(seed, trials, per_quadrature, mean_y, mean_z, sd, workers):
    """Per-trial position/momentum sample means over all batches.

    Each batch consumes its stream exactly as ``stop - start`` consecutive
    per-trial draws of ``per_quadrature`` position samples, followed by the
    same for momentum.
    """

    def one_batch(item):
        index, (start, stop) = item
        rng = trial_rng(seed, index)
        shape = (stop - start, per_quadrature)
        y = rng.normal(mean_y, sd, shape).mean(axis=1)
        z = rng.normal(mean_z, sd, shape).mean(axis=1)
        return y, z

    items = list(enumerate(_batch_ranges(trials)))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(one_batch, items))
    else:
        blocks = [one_batch(item) for item in items]
    return (
        np.concatenate([block[0] for block in blocks]),
        np.concatenate([block[1] for block in blocks]),
    )


def sample_quadrature(clone_component: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Quadrature samples for a clone whose parameter component is given.

    i.i.d. normal with mean sqrt(2)*component and variance 1/2 (for a clone
    carrying alpha/sqrt(n) the position mean is sqrt(2/n)*Re alpha).
    """
    if count < 1:
        raise ValueError("count must be positive")
    return rng.normal(_SQRT2 * clone_component, QUADRATURE_SD, count)


def estimate_alpha(y_mean: float, z_mean: float, copies: int) -> complex:
    """Source-parameter estimate sqrt(copies) * (y + iz) / sqrt(2) from the
    quadrature means of 1/sqrt(copies) clones."""
    factor = math.sqrt(copies) / _SQRT2
    return complex(factor * y_mean, factor * z_mean)


def measurement_fidelity(alpha_true: complex, alpha_est: complex) -> float:
    """Squared coherent overlap exp(-|true - est|^2) of the reconstruction."""
    return math.exp(-abs(complex(alpha_true) - complex(alpha_est)) ** 2)


def _samples_from_estimates(alpha_true: complex, estimates) -> list[FidelitySample]:
    """Package estimates with fidelities computed by measurement_fidelity, so
    the sample invariant F = exp(-|true - est|^2) holds bitwise."""
    samples = []
    for value in estimates:
        estimate = complex(value)
        samples.append(FidelitySample(estimate, measurement_fidelity(alpha_true, estimate)))
    return samples


def run_info_trials(run: FidelityRun, workers: int = 1) -> list[FidelitySample]:
    """Monte Carlo fidelity samples for the information-cloning scheme.

    Every clone carries alpha/sqrt(copies); per trial, sources*copies/2
    position and momentum samples are averaged and the source parameter is
    reconstructed with :func:`estimate_alpha`.
    """
    if run.scheme != INFO_SCHEME:
        raise ValueError(f"run scheme is {run.scheme!r}; expected {INFO_SCHEME!r}")
    clone = run.alpha_true / math.sqrt(run.copies)
    y, z = _quadrature_means(
        run.seed,
        run.trials,
        run.measurements_per_quadrature,
        _SQRT2 * clone.real,
        _SQRT2 * clone.imag,
        QUADRATURE_SD,
        workers,
    )
    factor = math.sqrt(run.copies) / _SQRT2
    estimates = factor * y + 1j * (factor * z)
    return _samples_from_estimates(run.alpha_true, estimates)


def _positive_int(value, name) -> int:
    number = int(value)
    if number < 1 or number != value:
        raise ValueError(f"{name} must be a positive integer")
    return number


def info_pdf(sources: int):
    """Density of the information-scheme fidelity law: M * F**(M-1) on [0, 1]."""
    m = _positive_int(sources, "sources")

    def density(f):
        return m * np.asarray(f, dtype=float) ** (m - 1)

    return density


def info_cdf(sources: int):
    """CDF of the information-scheme fidelity law: F**M."""
    m = _positive_int(sources, "sources")

    def cdf(f):
        return np.asarray(f, dtype=float) ** m

    return cdf


def info_mean_fraction(sources: int) -> Fraction:
    """Mean fidelity M/(M+1), independent of the number of copies."""
    m = _positive_int(sources, "sources")
    return Fraction(m, m + 1)


def info_mean_fidelity(sources: int) -> float:
    return float(info_mean_fraction(sources))


def fidelity_values(samples) -> np.ndarray:
    """Fidelity column of a sample list (plain floats pass through)."""
    return np.asarray(
        [s.fidelity if isinstance(s, FidelitySample) else float(s) for s in samples],
        dtype=float,
    )


def ks_statistic(samples, reference_cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance against a CDF callable."""
    values = np.sort(fidelity_values(samples))
    n = values.size
    if n < 1:
        raise ValueError("need at least one sample")
    reference = np.asarray(reference_cdf(values), dtype=float)
    steps = np.arange(n + 1) / n
    return float(max(np.max(steps[1:] - reference), np.max(reference - steps[:-1])))


def ks_critical(count: int, level: float = 0.05) -> float:
    """Asymptotic one-sample KS critical value at the given level."""
    return float(kstwobign.isf(level) / math.sqrt(count))


def ks_two_sample(first, second) -> float:
    """Two-sample KS distance between fidelity sample sets."""
    return float(ks_2samp(fidelity_values(first), fidelity_values(second)).statistic)


def ks_critical_two_sample(n_first: int, n_second: int, level: float = 0.05) -> float:
    """Asymptotic two-sample KS critical value at the given level."""
    return float(kstwobign.isf(level) * math.sqrt((n_first + n_second) / (n_first * n_second)))


def summarize(samples, reference_cdf, bins: int = 50) -> DistributionSummary:
    """Mean/variance/histogram of fidelity samples plus the KS distance.

    The histogram uses uniform bins on [0, 1]; counts always sum to the
    sample count since fidelities live in (0, 1].
    """
    values = fidelity_values(samples)
    if values.size < 2:
        raise ValueError("need at least two samples")
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    return DistributionSummary(
        count=int(values.size),
        mean=float(values.mean()),
        variance=float(values.var()),
        bin_edges=edges,
        counts=counts,
        ks_statistic=ks_statistic(values, reference_cdf),
    )
