import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from infoclone.gaussian_cloner import (
    ComparisonRow,
    amplification_A,
    amplification_fraction,
    comparison_table,
    gauss_cdf,
    gauss_exponent,
    gauss_exponent_fraction,
    gauss_mean_fidelity,
    gauss_mean_fraction,
    gauss_pdf,
    gauss_quadrature_sampler,
    overlap_fidelity_gaussian,
    run_gauss_trials,
)
from infoclone.measurement import (
    GAUSS_SCHEME,
    FidelityRun,
    fidelity_values,
    info_mean_fidelity,
    ks_critical,
    ks_statistic,
    summarize,
    trial_rng,
)


class TestAmplification:
    def test_values(self):
        assert amplification_A(1, 2) == 2.0
        assert amplification_A(2, 2) == 4.0
        assert amplification_fraction(3, 4) == Fraction(4)

    def test_single_copy_rejected(self):
        with pytest.raises(ValueError):
            amplification_A(1, 1)

    def test_overlap_identity_on_grid(self):
        # A/(A+1) equals the closed-form overlap fidelity of M -> M*N copying
        for sources in range(1, 11):
            for copies in range(2, 11):
                amp = amplification_fraction(sources, copies)
                via_amp = amp / (amp + 1)
                direct = overlap_fidelity_gaussian(sources, sources * copies)
                assert abs(float(via_amp) - direct) < 1e-15


class TestOverlapFidelity:
    def test_one_to_two(self):
        assert overlap_fidelity_gaussian(1, 2) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_no_cloning_is_perfect(self):
        for n in (1, 3, 7):
            assert overlap_fidelity_gaussian(n, n) == 1.0

    def test_chain_closed_form(self):
        # M -> M*N reduces to MN / (MN + N - 1)
        for sources, copies in [(1, 2), (2, 3), (3, 5)]:
            mn = sources * copies
            assert overlap_fidelity_gaussian(sources, sources * copies) == pytest.approx(
                mn / (mn + copies - 1), abs=1e-15
            )

    def test_rejects_fewer_outputs(self):
        with pytest.raises(ValueError):
            overlap_fidelity_gaussian(3, 2)


class TestSampler:
    def test_large_amplification_recovers_pure_width(self):
        rng = trial_rng(50, 0)
        samples = gauss_quadrature_sampler(0.0, 1e12, 200_000, rng)
        tolerance = 5.0 * 0.5 * math.sqrt(2.0 / samples.size)
        assert abs(samples.var() - 0.5) < tolerance

    def test_unit_variance_at_amplification_two(self):
        # (A+2)/(2A) = 1 for A = 2
        rng = trial_rng(51, 0)
        samples = gauss_quadrature_sampler(0.7, 2.0, 1_000_000, rng)
        tolerance = 5.0 * 1.0 * math.sqrt(2.0 / samples.size)
        assert abs(samples.var() - 1.0) < tolerance
        mean_tol = 5.0 / math.sqrt(samples.size)
        assert abs(samples.mean() - math.sqrt(2.0) * 0.7) < mean_tol

    def test_matches_mixture_convolution(self):
        # oracle: draw the mixture displacement (variance 1/(2A) per quadrature)
        # and the coherent width 1/2 separately, then convolve
        amplification = 3.0
        rng = trial_rng(52, 0)
        count = 1_000_000
        displaced = rng.normal(0.0, math.sqrt(1.0 / (2.0 * amplification)), count)
        samples = rng.normal(math.sqrt(2.0) * displaced, math.sqrt(0.5))
        expected = (amplification + 2.0) / (2.0 * amplification)
        tolerance = 5.0 * expected * math.sqrt(2.0 / count)
        assert abs(samples.var() - expected) < tolerance
        direct = gauss_quadrature_sampler(0.0, amplification, count, trial_rng(53, 0))
        assert abs(direct.var() - expected) < tolerance

    def test_rejects_nonpositive_amplification(self):
        with pytest.raises(ValueError):
            gauss_quadrature_sampler(0.0, 0.0, 10, trial_rng(0, 0))


class TestExponent:
    def test_exact_fraction_chain(self):
        # c = MNA/(2(A+2)) reduced through A = MN/(N-1), checked rationally
        for sources in range(1, 21):
            for copies in range(2, 21):
                amp = amplification_fraction(sources, copies)
                chain = sources * copies * amp / (2 * (amp + 2))
                assert chain == gauss_exponent_fraction(sources, copies)
                assert chain / (chain + 1) == gauss_mean_fraction(sources, copies)

    def test_values(self):
        assert gauss_exponent_fraction(1, 2) == Fraction(1, 2)
        assert gauss_exponent(2, 2) == pytest.approx(4.0 / 3.0, abs=1e-15)


class TestClosedForms:
    @pytest.mark.parametrize("sources,copies", [(1, 2), (1, 4), (2, 2), (3, 5)])
    def test_density_normalizes(self, sources, copies):
        mass, _ = quad(gauss_pdf(sources, copies), 0.0, 1.0, points=[0.0])
        assert abs(mass - 1.0) < 1e-10

    @pytest.mark.parametrize("sources,copies", [(1, 2), (1, 4), (2, 2), (3, 5)])
    def test_mean_matches_quadrature(self, sources, copies):
        density = gauss_pdf(sources, copies)
        mean, _ = quad(lambda f: f * density(f), 0.0, 1.0)
        assert abs(mean - gauss_mean_fidelity(sources, copies)) < 1e-10

    def test_mean_values(self):
        assert gauss_mean_fraction(1, 2) == Fraction(1, 3)
        assert gauss_mean_fraction(1, 4) == Fraction(4, 9)
        assert gauss_mean_fraction(2, 2) == Fraction(4, 7)
        assert gauss_mean_fraction(2, 4) == Fraction(16, 23)

    def test_cdf_is_power(self):
        cdf = gauss_cdf(1, 2)
        assert cdf(0.25) == pytest.approx(0.5, abs=1e-15)

    def test_mean_approaches_one(self):
        assert gauss_mean_fidelity(1000, 2) > 0.999
        assert gauss_mean_fidelity(1, 2) < gauss_mean_fidelity(10, 2)


class TestGaussTrials:
    def test_one_source_two_copies_mean(self):
        run = FidelityRun(0.8 + 0.1j, 1, 2, 100_000, seed=61, scheme=GAUSS_SCHEME)
        samples = run_gauss_trials(run)
        summary = summarize(samples, gauss_cdf(1, 2))
        assert abs(summary.mean - 1.0 / 3.0) < 0.005
        assert summary.ks_statistic < ks_critical(run.trials)

    def test_two_sources_four_copies_mean(self):
        run = FidelityRun(1.0, 2, 4, 100_000, seed=67, scheme=GAUSS_SCHEME)
        samples = run_gauss_trials(run)
        mean = fidelity_values(samples).mean()
        assert abs(mean - 16.0 / 23.0) < 0.005

    def test_law_is_power_of_uniform(self):
        # F**c should be uniform
        run = FidelityRun(0.5, 2, 2, 50_000, seed=71, scheme=GAUSS_SCHEME)
        values = fidelity_values(run_gauss_trials(run))
        exponent = gauss_exponent(2, 2)
        statistic = ks_statistic(values**exponent, lambda f: f)
        assert statistic < ks_critical(run.trials)

    def test_deterministic(self):
        run = FidelityRun(0.5, 1, 2, 5_000, seed=73, scheme=GAUSS_SCHEME)
        assert np.array_equal(
            fidelity_values(run_gauss_trials(run)), fidelity_values(run_gauss_trials(run))
        )

    def test_scheme_mismatch_rejected(self):
        run = FidelityRun(0.5, 1, 2, 10, seed=0)
        with pytest.raises(ValueError):
            run_gauss_trials(run)

    def test_single_copy_rejected(self):
        run = FidelityRun(0.5, 2, 1, 10, seed=0, scheme=GAUSS_SCHEME)
        with pytest.raises(ValueError):
            run_gauss_trials(run)


class TestComparison:
    def test_reference_cases(self):
        rows = comparison_table([(1, 2), (1, 4), (2, 2), (2, 4)])
        assert rows[0] == ComparisonRow(1, 2, Fraction(1, 3), Fraction(1, 2))
        assert rows[1] == ComparisonRow(1, 4, Fraction(4, 9), Fraction(1, 2))
        assert rows[2] == ComparisonRow(2, 2, Fraction(4, 7), Fraction(2, 3))
        assert rows[3] == ComparisonRow(2, 4, Fraction(16, 23), Fraction(2, 3))

    def test_info_column_independent_of_copies(self):
        rows = comparison_table([(3, n) for n in range(2, 9)])
        assert len({row.info_mean for row in rows}) == 1

    def test_info_beats_gauss_on_small_reference_cases(self):
        for sources, copies in [(1, 2), (1, 4), (2, 2)]:
            assert info_mean_fidelity(sources) > gauss_mean_fidelity(sources, copies)

    def test_info_beats_gauss_for_two_copies(self):
        # for N = 2 the gap M/(M+1) - M^2/(M^2+M+1) is always positive
        for sources in range(1, 11):
            assert info_mean_fidelity(sources) > gauss_mean_fidelity(sources, 2)

    def test_crossover_cases(self):
        # the schemes cross once enough copies amplify the measurement budget:
        # already at (2,4) the Gaussian mean 16/23 exceeds 2/3, and at (3,3)
        # 81/107 exceeds 3/4
        assert gauss_mean_fidelity(2, 4) > info_mean_fidelity(2)
        assert gauss_mean_fraction(3, 3) == Fraction(81, 107)
        assert gauss_mean_fidelity(3, 3) > info_mean_fidelity(3)

    def test_rejects_single_copy_rows(self):
        with pytest.raises(ValueError):
            comparison_table([(1, 1)])
