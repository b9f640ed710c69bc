import numpy as np
import pytest

from quantopt import bootstrap_quantile, error_vs_samples, subsample_bootstrap
from quantopt.bootstrap import replicate_ecdf_envelope
from quantopt.ecdf import build_ecdf
from quantopt.sampling import rng_from


def uniform_samples(n, seed):
    return rng_from(100 + seed).random(n)


class TestBootstrapQuantile:
    def test_constant_samples_zero_errors(self):
        result = bootstrap_quantile(np.full(50, 3.25), 0.5, 200, seed=1)
        assert result.se_hat == 0.0
        assert result.me_hat == 0.0

    def test_median_se_matches_asymptotics(self):
        # SE of the sample median of U(0,1) is 1/(2 sqrt(n)); allow +-25%
        samples = uniform_samples(1000, seed=0)
        result = bootstrap_quantile(samples, 0.5, 2000, seed=0)
        target = 1 / (2 * np.sqrt(1000))
        assert 0.75 * target <= result.se_hat <= 1.25 * target

    def test_deterministic_for_seed(self):
        samples = uniform_samples(200, seed=1)
        a = bootstrap_quantile(samples, 0.3, 300, seed=7)
        b = bootstrap_quantile(samples, 0.3, 300, seed=7)
        assert np.array_equal(a.replicates, b.replicates)
        assert a.se_hat == b.se_hat and a.me_hat == b.me_hat

    def test_replicates_are_sample_values(self):
        samples = rng_from(9).normal(size=80)
        result = bootstrap_quantile(samples, 0.7, 200, seed=2)
        assert np.isin(result.replicates, samples).all()
        assert result.observed == build_ecdf(samples).quantile(0.7)

    def test_validation(self):
        with pytest.raises(ValueError):
            bootstrap_quantile([1.0], 0.5, 200, seed=0)
        with pytest.raises(ValueError):
            bootstrap_quantile([1.0, 2.0], 0.5, 50, seed=0)
        with pytest.raises(ValueError, match="level out of range"):
            bootstrap_quantile([1.0, 2.0], 1.5, 200, seed=0)


class TestSubsampleBootstrap:
    def test_full_size_equals_plain_bootstrap(self):
        samples = uniform_samples(150, seed=2)
        plain = bootstrap_quantile(samples, 0.4, 250, seed=5)
        sub = subsample_bootstrap(samples, 0.4, 150, 250, seed=5)
        assert np.array_equal(plain.replicates, sub.replicates)
        assert plain.se_hat == sub.se_hat

    def test_single_draw_replicates(self):
        # m=1: each replicate quantile is one drawn sample value, so the
        # replicate spread reproduces the sample's own central-68% half width
        samples = rng_from(10).normal(size=4000)
        result = subsample_bootstrap(samples, 0.5, 1, 2000, seed=3)
        assert np.isin(result.replicates, samples).all()
        ecdf = build_ecdf(samples)
        sample_half_width = 0.5 * (ecdf.quantile(0.84) - ecdf.quantile(0.16))
        assert result.se_hat == pytest.approx(sample_half_width, rel=0.1)

    def test_se_shrinks_with_subsample_size(self):
        samples = uniform_samples(10_000, seed=3)
        ses = [
            subsample_bootstrap(samples, 0.5, m, 300, seed=4).se_hat
            for m in (50, 500, 5000)
        ]
        assert ses[0] > ses[1] > ses[2]

    def test_m_out_of_range(self):
        samples = uniform_samples(20, seed=4)
        for m in (0, 21):
            with pytest.raises(ValueError):
                subsample_bootstrap(samples, 0.5, m, 200, seed=0)

    def test_padding_replicated_values_changes_nothing(self):
        samples = uniform_samples(120, seed=5)
        direct = subsample_bootstrap(samples, 0.25, 30, 200, seed=6)
        padded = subsample_bootstrap(samples, 0.25, 30, 200, seed=6,
                                     materialize_replicated_ecdf=True)
        assert np.array_equal(direct.replicates, padded.replicates)
        assert direct.se_hat == padded.se_hat
        with pytest.raises(ValueError, match="divide"):
            subsample_bootstrap(samples, 0.25, 33, 200, seed=6,
                                materialize_replicated_ecdf=True)


class TestInvariances:
    def test_translation_leaves_errors_unchanged(self):
        samples = rng_from(11).normal(size=300)
        base = bootstrap_quantile(samples, 0.6, 300, seed=8)
        shifted = bootstrap_quantile(samples + 17.5, 0.6, 300, seed=8)
        assert shifted.se_hat == pytest.approx(base.se_hat, abs=1e-12)
        assert shifted.me_hat == pytest.approx(base.me_hat, abs=1e-12)
        assert shifted.observed == pytest.approx(base.observed + 17.5)

    def test_positive_scaling_scales_se(self):
        samples = rng_from(12).normal(size=300)
        base = bootstrap_quantile(samples, 0.6, 300, seed=9)
        scaled = bootstrap_quantile(samples * 4.0, 0.6, 300, seed=9)
        assert scaled.se_hat == pytest.approx(4.0 * base.se_hat, rel=1e-12)
        assert scaled.me_hat == pytest.approx(4.0 * base.me_hat, rel=1e-12)


class TestErrorVsSamples:
    def test_single_entry_equals_plain_bootstrap(self):
        samples = uniform_samples(200, seed=6)
        rows = error_vs_samples(samples, 0.5, [200], 300, seed=10)
        plain = bootstrap_quantile(samples, 0.5, 300, seed=10)
        assert len(rows) == 1
        assert rows[0][0] == 200
        assert rows[0][1].se_hat == plain.se_hat
        assert rows[0][1].me_hat == plain.me_hat

    def test_grid_validation(self):
        samples = uniform_samples(100, seed=7)
        with pytest.raises(ValueError, match="sorted ascending"):
            error_vs_samples(samples, 0.5, [50, 10], 200, seed=0)
        with pytest.raises(ValueError, match="within"):
            error_vs_samples(samples, 0.5, [10, 200], 200, seed=0)

    def test_loglog_slope_near_square_root_law(self):
        samples = uniform_samples(20_000, seed=8)
        rows = error_vs_samples(samples, 0.5, [100, 1000, 10_000], 400, seed=11)
        ms = np.log([m for m, _ in rows])
        ses = np.log([r.se_hat for _, r in rows])
        slope = np.polyfit(ms, ses, 1)[0]
        assert -0.65 <= slope <= -0.35


def test_replicate_envelope_brackets_ecdf_and_matches_stream():
    samples = uniform_samples(100, seed=9)
    grid = np.sort(samples)
    f_low, f_high = replicate_ecdf_envelope(samples, 100, 200, 12, grid)
    assert np.all(f_low <= f_high)
    assert np.all(f_low >= 0.0) and np.all(f_high <= 1.0)
    # the envelope's quantile band must contain every bootstrap replicate
    result = bootstrap_quantile(samples, 0.5, 200, seed=12)
    lo_q = grid[np.argmax(f_high >= 0.5)]
    hi_q = grid[np.argmax(f_low >= 0.5)]
    assert lo_q <= result.replicates.min()
    assert hi_q >= result.replicates.max()
