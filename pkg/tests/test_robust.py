import numpy as np
import pytest

from quantopt import (
    Box,
    BumpParams,
    EvaluationError,
    RobustProblem,
    bump_boxes,
    bump_response,
    bump_values,
    default_epsilon,
    many_objective_levels,
    standard_levels,
)
from quantopt.sampling import rng_from

UNIT = Box([0.0], [1.0])


def uniform_passthrough(z, u):
    return u[:, 0]


class TestLevels:
    def test_formulations(self):
        assert standard_levels("F1", 0.001) == (0.001, 0.999)
        assert standard_levels("F2", 0.001) == (0.25, 0.999)
        assert standard_levels("F3", 0.001) == (0.45, 0.999)

    @pytest.mark.parametrize("eps", [0.0, 0.5, -0.1, 0.7])
    def test_epsilon_out_of_range(self, eps):
        with pytest.raises(ValueError, match="epsilon"):
            standard_levels("F1", eps)

    def test_unknown_formulation(self):
        with pytest.raises(ValueError, match="formulation"):
            standard_levels("F9", 0.001)

    def test_many_objective_examples(self):
        assert many_objective_levels(4, 1e-4) == (0.25, 0.5, 0.75, 1 - 1e-4)
        assert many_objective_levels(1, 1e-4) == (1 - 1e-4,)
        levels = many_objective_levels(10)
        assert len(levels) == 10
        np.testing.assert_allclose(levels[:-1], np.arange(1, 10) / 10)

    def test_many_objective_count_validation(self):
        with pytest.raises(ValueError):
            many_objective_levels(0)

    def test_default_epsilon(self):
        assert default_epsilon(2500) == 1 / 2500
        assert default_epsilon(100_000) == 1e-4


class TestValidation:
    def test_levels_must_increase(self):
        with pytest.raises(ValueError, match="strictly increasing"):
            RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5, 0.5), mc_count=10)
        with pytest.raises(ValueError, match="strictly increasing"):
            RobustProblem(UNIT, UNIT, uniform_passthrough, (0.9, 0.1), mc_count=10)

    def test_levels_in_range(self):
        with pytest.raises(ValueError, match="level out of range"):
            RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5, 1.5), mc_count=10)

    def test_mc_count_minimum(self):
        with pytest.raises(ValueError, match="mc_count"):
            RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5,), mc_count=1)

    def test_mode_validation(self):
        with pytest.raises(ValueError, match="mc_mode"):
            RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5,), mc_count=10,
                          mc_mode="fresh")


class TestEvaluateDesign:
    def test_degenerate_response_returns_design(self):
        problem = RobustProblem(
            Box([-4.0], [4.0]), UNIT,
            lambda z, u: np.full(u.shape[0], z[0]),
            levels=(0.1, 0.9), mc_count=100, seed=1,
        )
        np.testing.assert_allclose(problem.evaluate_design([1.7]), [1.7, 1.7])

    def test_uniform_median(self):
        problem = RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5,),
                                mc_count=100_000, seed=2)
        assert problem.evaluate_design([0.5])[0] == pytest.approx(0.5, abs=0.01)

    def test_flat_plateau_spread_bound(self):
        # total variation of the response over the reachable x-window bounds
        # any quantile spread; the window around the wide well is nearly flat
        params = BumpParams.default()
        sweep = bump_values(params, np.linspace(2.25, 2.75, 4001))
        bound = sweep.max() - sweep.min()
        dbox, ubox = bump_boxes(1)
        problem = RobustProblem(dbox, ubox, bump_response(params),
                                standard_levels("F1", 1e-3), mc_count=2500, seed=3)
        lo, hi = problem.evaluate_design([2.5])
        assert 0 <= hi - lo <= bound
        assert bound < 0.035  # documents the plateau scale used above

    def test_objectives_monotone_in_level(self):
        rng = rng_from(11)
        problem = RobustProblem(
            Box([0.0], [1.0]), Box([-1.0], [1.0]),
            lambda z, u: np.sin(5 * u[:, 0]) + z[0] * u[:, 0] ** 2,
            levels=(0.05, 0.25, 0.5, 0.9), mc_count=500, seed=4,
        )
        for _ in range(10):
            objs = problem.evaluate_design(rng.random(1))
            assert np.all(np.diff(objs) >= 0)

    def test_frozen_mode_is_pure(self):
        problem = RobustProblem(UNIT, UNIT, uniform_passthrough, (0.1, 0.9),
                                mc_count=200, seed=5)
        a = problem.evaluate_design([0.3])
        b = problem.evaluate_design([0.3])
        assert np.array_equal(a, b)

    def test_monotone_response_gives_monotone_objectives(self):
        problem = RobustProblem(
            Box([0.0], [10.0]), UNIT,
            lambda z, u: z[0] + u[:, 0],
            levels=(0.2, 0.8), mc_count=300, seed=6,
        )
        values = np.array([problem.evaluate_design([z]) for z in np.linspace(0, 10, 9)])
        assert np.all(np.diff(values[:, 0]) > 0)
        assert np.all(np.diff(values[:, 1]) > 0)

    def test_estimator_converges_with_sample_size(self):
        errors = []
        for mc_count in (100, 1000, 10_000):
            errs = []
            for seed in range(8):
                p = RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5,),
                                  mc_count=mc_count, seed=seed)
                errs.append(abs(p.evaluate_design([0.5])[0] - 0.5))
            errors.append(np.mean(errs))
        assert errors[0] > errors[1] > errors[2]

    def test_out_of_bounds_design(self):
        problem = RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5,), mc_count=10)
        with pytest.raises(ValueError, match="design out of bounds"):
            problem.evaluate_design([1.5])

    def test_non_finite_response_reports_offender(self):
        def response(z, u):
            values = u[:, 0].copy()
            values[u[:, 0] > 0.9] = np.nan
            return values

        problem = RobustProblem(UNIT, UNIT, response, (0.5,), mc_count=200, seed=7)
        with pytest.raises(EvaluationError) as exc_info:
            problem.evaluate_design([0.5])
        err = exc_info.value
        np.testing.assert_allclose(err.design, [0.5])
        assert err.uncertainty.shape[0] >= 1
        assert np.all(err.uncertainty[:, 0] > 0.9)

    def test_post_map_hook(self):
        problem = RobustProblem(UNIT, UNIT, uniform_passthrough, (0.2, 0.8),
                                mc_count=500, seed=8,
                                post_map=lambda v: v[::-1] * 2)
        objs = problem.evaluate_design([0.0])
        plain = RobustProblem(UNIT, UNIT, uniform_passthrough, (0.2, 0.8),
                              mc_count=500, seed=8).evaluate_design([0.0])
        np.testing.assert_allclose(objs, plain[::-1] * 2)


class TestRedrawnMode:
    def _problem(self):
        return RobustProblem(UNIT, UNIT, uniform_passthrough, (0.5,),
                             mc_count=100, mc_mode="redrawn", seed=9)

    def test_same_draw_id_is_deterministic(self):
        p = self._problem()
        a = p.evaluate_design([0.1], draw_id=(3, 4))
        b = p.evaluate_design([0.1], draw_id=(3, 4))
        assert np.array_equal(a, b)

    def test_different_draw_ids_differ(self):
        p = self._problem()
        a = p.evaluate_design([0.1], draw_id=(1, 0))
        b = p.evaluate_design([0.1], draw_id=(1, 1))
        assert not np.array_equal(a, b)

    def test_internal_counter_advances(self):
        p = self._problem()
        a = p.evaluate_design([0.1])
        b = p.evaluate_design([0.1])
        assert not np.array_equal(a, b)
