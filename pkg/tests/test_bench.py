import numpy as np
import pytest

from quantopt import (
    BumpParams,
    GaConfig,
    RobustProblem,
    bootstrap_quantile,
    bump_values,
    compose_front_from_1d,
    eval_bump,
    eval_mv1,
    eval_mv4,
    mv4_boxes,
    mv4_reference_solutions,
    mv4_response,
    run_moga,
    standard_levels,
)
from quantopt.bench import mv4_grid_references
from quantopt.moga import dominates
from quantopt.sampling import rng_from


class TestBump:
    def test_value_at_deep_well(self):
        # direct evaluation: 1 - 0.9 - 0.5*exp(-2.25) - (negligible terms)
        assert eval_bump(BumpParams.default(), 1.0) == pytest.approx(0.04730, abs=1e-5)

    def test_value_at_wide_well_center(self):
        # the three narrow wells contribute ~exp(-112) here, so exactly 0.5
        assert eval_bump(BumpParams.default(), 2.5) == pytest.approx(0.5, abs=1e-9)

    def test_zero_amplitudes(self):
        p = BumpParams(np.zeros(4), np.ones(4), np.array([1.0, 2.0, 3.0, 4.0]))
        for x in (0.0, 1.7, 5.0):
            assert eval_bump(p, x) == 1.0

    def test_batch_matches_scalar(self):
        p = BumpParams.default()
        xs = np.linspace(0, 5, 17)
        np.testing.assert_allclose(bump_values(p, xs), [eval_bump(p, x) for x in xs])

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            BumpParams([1.0], [0.0], [1.0])
        with pytest.raises(ValueError):
            BumpParams([1.0, 2.0], [1.0], [1.0])

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            eval_bump(BumpParams.default(), [1.0, 2.0])


class TestMv4:
    def test_table_min_value(self):
        assert eval_mv4([3.1416], [0.0]) == pytest.approx(-6.283185, abs=1e-5)

    def test_table_minimax_value(self):
        assert eval_mv4([4.6638], [0.0]) == pytest.approx(-0.305173, abs=1e-5)

    def test_cosine_at_zero(self):
        assert eval_mv4([0.0], [0.0]) == pytest.approx(2 * np.pi)

    def test_dimension_averaging(self):
        one = eval_mv4([3.1416], [0.0])
        assert eval_mv4([3.1416, 3.1416], [0.0, 0.0]) == pytest.approx(one)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            eval_mv4([1.0, 2.0], [0.0])

    def test_permutation_invariance(self):
        rng = rng_from(5)
        for _ in range(20):
            d, u = rng.random(4) * 6, rng.random(4) * 3
            perm = rng.permutation(4)
            assert eval_mv4(d, u) == pytest.approx(eval_mv4(d[perm], u[perm]))

    def test_batch_matches_scalar(self):
        rng = rng_from(6)
        d = rng.random(3) * 6
        u = rng.random((10, 3)) * 3
        np.testing.assert_allclose(
            mv4_response(d, u), [eval_mv4(d, row) for row in u]
        )


class TestMv1:
    @pytest.mark.parametrize(
        "d,u,expected",
        [([1.0], [3.0], 9.0), ([1.0, 1.0], [-5.0, 3.0], 34.0), ([2.0], [-4.0], 32.0)],
    )
    def test_examples(self, d, u, expected):
        assert eval_mv1(d, u) == expected

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            eval_mv1([1.0], [1.0, 2.0])

    def test_nonnegative_for_nonnegative_weights(self):
        rng = rng_from(7)
        for _ in range(50):
            d = rng.random(3) * 5
            u = rng.uniform(-5, 3, 3)
            assert eval_mv1(d, u) >= 0.0
        assert eval_mv1([2.0, 3.0], [0.0, 0.0]) == 0.0
        assert eval_mv1([2.0, 3.0], [0.0, 0.1]) > 0.0


class TestReferences:
    def test_min_solution(self):
        refs = mv4_reference_solutions()
        assert refs["min"].value == pytest.approx(-6.283185, abs=1e-6)
        np.testing.assert_allclose(refs["min"].design, [np.pi])
        np.testing.assert_allclose(refs["min"].uncertainty, [0.0])

    def test_minimax_solution(self):
        refs = mv4_reference_solutions()
        assert refs["minimax"].value == pytest.approx(-0.305173, abs=1e-6)

    def test_dimension_independent(self):
        r1, r6 = mv4_reference_solutions(1), mv4_reference_solutions(6)
        assert r6["min"].value == pytest.approx(r1["min"].value)
        assert r6["minimax"].value == pytest.approx(r1["minimax"].value)
        assert r6["min"].design.shape == (6,)

    def test_grid_search_reproduces_table(self):
        grid = mv4_grid_references()
        refs = mv4_reference_solutions()
        assert grid["min"] == pytest.approx(refs["min"].value, abs=1e-3)
        assert grid["minimax"] == pytest.approx(refs["minimax"].value, abs=1e-3)
        # n=1 global grid minimum is -2*pi up to grid resolution
        assert grid["min"] == pytest.approx(-2 * np.pi, abs=1e-5)


class TestComposeFront:
    @staticmethod
    def _sum_evaluator(z):
        # separable toy objectives: both coordinates contribute additively
        z = np.asarray(z)
        return np.array([z.sum(), -z.sum()])

    def test_single_element(self):
        front = compose_front_from_1d([(2.0, (1.0, -1.0))], 3, self._sum_evaluator)
        assert len(front) == 1
        np.testing.assert_allclose(front[0][0], [2.0, 2.0, 2.0])

    def test_two_designs_give_three_candidates(self):
        seen = []

        def evaluator(z):
            seen.append(tuple(z))
            return self._sum_evaluator(z)

        compose_front_from_1d([(0.0, ()), (1.0, ())], 2, evaluator)
        assert len(seen) == 3  # combinations with replacement, order-free

    def test_output_mutually_nondominated(self):
        rng = rng_from(8)
        designs = [(float(d), ()) for d in rng.random(12)]

        def evaluator(z):
            z = np.asarray(z)
            return np.array([np.sin(3 * z).sum(), np.cos(2 * z).sum()])

        front = compose_front_from_1d(designs, 3, evaluator)
        objs = [o for _, o in front]
        for i, a in enumerate(objs):
            for j, b in enumerate(objs):
                if i != j:
                    assert not dominates(a, b)

    def test_candidate_cap(self):
        designs = [(float(i), ()) for i in range(2000)]
        with pytest.raises(ValueError, match="thin the 1-d front"):
            compose_front_from_1d(designs, 3, self._sum_evaluator)

    def test_empty_front_rejected(self):
        with pytest.raises(ValueError):
            compose_front_from_1d([], 2, self._sum_evaluator)

    def test_composed_front_covers_direct_ga_front(self):
        # a composed front built from a decent 1-d run should dominate-or-equal
        # every point a weak direct 2-d run finds, up to quantile estimation
        # noise (slack = 2x the bootstrap SE of the objectives)
        levels = standard_levels("F1", 1e-3)
        dbox1, ubox1 = mv4_boxes(1)
        p1 = RobustProblem(dbox1, ubox1, mv4_response, levels, mc_count=1000, seed=5)
        r1 = run_moga(p1, GaConfig(population_size=120, generations=12, seed=3))
        g1, o1 = r1.archive.genomes.ravel(), r1.archive.objectives
        order = np.argsort(o1[:, 0])
        keep = order[np.linspace(0, len(order) - 1, 200).astype(int)]
        front_1d = [(g1[i], o1[i]) for i in keep]

        dbox2, ubox2 = mv4_boxes(2)
        p2 = RobustProblem(dbox2, ubox2, mv4_response, levels, mc_count=1000, seed=5)
        composed = compose_front_from_1d(front_1d, 2, p2.evaluate_design)
        comp_obj = np.array([o for _, o in composed])

        r2 = run_moga(p2, GaConfig(population_size=40, generations=5, seed=9))
        mid = r2.archive.genomes[len(r2.archive) // 2]
        noise = p2.response_samples(mid)
        slack = 2 * max(
            bootstrap_quantile(noise, s, 500, seed=1).se_hat for s in levels
        )
        for point in r2.archive.objectives:
            assert np.any(np.all(comp_obj <= point + slack, axis=1))
