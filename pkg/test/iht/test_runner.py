import logging

import numpy as np
import pytest

from acdckit.iht import DivergenceError, IhtConfig, PolishConfig, contraction_rate, geometric_mean_rate, \
    planted_problem, resolve_step_size, run_iht
from acdckit.numeric import SeededRng, gaussian_matrix
from acdckit.objective import LeastSquares
from acdckit.sparsity import GlobalTopK


def _recover(seed: int, samples: int = 400, max_iters: int = 500):
    problem = planted_problem(1000, samples, 20, 0.0, SeededRng(seed))
    cfg = IhtConfig(GlobalTopK(k=60), max_iters=max_iters)
    t = run_iht(problem.objective(), cfg, rng=SeededRng(seed).spawn(9), theta_star=problem.theta_star, k_star=20)
    return problem, t


def _early_rate(t, start=10, stop=100, floor=1e-20):
    ratios = contraction_rate(t, 0.0)
    gaps = t.f_values()
    end = stop
    below = np.flatnonzero(gaps[1:] <= floor * gaps[0])
    if below.size:
        end = min(end, int(below[0]))
    return geometric_mean_rate(ratios, start, max(end, start + 1))


@pytest.mark.unittest
class TestIhtRunner:
    @pytest.mark.timeout(300)
    @pytest.mark.parametrize('seed', range(5))
    def test_noiseless_recovery(self, seed):
        problem, t = _recover(seed)
        theta = t.meta['theta']
        assert problem.relative_error(theta) <= 1e-6
        assert np.flatnonzero(np.abs(theta) > 1e-8 * np.abs(problem.theta_star).max()).tolist() == \
               problem.support().tolist()
        assert len(t) <= 501
        assert t.final.distance == pytest.approx(np.linalg.norm(theta - problem.theta_star))

    @pytest.mark.timeout(300)
    def test_trajectory_fields(self):
        _, t = _recover(0, max_iters=30)
        assert len(t) == 31
        assert t[0].iteration == 0
        assert all(r.max_abs <= s.max_abs for r, s in zip(t.records[:-1], t.records[1:]))
        assert all(len(r.support_hash) > 0 for r in t)
        assert t.meta['mode'] == 'deterministic'
        assert t.meta['stop_reason'] == 'max_iters'
        assert t.meta['step_size'] == pytest.approx(1 / (1.1 * t.meta['beta_hat']))
        assert t.meta['smoothness_support'] == 180
        assert t.meta['alpha_hat'] > 0
        assert t.meta['kappa_hat'] == pytest.approx(t.meta['beta_hat'] / t.meta['alpha_hat'])
        assert t.meta['implied_k'] >= 20
        assert np.count_nonzero(t.meta['theta']) == 60

    @pytest.mark.timeout(600)
    def test_linear_rate(self):
        rates_400, rates_600 = [], []
        for seed in range(3):
            _, t = _recover(seed, 400, 100)
            rates_400.append(_early_rate(t))
            _, t = _recover(seed, 600, 100)
            rates_600.append(_early_rate(t))
        assert np.median(rates_400) <= 0.9
        assert np.median(rates_600) < np.median(rates_400)

    @pytest.mark.timeout(600)
    def test_stochastic_floor(self):
        floors = {8: [], 32: []}
        for seed in range(5):
            problem = planted_problem(1000, 400, 20, 0.1, SeededRng(seed))
            obj = problem.objective()
            f_star = problem.reference_value()
            for batch_size in floors:
                cfg = IhtConfig(GlobalTopK(k=60), step_size=0.03, mode='stochastic',
                                batch_size=batch_size, max_iters=3000)
                t = run_iht(obj, cfg, rng=SeededRng(seed).spawn(batch_size))
                floors[batch_size].append(t.tail_mean(500) - f_star)
        assert np.median(floors[32]) < np.median(floors[8])

    def test_gradient_descent_reduction(self):
        rng = SeededRng(3)
        A = gaussian_matrix(40, 10, 0.2, rng)
        obj = LeastSquares(A, rng.normal(40))
        eta = 0.5 / obj.smoothness_bound()
        t = run_iht(obj, IhtConfig(GlobalTopK(k=10), step_size=eta, max_iters=50))

        theta = np.zeros(10)
        for i in range(1, 51):
            theta = theta - eta * obj.gradient(theta)
            assert t[i].f_value == pytest.approx(obj.value(theta), rel=1e-12, abs=1e-12)
        np.testing.assert_allclose(t.meta['theta'], theta, rtol=0.0, atol=1e-12)

    def test_final_meta(self):
        problem = planted_problem(60, 40, 3, 0.0, SeededRng(7))
        t = run_iht(problem.objective(), IhtConfig(GlobalTopK(k=6), step_size=0.05, max_iters=5), rng=SeededRng(7))
        assert {'theta', 'stop_reason', 'step_size', 'mode'} <= set(t.meta)
        assert t.meta['stop_reason'] == 'max_iters'
        assert t.meta['theta'].shape == (60,)
        assert np.count_nonzero(t.meta['theta']) <= 6

    def test_pattern_each_iteration(self):
        problem = planted_problem(200, 80, 5, 0.0, SeededRng(4))
        for iters in (1, 2, 5, 40):
            t = run_iht(problem.objective(), IhtConfig(GlobalTopK(k=15), max_iters=iters), rng=SeededRng(4))
            assert np.count_nonzero(t.meta['theta']) == 15

    def test_stop_tol(self):
        problem = planted_problem(200, 120, 5, 0.1, SeededRng(5))
        cfg = IhtConfig(GlobalTopK(k=15), max_iters=2000, stop_tol=1e-3)
        t = run_iht(problem.objective(), cfg, rng=SeededRng(5))
        assert t.meta['stop_reason'] == 'stop_tol'
        assert len(t) < 2001

    def test_divergence(self):
        obj = LeastSquares(np.eye(4) * 3.0, np.ones(4))
        cfg = IhtConfig(GlobalTopK(k=2), step_size=10.0, max_iters=100)
        with pytest.raises(DivergenceError) as ei:
            run_iht(obj, cfg)
        diagnostic = ei.value.diagnostic
        assert diagnostic['step_size'] == 10.0
        assert diagnostic['iteration'] >= 1
        assert diagnostic['f_initial'] == 4.0

    def test_polish(self):
        problem = planted_problem(200, 80, 5, 0.01, SeededRng(6))
        cfg = IhtConfig(GlobalTopK(k=15), max_iters=20, polish=PolishConfig(1e-8, 200))
        t = run_iht(problem.objective(), cfg, rng=SeededRng(6))
        assert set(t.final.extras) == {'polish_steps', 'polish_converged', 'polish_grad_inf', 'polish_grad_l2'}
        assert t.final.extras['polish_grad_l2'] >= t.final.extras['polish_grad_inf']
        assert np.count_nonzero(t.meta['theta']) <= 15

    def test_resolve_step_size(self):
        obj = LeastSquares(np.eye(4), np.ones(4))
        assert resolve_step_size(obj, IhtConfig(GlobalTopK(k=2), step_size=0.3), np.zeros(4), SeededRng(0)) == \
               {'step_size': 0.3}
        meta = resolve_step_size(obj, IhtConfig(GlobalTopK(k=1)), np.zeros(4), SeededRng(0))
        assert meta['beta_hat'] == pytest.approx(2.0)
        assert meta['step_size'] == pytest.approx(1 / 2.2)
        assert meta['smoothness_support'] == 3

        meta = resolve_step_size(obj, IhtConfig(GlobalTopK(k=1), mode='stochastic'), np.zeros(4), SeededRng(0))
        assert meta['step_size'] == pytest.approx(1 / 4.4)

    def test_stochastic_deterministic_replay(self):
        problem = planted_problem(100, 50, 3, 0.05, SeededRng(8))
        cfg = IhtConfig(GlobalTopK(k=9), mode='stochastic', batch_size=5, max_iters=30)
        a = run_iht(problem.objective(), cfg, rng=SeededRng(8))
        b = run_iht(problem.objective(), cfg, rng=SeededRng(8))
        assert a.f_values().tolist() == b.f_values().tolist()
        assert a.meta['mode'] == 'stochastic'

    def test_theory_logging(self, caplog):
        problem = planted_problem(100, 60, 3, 0.0, SeededRng(9))
        with caplog.at_level(logging.INFO, logger='acdckit'):
            run_iht(problem.objective(), IhtConfig(GlobalTopK(k=9), max_iters=2), rng=SeededRng(9), k_star=3)
        assert 'Theoretical sparsity' in caplog.text
        assert 'Estimated beta' in caplog.text

    def test_invalid_start(self):
        obj = LeastSquares(np.eye(4), np.ones(4))
        with pytest.raises(ValueError):
            run_iht(obj, IhtConfig(GlobalTopK(k=2)), theta0=np.zeros(3))
