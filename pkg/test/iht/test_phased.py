import numpy as np
import pytest

from acdckit.iht import DivergenceError, IhtConfig, planted_problem, run_phased_iht
from acdckit.numeric import SeededRng
from acdckit.objective import LeastSquares
from acdckit.sparsity import GlobalTopK, Mask


@pytest.mark.unittest
class TestIhtPhased:
    def test_phased(self):
        problem = planted_problem(200, 100, 5, 0.0, SeededRng(0))
        cfg = IhtConfig(GlobalTopK(k=15), step_size=0.01, batch_size=10)
        t = run_phased_iht(problem.objective(), cfg, rounds=6, dense_passes=2, sparse_passes=2,
                           rng=SeededRng(1), theta_star=problem.theta_star)
        assert len(t) == 7
        assert [r.iteration for r in t] == list(range(7))
        assert t.meta['mode'] == 'phased'
        assert t.meta['step_size'] == 0.01
        assert np.count_nonzero(t.meta['theta']) <= 15
        for record in t.records[1:]:
            assert set(record.extras) == {'dense_value', 'pruned_value'}
            assert record.distance is not None
        assert t.final.f_value < t[0].f_value
        assert t.final.distance < t[0].distance

    def test_sparse_passes_keep_mask(self):
        problem = planted_problem(100, 60, 4, 0.0, SeededRng(2))
        cfg = IhtConfig(GlobalTopK(k=8), step_size=0.01, batch_size=6)
        t = run_phased_iht(problem.objective(), cfg, rounds=1, dense_passes=1, sparse_passes=3, rng=SeededRng(3))
        theta = t.meta['theta']
        assert np.count_nonzero(theta) <= 8
        assert Mask.from_nonzero(theta).digest() == t.final.support_hash

    def test_deterministic(self):
        problem = planted_problem(80, 40, 3, 0.05, SeededRng(4))
        cfg = IhtConfig(GlobalTopK(k=9), step_size=0.02, batch_size=4)
        a = run_phased_iht(problem.objective(), cfg, 3, 1, 1, rng=SeededRng(5))
        b = run_phased_iht(problem.objective(), cfg, 3, 1, 1, rng=SeededRng(5))
        assert a.f_values().tolist() == b.f_values().tolist()
        assert np.array_equal(a.meta['theta'], b.meta['theta'])

    def test_auto_step(self):
        problem = planted_problem(80, 40, 3, 0.0, SeededRng(6))
        cfg = IhtConfig(GlobalTopK(k=9))
        t = run_phased_iht(problem.objective(), cfg, 2, 1, rng=SeededRng(6))
        assert 'beta_hat' in t.meta
        assert len(t) == 3
        assert t.meta['smoothness_support'] == 40
        assert t.meta['step_size'] == cfg.step_from_smoothness(t.meta['beta_hat'])
        assert t.meta['beta_hat'] >= problem.objective().smoothness_bound() * 0.5
        assert np.all(np.isfinite(t.f_values()))
        assert t.final.f_value < t[0].f_value

    def test_divergence(self):
        obj = LeastSquares(np.eye(4) * 3.0, np.ones(4))
        cfg = IhtConfig(GlobalTopK(k=2), step_size=10.0, batch_size=1)
        with pytest.raises(DivergenceError) as ei:
            run_phased_iht(obj, cfg, rounds=3, dense_passes=3)
        assert ei.value.diagnostic['stage'] == 'dense'
        assert ei.value.diagnostic['round'] == 1

    def test_invalid(self):
        obj = LeastSquares(np.eye(4), np.ones(4))
        cfg = IhtConfig(GlobalTopK(k=2), step_size=0.1)
        with pytest.raises(ValueError):
            run_phased_iht(obj, cfg, rounds=0, dense_passes=1)
        with pytest.raises(ValueError):
            run_phased_iht(obj, cfg, rounds=1, dense_passes=0)
        with pytest.raises(ValueError):
            run_phased_iht(obj, cfg, rounds=1, dense_passes=1, sparse_passes=-1)
