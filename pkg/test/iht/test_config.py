import pytest

from acdckit.iht import BatchScheme, IhtConfig, IhtMode, PolishConfig
from acdckit.sparsity import GlobalTopK


@pytest.mark.unittest
class TestIhtConfig:
    def test_iht_config(self):
        cfg = IhtConfig(GlobalTopK(k=3))
        assert cfg.step_size == 'auto'
        assert cfg.mode == IhtMode.DETERMINISTIC
        assert not cfg.stochastic
        assert cfg.multiplier == 96.0
        assert cfg.step_from_smoothness(2.0) == pytest.approx(1 / 2.2)

    def test_stochastic(self):
        cfg = IhtConfig(GlobalTopK(k=3), mode='stochastic', batch_size=8, batch_scheme='with_replacement')
        assert cfg.mode == IhtMode.STOCHASTIC
        assert cfg.batch_scheme == BatchScheme.WITH_REPLACEMENT
        assert cfg.stochastic
        assert cfg.multiplier == 384.0
        assert cfg.step_from_smoothness(2.0) == pytest.approx(1 / 4.4)
        assert IhtConfig(GlobalTopK(k=3), theory_multiplier=10).multiplier == 10.0

    def test_invalid(self):
        with pytest.raises(TypeError):
            IhtConfig('global')
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), step_size=0.0)
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), step_size='fast')
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), max_iters=-1)
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), stop_tol=-1e-3)
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), batch_size=0)
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), safety=0.5)
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), divergence_factor=1.0)
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), stop_window=0)
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3), smoothness_trials=0)
        with pytest.raises(KeyError):
            IhtConfig(GlobalTopK(k=3), mode='accelerated')
        with pytest.raises(ValueError):
            IhtConfig(GlobalTopK(k=3)).step_from_smoothness(0.0)

    def test_polish_config(self):
        assert PolishConfig(1e-6, 100).step_size == 'auto'
        assert PolishConfig(1e-6, 0, 0.5).step_size == 0.5
        with pytest.raises(ValueError):
            PolishConfig(0.0, 10)
        with pytest.raises(ValueError):
            PolishConfig(1e-6, -1)
        with pytest.raises(ValueError):
            PolishConfig(1e-6, 10, -0.5)
