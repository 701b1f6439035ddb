"""
Overview:
    Configuration of iterative hard thresholding runs.
"""
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Union

from hbutils.model import int_enum_loads

from ..sparsity import SparsityPattern

__all__ = [
    'IhtMode', 'BatchScheme',
    'PolishConfig', 'IhtConfig',
]


def _enum_name(name: str) -> str:
    return name.upper().replace('-', '_')


@int_enum_loads(name_preprocess=_enum_name)
class IhtMode(IntEnum):
    """
    Overview:
        Full gradients or mini-batch stochastic gradients.
    """
    DETERMINISTIC = 1
    STOCHASTIC = 2


@int_enum_loads(name_preprocess=_enum_name)
class BatchScheme(IntEnum):
    """
    Overview:
        How mini-batches are drawn. ``SHUFFLED_PARTITION`` reshuffles the samples every epoch \
        and walks through the resulting partition, ``WITH_REPLACEMENT`` draws every batch independently.
    """
    SHUFFLED_PARTITION = 1
    WITH_REPLACEMENT = 2


@dataclass
class PolishConfig:
    """
    Overview:
        Polishing on the current support after each truncation. ``eps`` bounds the \
        infinity norm of the restricted gradient.
    """
    eps: float
    max_inner: int
    step_size: Union[float, str] = 'auto'

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError(f'Positive polish tolerance expected but {self.eps!r} found.')
        if not isinstance(self.max_inner, int) or self.max_inner < 0:
            raise ValueError(f'Non-negative inner step count expected but {self.max_inner!r} found.')
        if self.step_size != 'auto' and not (isinstance(self.step_size, (int, float)) and self.step_size > 0):
            raise ValueError(f'Positive step size or \'auto\' expected but {self.step_size!r} found.')


@dataclass
class IhtConfig:
    """
    Overview:
        Iterative hard thresholding configuration.

    Arguments:
        - pattern (:obj:`SparsityPattern`): Truncation pattern.
        - step_size: Positive step size, or ``'auto'`` for ``1 / beta`` (deterministic) \
            and ``1 / (2 beta)`` (stochastic) where ``beta`` is the estimated restricted smoothness \
            multiplied by ``safety``.
        - max_iters (:obj:`int`): Maximal iteration count.
        - stop_tol (:obj:`float`): Stop when the relative decrease of ``f`` over ``stop_window`` \
            iterations falls below this value. ``0`` disables the rule.
        - mode (:obj:`IhtMode`): Deterministic or stochastic.
        - batch_size (:obj:`int`): Mini-batch size in stochastic mode.
        - batch_scheme (:obj:`BatchScheme`): Mini-batch sampling scheme.
        - polish (:obj:`Optional[PolishConfig]`): Polish after every truncation when given.
        - safety (:obj:`float`): Factor applied to the estimated smoothness.
        - divergence_factor (:obj:`float`): Abort once ``f`` exceeds this multiple of the initial value.
        - smoothness_trials (:obj:`int`): Sampled directions for the smoothness estimate.
        - power_steps (:obj:`int`): Truncated power refinements per sampled direction.
        - theory_multiplier (:obj:`Optional[float]`): Constant ``C`` of the theoretical sparsity \
            ``k* (C kappa^2 + 1)``, ``None`` means 96 (deterministic) or 384 (stochastic).
    """
    pattern: SparsityPattern
    step_size: Union[float, str] = 'auto'
    max_iters: int = 500
    stop_tol: float = 0.0
    mode: IhtMode = IhtMode.DETERMINISTIC
    batch_size: int = 1
    batch_scheme: BatchScheme = BatchScheme.SHUFFLED_PARTITION
    polish: Optional[PolishConfig] = None
    safety: float = 1.1
    divergence_factor: float = 1e6
    stop_window: int = 10
    smoothness_trials: int = 5
    power_steps: int = 20
    theory_multiplier: Optional[float] = None

    def __post_init__(self):
        self.mode = IhtMode.loads(self.mode)
        self.batch_scheme = BatchScheme.loads(self.batch_scheme)
        if not isinstance(self.pattern, SparsityPattern):
            raise TypeError(f'Sparsity pattern expected but {type(self.pattern).__name__!r} found.')
        if self.step_size != 'auto' and not (isinstance(self.step_size, (int, float)) and self.step_size > 0):
            raise ValueError(f'Positive step size or \'auto\' expected but {self.step_size!r} found.')
        if not isinstance(self.max_iters, int) or self.max_iters < 0:
            raise ValueError(f'Non-negative iteration count expected but {self.max_iters!r} found.')
        if not self.stop_tol >= 0:
            raise ValueError(f'Non-negative stop tolerance expected but {self.stop_tol!r} found.')
        if not isinstance(self.batch_size, int) or self.batch_size < 1:
            raise ValueError(f'Positive batch size expected but {self.batch_size!r} found.')
        if not self.safety >= 1.0:
            raise ValueError(f'Safety factor no less than 1 expected but {self.safety!r} found.')
        if not self.divergence_factor > 1.0:
            raise ValueError(f'Divergence factor above 1 expected but {self.divergence_factor!r} found.')
        if self.stop_window < 1:
            raise ValueError(f'Positive stop window expected but {self.stop_window!r} found.')
        if self.smoothness_trials < 1 or self.power_steps < 0:
            raise ValueError(f'Positive smoothness trials and non-negative power steps expected '
                             f'but {(self.smoothness_trials, self.power_steps)!r} found.')

    @property
    def stochastic(self) -> bool:
        return self.mode == IhtMode.STOCHASTIC

    @property
    def multiplier(self) -> float:
        if self.theory_multiplier is not None:
            return float(self.theory_multiplier)
        return 384.0 if self.stochastic else 96.0

    def step_from_smoothness(self, beta_hat: float) -> float:
        """
        Overview:
            Step size derived from an estimated smoothness constant.
        """
        if not beta_hat > 0:
            raise ValueError(f'Positive smoothness estimate expected but {beta_hat!r} found.')
        beta = beta_hat * self.safety
        return 1.0 / (2.0 * beta) if self.stochastic else 1.0 / beta
