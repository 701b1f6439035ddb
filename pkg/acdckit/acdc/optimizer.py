"""
Overview:
    SGD with momentum and its learning rate schedules.

    Learning rates are evaluated at fractional epochs, so one global curve runs across \
    all phase boundaries.
"""
import math
from enum import IntEnum
from typing import Mapping, Optional, Union

import numpy as np
from hbutils.algorithm import linear_map
from hbutils.model import get_repr_info, int_enum_loads

from ..numeric import ParamSet
from ..sparsity import Mask

__all__ = [
    'LrKind', 'LrSchedule', 'OptimizerState',
    'DEFAULT_MOMENTUM', 'DEFAULT_BASE_LR', 'DEFAULT_WEIGHT_DECAY', 'DEFAULT_WARMUP_EPOCHS',
    'sgd_momentum_step',
]

DEFAULT_MOMENTUM = 0.875
DEFAULT_BASE_LR = 0.256
DEFAULT_WEIGHT_DECAY = 3.0517578125e-05
DEFAULT_WARMUP_EPOCHS = 5


@int_enum_loads(name_preprocess=str.upper)
class LrKind(IntEnum):
    """
    Overview:
        Shape of the learning rate curve after the linear warm-up.
    """
    COSINE = 1
    STEP = 2
    CONSTANT = 3


class LrSchedule:
    """
    Overview:
        Learning rate as a function of the fractional epoch.

    Examples::
        >>> from acdckit.acdc import LrSchedule
        >>> s = LrSchedule('cosine', 1.0, warmup_epochs=2, total_epochs=12)
        >>> s.lr_at(1.0), s.lr_at(2.0), s.lr_at(7.0)
        (0.5, 1.0, 0.5)
        >>> LrSchedule('step', 1.0, warmup_epochs=0, step_epochs=10, step_start=5).lr_at(16.0)
        0.010000000000000002
    """

    def __init__(self, kind='cosine', base_lr: float = DEFAULT_BASE_LR,
                 warmup_epochs: float = DEFAULT_WARMUP_EPOCHS, total_epochs: Optional[float] = None,
                 final_lr: float = 0.0, gamma: float = 0.1, step_epochs: float = 60, step_start: float = 65,
                 warmup_start: float = 0.0):
        """
        Constructor of :class:`LrSchedule`.

        :param kind: Curve after the warm-up, ``cosine``, ``step`` or ``constant``.
        :param base_lr: Learning rate at the end of the warm-up.
        :param warmup_epochs: Length of the linear warm-up, ``0`` disables it.
        :param total_epochs: Length of the cosine curve, required by ``cosine``.
        :param final_lr: Learning rate at ``total_epochs`` of ``cosine``.
        :param gamma: Decay factor of ``step``.
        :param step_epochs: Distance between two decays of ``step``.
        :param step_start: Epoch of the first decay of ``step``.
        :param warmup_start: Learning rate at epoch ``0`` of the warm-up.
        """
        self.__kind = LrKind.loads(kind)
        if not base_lr > 0:
            raise ValueError(f'Positive base learning rate expected but {base_lr!r} found.')
        if not warmup_epochs >= 0:
            raise ValueError(f'Non-negative warm-up length expected but {warmup_epochs!r} found.')
        if self.__kind == LrKind.COSINE:
            if total_epochs is None or not total_epochs > warmup_epochs:
                raise ValueError(f'Total epochs beyond the warm-up of {warmup_epochs!r} expected '
                                 f'but {total_epochs!r} found.')
        if self.__kind == LrKind.STEP:
            if not 0 < gamma <= 1:
                raise ValueError(f'Decay factor in (0, 1] expected but {gamma!r} found.')
            if not step_epochs > 0:
                raise ValueError(f'Positive decay interval expected but {step_epochs!r} found.')
        if not 0 <= final_lr <= base_lr or not 0 <= warmup_start <= base_lr:
            raise ValueError(f'Final and warm-up start rates in [0, {base_lr!r}] expected '
                             f'but {(final_lr, warmup_start)!r} found.')

        self.__base_lr = float(base_lr)
        self.__warmup_epochs = float(warmup_epochs)
        self.__total_epochs = float(total_epochs) if total_epochs is not None else None
        self.__final_lr = float(final_lr)
        self.__gamma = float(gamma)
        self.__step_epochs = float(step_epochs)
        self.__step_start = float(step_start)
        self.__warmup_start = float(warmup_start)
        self.__ramp = linear_map(((0.0, self.__warmup_start), (self.__warmup_epochs, self.__base_lr))) \
            if self.__warmup_epochs > 0 else None

    @property
    def kind(self) -> LrKind:
        return self.__kind

    @property
    def base_lr(self) -> float:
        return self.__base_lr

    @property
    def warmup_epochs(self) -> float:
        return self.__warmup_epochs

    @property
    def total_epochs(self) -> Optional[float]:
        return self.__total_epochs

    def lr_at(self, epoch: float) -> float:
        """
        Overview:
            Learning rate at fractional ``epoch``.
        """
        if epoch < 0:
            raise ValueError(f'Non-negative epoch expected but {epoch!r} found.')
        if self.__ramp is not None and epoch < self.__warmup_epochs:
            return float(self.__ramp(epoch))

        if self.__kind == LrKind.COSINE:
            progress = min(1.0, (epoch - self.__warmup_epochs) / (self.__total_epochs - self.__warmup_epochs))
            return self.__final_lr + 0.5 * (self.__base_lr - self.__final_lr) * (1.0 + math.cos(math.pi * progress))
        elif self.__kind == LrKind.STEP:
            decays = 0 if epoch < self.__step_start else int((epoch - self.__step_start) // self.__step_epochs) + 1
            return self.__base_lr * self.__gamma ** decays
        else:
            return self.__base_lr

    def to_json(self) -> dict:
        data = {
            'kind': self.__kind.name.lower(),
            'base_lr': self.__base_lr,
            'warmup_epochs': self.__warmup_epochs,
            'warmup_start': self.__warmup_start,
        }
        if self.__kind == LrKind.COSINE:
            data.update({'total_epochs': self.__total_epochs, 'final_lr': self.__final_lr})
        elif self.__kind == LrKind.STEP:
            data.update({'gamma': self.__gamma, 'step_epochs': self.__step_epochs, 'step_start': self.__step_start})
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> 'LrSchedule':
        return cls(**data)

    def __eq__(self, other):
        return isinstance(other, LrSchedule) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(tuple(sorted(self.to_json().items())))

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('kind', lambda: self.__kind.name.lower()),
                ('base_lr', lambda: self.__base_lr),
                ('warmup', lambda: self.__warmup_epochs, lambda: self.__warmup_epochs > 0),
            ]
        )


class OptimizerState:
    """
    Overview:
        State of SGD with momentum: learning rate schedule, momentum ``mu``, weight decay and the \
        momentum buffer. The buffer is created on the first step, with the parameter shape.

    Examples::
        >>> from acdckit.acdc import OptimizerState, sgd_momentum_step
        >>> state = OptimizerState(0.1, momentum=0.0)
        >>> sgd_momentum_step([1.0], [2.0], state).tolist()
        [0.8]
    """

    def __init__(self, lr: Union[float, LrSchedule], momentum: float = DEFAULT_MOMENTUM,
                 weight_decay: float = 0.0):
        if not isinstance(lr, LrSchedule):
            lr = LrSchedule('constant', lr, warmup_epochs=0)
        if not 0 <= momentum < 1:
            raise ValueError(f'Momentum in [0, 1) expected but {momentum!r} found.')
        if not weight_decay >= 0:
            raise ValueError(f'Non-negative weight decay expected but {weight_decay!r} found.')
        self.__schedule = lr
        self.__momentum = float(momentum)
        self.__weight_decay = float(weight_decay)
        self.__buffer: Optional[np.ndarray] = None
        self.__epoch = 0.0
        self.__steps = 0
        self.__resets = 0

    @classmethod
    def default(cls, total_epochs: int, batch_size: int = 256) -> 'OptimizerState':
        """
        Overview:
            Default recipe, momentum ``0.875``, base rate ``0.256`` scaled by ``batch_size / 256``, \
            weight decay ``3.0517578125e-05``, 5 warm-up epochs and a cosine curve over ``total_epochs``.
        """
        warmup = min(DEFAULT_WARMUP_EPOCHS, max(0, total_epochs - 1))
        schedule = LrSchedule('cosine', DEFAULT_BASE_LR * batch_size / 256,
                              warmup_epochs=warmup, total_epochs=total_epochs)
        return cls(schedule, DEFAULT_MOMENTUM, DEFAULT_WEIGHT_DECAY)

    @property
    def schedule(self) -> LrSchedule:
        return self.__schedule

    @property
    def momentum(self) -> float:
        return self.__momentum

    @property
    def weight_decay(self) -> float:
        return self.__weight_decay

    @property
    def buffer(self) -> Optional[np.ndarray]:
        return self.__buffer

    @property
    def epoch(self) -> float:
        return self.__epoch

    @epoch.setter
    def epoch(self, value: float):
        self.__epoch = float(value)

    @property
    def lr(self) -> float:
        return self.__schedule.lr_at(self.__epoch)

    @property
    def steps(self) -> int:
        return self.__steps

    @property
    def resets(self) -> int:
        return self.__resets

    def reset(self):
        """
        Overview:
            Zero the momentum buffer.
        """
        if self.__buffer is not None:
            self.__buffer = np.zeros_like(self.__buffer)
        self.__resets += 1

    def _update(self, theta: np.ndarray, g: np.ndarray, active: Optional[np.ndarray]) -> np.ndarray:
        if self.__buffer is None:
            self.__buffer = np.zeros_like(theta)
        elif self.__buffer.shape != theta.shape:
            raise ValueError(f'Momentum buffer of shape {theta.shape!r} expected '
                             f'but {self.__buffer.shape!r} found.')

        v = self.__momentum * self.__buffer + g
        if self.__weight_decay:
            v = v + self.__weight_decay * theta
        if active is not None:
            v = np.where(active, v, 0.0)
        self.__buffer = v
        self.__steps += 1
        return theta - self.lr * v

    def to_json(self) -> dict:
        return {
            'lr': self.__schedule.to_json(),
            'momentum': self.__momentum,
            'weight_decay': self.__weight_decay,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> 'OptimizerState':
        return cls(LrSchedule.from_json(data['lr']), data['momentum'], data['weight_decay'])

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('lr', lambda: self.__schedule),
                ('momentum', lambda: self.__momentum),
                ('weight_decay', lambda: self.__weight_decay, lambda: bool(self.__weight_decay)),
                ('steps', lambda: self.__steps),
            ]
        )


def _active_bits(mask, length: int, params: Optional[ParamSet]) -> Optional[np.ndarray]:
    if mask is None:
        return None
    bits = mask.bits if isinstance(mask, Mask) else np.asarray(mask, dtype=bool)
    if bits.shape == (length,):
        return bits
    elif params is not None and bits.shape == (params.prunable_count,):
        active = np.ones(length, dtype=bool)
        active[params.prunable_index] = bits
        return active
    else:
        raise ValueError(f'Mask of length {length!r} expected but shape {bits.shape!r} found.')


def sgd_momentum_step(theta, g, state: OptimizerState, mask=None):
    """
    Overview:
        One step of SGD with momentum, ``v <- mu v + g + wd theta`` and ``theta <- theta - lr v``, \
        with the rate of ``state`` at its current epoch.

        With a ``mask`` the velocity is zeroed outside of it, so masked coordinates keep their value. \
        For a parameter set the mask may cover only the prunable coordinates, \
        non-prunable ones are then always active.

    :param theta: Flat parameter vector or parameter set.
    :param g: Gradient, same type and layout as ``theta``.
    :param state: Optimizer state, updated in place.
    :param mask: Optional active coordinates.
    :return: Updated parameters, same type as ``theta``.

    Examples::
        >>> from acdckit.acdc import OptimizerState, sgd_momentum_step
        >>> state = OptimizerState(1.0, momentum=0.5)
        >>> theta = sgd_momentum_step([0.0], [1.0], state)
        >>> sgd_momentum_step(theta, [1.0], state).tolist(), state.buffer.tolist()
        ([-2.5], [1.5])
    """
    if isinstance(theta, ParamSet):
        if not isinstance(g, ParamSet) or not theta.same_layout(g):
            raise ValueError(f'Gradient with layout of {theta!r} expected but {g!r} found.')
        flat = theta.flat()
        return theta.with_flat(state._update(flat, g.flat(), _active_bits(mask, flat.shape[0], theta)))

    theta = np.asarray(theta, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if theta.ndim != 1 or theta.shape != g.shape:
        raise ValueError(f'Gradient of shape {theta.shape!r} expected but {g.shape!r} found.')
    return state._update(theta, g, _active_bits(mask, theta.shape[0], None))
