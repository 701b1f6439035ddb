"""
Overview:
    Checkpoint files of training runs.
"""
import json
import os
from dataclasses import dataclass
from typing import Optional

from packaging.version import Version

from .optimizer import OptimizerState
from .schedule import PhaseSchedule
from ..numeric import RNG_ALGORITHM, ParamSet, SeededRng
from ..sparsity import Mask

__all__ = [
    'CHECKPOINT_FORMAT_VERSION',
    'Checkpoint',
    'save_checkpoint', 'load_checkpoint',
]

CHECKPOINT_FORMAT_VERSION = '1.0'


@dataclass
class Checkpoint:
    """
    Overview:
        Content of a checkpoint file. Only ``params`` is mandatory.
    """
    params: ParamSet
    mask: Optional[Mask] = None
    schedule: Optional[PhaseSchedule] = None
    optimizer: Optional[OptimizerState] = None
    epoch: Optional[int] = None
    seed: Optional[int] = None

    def to_json(self) -> dict:
        return {
            'format_version': CHECKPOINT_FORMAT_VERSION,
            'rng': {'algorithm': RNG_ALGORITHM, 'seed': self.seed},
            'segments': self.params.to_json(),
            'mask': self.mask.to_json() if self.mask is not None else None,
            'schedule': self.schedule.to_json() if self.schedule is not None else None,
            'optimizer': self.optimizer.to_json() if self.optimizer is not None else None,
            'epoch': self.epoch,
        }

    @classmethod
    def from_json(cls, data: dict) -> 'Checkpoint':
        version = Version(str(data.get('format_version', '')))
        if version.major != Version(CHECKPOINT_FORMAT_VERSION).major:
            raise ValueError(f'Checkpoint format {CHECKPOINT_FORMAT_VERSION!r} expected '
                             f'but {data.get("format_version")!r} found.')
        algorithm = data.get('rng', {}).get('algorithm', RNG_ALGORITHM)
        if algorithm != RNG_ALGORITHM:
            raise ValueError(f'Random generator {RNG_ALGORITHM!r} expected but {algorithm!r} found.')
        return cls(
            params=ParamSet.from_json(data['segments']),
            mask=Mask.from_json(data['mask']) if data.get('mask') else None,
            schedule=PhaseSchedule.from_json(data['schedule']) if data.get('schedule') else None,
            optimizer=OptimizerState.from_json(data['optimizer']) if data.get('optimizer') else None,
            epoch=data.get('epoch'),
            seed=data.get('rng', {}).get('seed'),
        )


def save_checkpoint(path: str, params: ParamSet, mask: Optional[Mask] = None,
                    schedule: Optional[PhaseSchedule] = None, optimizer: Optional[OptimizerState] = None,
                    epoch: Optional[int] = None, rng: Optional[SeededRng] = None):
    """
    Overview:
        Write a checkpoint as json. Floats are written in their shortest exact form.

    :param path: Output file, parent directories are created.
    :param params: Parameters.
    :param mask: Mask over the prunable coordinates.
    :param schedule: Phase schedule of the run.
    :param optimizer: Optimizer configuration, the momentum buffer is not saved.
    :param epoch: Epoch of the snapshot.
    :param rng: Generator of the run, only its seed is saved.
    """
    if mask is not None and mask.size != params.prunable_count:
        raise ValueError(f'Mask over {params.prunable_count!r} prunable coordinates expected '
                         f'but {mask.size!r} found.')
    checkpoint = Checkpoint(params, mask, schedule, optimizer, epoch, rng.seed if rng is not None else None)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(checkpoint.to_json(), f)


def load_checkpoint(path: str) -> Checkpoint:
    """
    Overview:
        Read a checkpoint written by :func:`save_checkpoint`.
    """
    with open(path, 'r') as f:
        return Checkpoint.from_json(json.load(f))
