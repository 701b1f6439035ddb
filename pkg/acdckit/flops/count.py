"""
Overview:
    Floating point operation counts of sparse inference and training.

    A multiply-accumulate counts as 2 operations, and a layer with weight density ``d`` costs \
    ``d`` times its dense count. The backward pass costs twice the forward pass. A compressed epoch \
    costs ``3 F_C`` per sample, a decompressed epoch ``2 F_D + F`` with ``F`` the fully dense forward cost, \
    since gradients of all weights are computed even where they are zero.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from hbutils.model import get_repr_info

from .manifest import LayerManifest
from ..acdc import PhaseKind, PhaseSchedule

__all__ = [
    'FLOPS_PER_MAC',
    'DensityTrajectory', 'FlopReport',
    'forward_flops', 'dense_forward_flops', 'train_flops',
]

FLOPS_PER_MAC = 2

Densities = Union[Sequence[float], Mapping[str, float], None]


def _density_vector(m: LayerManifest, densities: Densities) -> np.ndarray:
    if densities is None:
        values = np.ones(len(m))
    elif isinstance(densities, Mapping):
        unknown = sorted(set(densities.keys()) - set(m.names))
        if unknown:
            raise ValueError(f'Densities of layers in {m.names!r} expected but {unknown!r} found.')
        values = np.array([float(densities.get(name, 1.0)) for name in m.names])
    else:
        values = np.asarray(densities, dtype=np.float64)
        if values.shape != (len(m),):
            raise ValueError(f'{len(m)!r} layer densities expected but shape {values.shape!r} found.')
    if np.any(~np.isfinite(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        raise ValueError(f'Densities in [0, 1] expected but {values[(values < 0) | (values > 1)].tolist()!r} found.')
    return values


def forward_flops(m: LayerManifest, densities: Densities = None) -> float:
    """
    Overview:
        Forward cost of one sample, ``sum(2 * macs * density)``.

    :param m: Layer manifest.
    :param densities: One density per layer, or a mapping from layer name to density \
        (missing layers are dense). ``None`` means fully dense.
    :return: Floating point operations per sample.

    Examples::
        >>> from acdckit.flops import ConvLayer, LayerManifest, LinearLayer, forward_flops
        >>> forward_flops(LayerManifest('fc', [LinearLayer('fc', 100, 50)]))
        10000.0
        >>> forward_flops(LayerManifest('conv', [ConvLayer('c', (3, 3), 64, 64, (56, 56))]), [0.5])
        115605504.0
    """
    values = _density_vector(m, densities)
    macs = np.array([layer.macs for layer in m.layers], dtype=np.float64)
    return float(FLOPS_PER_MAC * np.dot(macs, values))


def dense_forward_flops(m: LayerManifest) -> float:
    return forward_flops(m, None)


class DensityTrajectory:
    """
    Overview:
        Per-epoch, per-layer weight densities, sampled at the end of every epoch.
    """

    def __init__(self, m: LayerManifest, rows: Sequence[Densities]):
        self.__manifest = m
        self.__matrix = np.stack([_density_vector(m, row) for row in rows]) if len(rows) else np.zeros((0, len(m)))
        self.__matrix.setflags(write=False)

    @classmethod
    def constant(cls, m: LayerManifest, epochs: int, density: float = 1.0) -> 'DensityTrajectory':
        return cls(m, [[density] * len(m)] * epochs)

    @classmethod
    def from_schedule(cls, m: LayerManifest, schedule: PhaseSchedule,
                      compressed: Densities, decompressed: Densities = None) -> 'DensityTrajectory':
        """
        Overview:
            Trajectory with fixed densities in compressed epochs and in decompressed epochs.
        """
        return cls(m, [compressed if kind == PhaseKind.COMPRESSED else decompressed for kind in schedule.kinds()])

    @classmethod
    def from_metrics(cls, m: LayerManifest, metrics: Sequence) -> 'DensityTrajectory':
        """
        Overview:
            Trajectory from per-epoch training metrics. Items are metric objects or json mappings \
            with a ``segment_density`` mapping keyed by layer names.
        """
        rows = []
        for item in metrics:
            density = item['segment_density'] if isinstance(item, Mapping) else item.segment_density
            rows.append({name: value for name, value in density.items() if name in m.names})
        return cls(m, rows)

    @property
    def manifest(self) -> LayerManifest:
        return self.__manifest

    @property
    def matrix(self) -> np.ndarray:
        return self.__matrix

    @property
    def epochs(self) -> int:
        return self.__matrix.shape[0]

    def __getitem__(self, epoch: int) -> np.ndarray:
        return self.__matrix[epoch]

    def __len__(self):
        return self.epochs

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('manifest', lambda: self.__manifest.name),
                ('epochs', lambda: self.epochs),
            ]
        )


@dataclass
class FlopReport:
    """
    Overview:
        Cost summary of a training run.

        - ``forward``: dense forward cost ``F`` per sample.
        - ``backward``: dense backward cost ``2 F`` per sample.
        - ``per_phase``: training cost of every phase.
        - ``per_epoch_inference``: forward cost per sample at the end of every epoch.
        - ``per_epoch``: training cost of every epoch.
        - ``total``: training cost of the run.
        - ``dense_total``: training cost of fully dense training of equal length.
        - ``inference``: forward cost per sample of the final model.
    """
    forward: float
    backward: float
    total: float
    dense_total: float
    inference: float
    per_phase: List[dict] = field(default_factory=list)
    per_epoch_inference: List[float] = field(default_factory=list)
    per_epoch: List[float] = field(default_factory=list)

    @property
    def train_relative(self) -> float:
        return self.total / self.dense_total if self.dense_total else 0.0

    @property
    def inference_relative(self) -> float:
        return self.inference / self.forward if self.forward else 0.0

    def to_json(self) -> dict:
        return {
            'forward_flops': self.forward,
            'forward_gflops': self.forward / 1e9,
            'backward_flops': self.backward,
            'train_flops': self.total,
            'train_eflops': self.total / 1e18,
            'dense_train_flops': self.dense_total,
            'train_relative': self.train_relative,
            'inference_flops': self.inference,
            'inference_relative': self.inference_relative,
            'per_phase': [dict(item) for item in self.per_phase],
            'per_epoch_inference': list(self.per_epoch_inference),
            'per_epoch': list(self.per_epoch),
        }


def train_flops(m: LayerManifest, schedule: PhaseSchedule, traj: Optional[DensityTrajectory],
                samples_per_epoch: int) -> FlopReport:
    """
    Overview:
        Training cost of a run over ``schedule``.

    :param m: Layer manifest.
    :param schedule: Phase schedule.
    :param traj: Density trajectory covering every epoch of the schedule, ``None`` means fully dense.
    :param samples_per_epoch: Training samples per epoch.
    :return: Flop report.

    Examples::
        >>> from acdckit.acdc import build_schedule
        >>> from acdckit.flops import LayerManifest, LinearLayer, train_flops
        >>> m = LayerManifest('fc', [LinearLayer('fc', 100, 50)])
        >>> train_flops(m, build_schedule(2, 1, 0, 0, 0, 1), None, 1).total
        60000.0
    """
    if isinstance(samples_per_epoch, bool) or not isinstance(samples_per_epoch, int) or samples_per_epoch < 0:
        raise ValueError(f'Non-negative sample count expected but {samples_per_epoch!r} found.')
    if traj is None:
        traj = DensityTrajectory.constant(m, schedule.total_epochs)
    if traj.manifest != m:
        raise ValueError(f'Trajectory of manifest {m.name!r} expected but {traj.manifest.name!r} found.')
    if traj.epochs != schedule.total_epochs:
        raise ValueError(f'Densities of {schedule.total_epochs!r} epochs expected but {traj.epochs!r} found.')

    dense = dense_forward_flops(m)
    per_epoch_inference = [forward_flops(m, traj[epoch]) for epoch in range(traj.epochs)]
    per_phase, per_epoch, total = [], [], 0.0
    for phase in schedule:
        cost = 0.0
        for epoch in range(phase.start, phase.stop):
            f = per_epoch_inference[epoch]
            per_epoch.append((3.0 * f if phase.compressed else 2.0 * f + dense) * samples_per_epoch)
            cost += per_epoch[-1]
        per_phase.append({'kind': phase.kind.name.lower(), 'start': phase.start, 'stop': phase.stop, 'flops': cost})
        total += cost

    return FlopReport(
        forward=dense,
        backward=2.0 * dense,
        total=total,
        dense_total=3.0 * dense * samples_per_epoch * schedule.total_epochs,
        inference=per_epoch_inference[-1] if per_epoch_inference else dense,
        per_phase=per_phase,
        per_epoch_inference=per_epoch_inference,
        per_epoch=per_epoch,
    )
