"""
Overview:
    Alternating compressed/decompressed training of classification models.

    Compressed phases recompute the mask from the current weights at their entry, zero the pruned \
    weights and optimize only the active ones. Decompressed phases train all weights and start \
    from a zero momentum buffer. The loop ends on a compressed phase, so the final model is sparse, \
    and the best dense snapshot of the run is kept next to it.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from hbutils.model import get_repr_info

from .optimizer import OptimizerState, sgd_momentum_step
from .schedule import Phase, PhaseKind, PhaseSchedule, build_schedule
from ..data import Dataset
from ..diagnostics.masks import MaskHistory, mask_change
from ..iht import BatchSampler, BatchScheme
from ..numeric import ParamSet, SeededRng
from ..objective import LogisticMulti, Mlp
from ..sparsity import Mask, SparsityPattern, apply_pattern, sparsity_stats

__all__ = [
    'MissingEvalSplitError', 'MissingCheckpointError',
    'TrainConfig', 'EpochMetrics', 'StepEvent', 'DenseCheckpoint', 'TrainResult',
    'as_model', 'augment_noise',
    'acdc_train', 'dense_finetune', 'oneshot_prune_finetune',
]

_LOGGER = logging.getLogger(__name__)


class MissingEvalSplitError(ValueError):
    """
    Overview:
        Raised when best dense selection is requested without an evaluation split.
    """
    pass


class MissingCheckpointError(ValueError):
    """
    Overview:
        Raised when a dense checkpoint is needed but the run kept none.
    """
    pass


@dataclass
class TrainConfig:
    """
    Overview:
        Loop options of :func:`acdc_train`.

        - ``batch_size``: mini-batch size, batches walk a fresh shuffled partition every epoch.
        - ``select_best``: keep the best dense snapshot, requires an evaluation split.
        - ``reset_on_compression``: also zero the momentum buffer when a compressed phase starts.
        - ``augment_noise``: standard deviation of the Gaussian jitter added to every input batch.
        - ``check_invariants``: assert the mask invariants after every compressed step.
        - ``track_indices``: training samples whose predictions are kept after every epoch.
    """
    batch_size: int = 128
    select_best: bool = True
    reset_on_compression: bool = False
    augment_noise: float = 0.0
    check_invariants: bool = False
    track_indices: Optional[Sequence[int]] = None

    def __post_init__(self):
        if not isinstance(self.batch_size, int) or self.batch_size < 1:
            raise ValueError(f'Positive batch size expected but {self.batch_size!r} found.')
        if not self.augment_noise >= 0:
            raise ValueError(f'Non-negative noise scale expected but {self.augment_noise!r} found.')


@dataclass
class EpochMetrics:
    epoch: int
    phase: str
    lr: float
    train_loss: float
    train_accuracy: float
    eval_accuracy: Optional[float]
    prunable_sparsity: float
    overall_sparsity: float
    mask_id: Optional[str]
    mask_change: Optional[float] = None
    segment_density: Dict[str, float] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            'epoch': self.epoch,
            'phase': self.phase,
            'lr': self.lr,
            'train_loss': self.train_loss,
            'train_accuracy': self.train_accuracy,
            'eval_accuracy': self.eval_accuracy,
            'prunable_sparsity': self.prunable_sparsity,
            'overall_sparsity': self.overall_sparsity,
            'mask_id': self.mask_id,
            'mask_change': self.mask_change,
            'segment_density': dict(self.segment_density),
        }


@dataclass(frozen=True)
class StepEvent:
    """
    Overview:
        State right before one optimizer step, passed to the ``on_step`` hook of :func:`acdc_train`. \
        ``mask`` is ``None`` in decompressed phases.
    """
    epoch: int
    step: int
    phase: Phase
    theta: np.ndarray
    buffer: Optional[np.ndarray]
    mask: Optional[Mask]


@dataclass
class DenseCheckpoint:
    params: ParamSet
    epoch: int
    metric: float


class TrainResult:
    """
    Overview:
        Sparse model with its mask, best dense checkpoint and per-epoch metrics of one run.
    """

    def __init__(self, sparse: ParamSet, mask: Mask, best_dense: Optional[DenseCheckpoint],
                 metrics: List[EpochMetrics], mask_history: MaskHistory, schedule: PhaseSchedule,
                 pattern: SparsityPattern, tracked_predictions: Optional[np.ndarray] = None):
        self.__sparse = sparse
        self.__mask = mask
        self.__best_dense = best_dense
        self.__metrics = list(metrics)
        self.__mask_history = mask_history
        self.__schedule = schedule
        self.__pattern = pattern
        self.__tracked_predictions = tracked_predictions
        self.dense_finetuned: Optional[ParamSet] = None

    @property
    def sparse(self) -> ParamSet:
        return self.__sparse

    @property
    def mask(self) -> Mask:
        return self.__mask

    @property
    def best_dense(self) -> Optional[DenseCheckpoint]:
        return self.__best_dense

    @property
    def metrics(self) -> List[EpochMetrics]:
        return self.__metrics

    @property
    def mask_history(self) -> MaskHistory:
        return self.__mask_history

    @property
    def schedule(self) -> PhaseSchedule:
        return self.__schedule

    @property
    def pattern(self) -> SparsityPattern:
        return self.__pattern

    @property
    def tracked_predictions(self) -> Optional[np.ndarray]:
        """
        Predictions on the tracked samples, one row per epoch.
        """
        return self.__tracked_predictions

    @property
    def final(self) -> EpochMetrics:
        return self.__metrics[-1]

    def __repr__(self):
        return get_repr_info(
            cls=self.__class__,
            args=[
                ('epochs', lambda: len(self.__metrics)),
                ('sparsity', lambda: f'{self.final.prunable_sparsity:.4f}'),
                ('eval_accuracy', lambda: self.final.eval_accuracy,
                 lambda: self.final.eval_accuracy is not None),
                ('best_dense_epoch', lambda: self.__best_dense.epoch, lambda: self.__best_dense is not None),
            ]
        )


def as_model(model) -> Mlp:
    """
    Overview:
        Trainable model of ``model``. A :class:`LogisticMulti` objective is the single layer network \
        with the same parameter layout and penalty.
    """
    if isinstance(model, Mlp):
        return model
    elif isinstance(model, LogisticMulti):
        return Mlp([model.features, model.classes], l2=model.l2)
    else:
        raise TypeError(f'Mlp or LogisticMulti expected but {type(model).__name__!r} found.')


def augment_noise(X: np.ndarray, scale: float, rng: SeededRng) -> np.ndarray:
    """
    Overview:
        Gaussian jitter with standard deviation ``scale``, ``X`` itself when ``scale`` is ``0``.
    """
    if not scale:
        return X
    return X + rng.normal(X.shape, scale)


class _Loop:
    def __init__(self, model: Mlp, data: Dataset, opt: OptimizerState, config: TrainConfig, rng: SeededRng,
                 on_step: Optional[Callable[[StepEvent], None]]):
        self.model = model
        self.data = data
        self.opt = opt
        self.config = config
        self.sampler = BatchSampler(len(data), min(config.batch_size, len(data)),
                                    BatchScheme.SHUFFLED_PARTITION, rng.spawn(1))
        self.noise_rng = rng.spawn(2)
        self.on_step = on_step

    def run_epoch(self, theta: np.ndarray, epoch: int, lr_epoch: float, phase: Phase,
                  mask: Optional[Mask], active: Optional[np.ndarray], prunable: np.ndarray,
                  cardinality: Optional[int]):
        losses = []
        batches = self.sampler.epoch()
        for step, batch in enumerate(batches):
            self.opt.epoch = lr_epoch + step / len(batches)
            if self.on_step is not None:
                buffer = self.opt.buffer
                self.on_step(StepEvent(epoch, step, phase, theta.copy(),
                                       buffer.copy() if buffer is not None else None, mask))

            X = augment_noise(self.data.X[batch], self.config.augment_noise, self.noise_rng)
            loss, g = self.model.value_grad_flat(theta, X, self.data.y[batch])
            theta = sgd_momentum_step(theta, g, self.opt, active)
            losses.append(loss)

            if self.config.check_invariants and active is not None:
                values = theta[prunable]
                assert not np.any(values[~mask.bits]), \
                    f'Pruned weights revived at epoch {epoch!r}, step {step!r}.'
                assert mask.popcount == cardinality, \
                    f'Mask of cardinality {cardinality!r} expected but {mask.popcount!r} found.'
        return theta, float(np.mean(losses))


def _accuracy(model: Mlp, theta: np.ndarray, data: Optional[Dataset]) -> Optional[float]:
    if data is None or len(data) == 0:
        return None
    return float(np.mean(np.argmax(model.logits_flat(theta, data.X), axis=1) == data.y))


def acdc_train(model, data: Dataset, schedule: PhaseSchedule, opt: OptimizerState, pattern: SparsityPattern,
               rng: SeededRng, config: Optional[TrainConfig] = None, eval_data: Optional[Dataset] = None,
               params0: Optional[ParamSet] = None,
               on_step: Optional[Callable[[StepEvent], None]] = None) -> TrainResult:
    """
    Overview:
        Alternating compressed/decompressed training.

    :param model: :class:`Mlp` or :class:`LogisticMulti`.
    :param data: Training data.
    :param schedule: Phase schedule, the learning rate curve of ``opt`` runs over its whole length.
    :param opt: Optimizer state, updated in place.
    :param pattern: Sparsity pattern of compressed phases.
    :param rng: Random generator, fixes initialization, batches and input noise.
    :param config: Loop options, default is :class:`TrainConfig` with defaults.
    :param eval_data: Evaluation split, used for accuracies and the best dense selection.
    :param params0: Initial parameters, default is the model initialization from ``rng``.
    :param on_step: Hook called before every optimizer step.
    :return: Training result.
    :raises MissingEvalSplitError: When ``config.select_best`` is set but ``eval_data`` is absent.

    Examples::
        >>> import numpy as np
        >>> from acdckit.acdc import OptimizerState, TrainConfig, acdc_train, build_schedule
        >>> from acdckit.data import gaussian_blobs
        >>> from acdckit.numeric import SeededRng
        >>> from acdckit.objective import Mlp
        >>> from acdckit.sparsity import GlobalTopK
        >>> data = gaussian_blobs(4, 3, 60, 0.1, SeededRng(0))
        >>> result = acdc_train(Mlp([4, 8, 3]), data, build_schedule(6, 1, 1, 1, 2, 2), OptimizerState(0.1),
        ...                     GlobalTopK(fraction=0.25), SeededRng(1), TrainConfig(16, select_best=False))
        >>> result.mask.popcount
        14
    """
    model = as_model(model)
    config = config or TrainConfig()
    if config.select_best and (eval_data is None or len(eval_data) == 0):
        raise MissingEvalSplitError('Evaluation split expected for best dense selection but none found.')
    if len(data) == 0:
        raise ValueError('Non-empty training data expected but empty dataset found.')

    params = params0 if params0 is not None else model.init_params(rng.spawn(0))
    if not params.same_layout(model.template()):
        raise ValueError(f'Parameters with layout of {model!r} expected but {params!r} found.')
    pattern.validate(params)
    cardinality = pattern.cardinality(params)
    prunable = params.prunable_index
    track = np.asarray(config.track_indices, dtype=np.int64) if config.track_indices is not None else None

    loop = _Loop(model, data, opt, config, rng, on_step)
    theta = params.flat()
    history = MaskHistory()
    metrics: List[EpochMetrics] = []
    tracked: List[np.ndarray] = []
    best: Optional[DenseCheckpoint] = None
    mask, active, change = None, None, None

    for phase in schedule:
        if phase.compressed:
            previous = mask
            mask = apply_pattern(params.with_flat(theta), pattern)
            active = np.ones(theta.shape[0], dtype=bool)
            active[prunable] = mask.bits
            theta = np.where(active, theta, 0.0)
            history.append(phase.start, mask)
            change = mask_change(previous, mask) if previous is not None else None
            if config.reset_on_compression:
                opt.reset()
            _LOGGER.info('Compressed phase %s, mask %s with %d active weights.', phase, mask.digest(), mask.popcount)
        else:
            active, change = None, None
            opt.reset()
            _LOGGER.info('Decompressed phase %s, momentum reset.', phase)

        for epoch in range(phase.start, phase.stop):
            theta, loss = loop.run_epoch(theta, epoch, epoch, phase, mask if phase.compressed else None,
                                         active, prunable, cardinality)
            snapshot = params.with_flat(theta)
            stats = sparsity_stats(snapshot)
            record = EpochMetrics(
                epoch=epoch,
                phase=phase.kind.name.lower(),
                lr=opt.lr,
                train_loss=loss,
                train_accuracy=_accuracy(model, theta, data),
                eval_accuracy=_accuracy(model, theta, eval_data),
                prunable_sparsity=stats.prunable_sparsity,
                overall_sparsity=stats.overall_sparsity,
                mask_id=mask.digest() if phase.compressed else None,
                mask_change=change if epoch == phase.start else None,
                segment_density=stats.segment_density,
            )
            metrics.append(record)
            if track is not None:
                tracked.append(np.argmax(model.logits_flat(theta, data.X[track]), axis=1))
            _LOGGER.debug('Epoch %d (%s): loss %.6g, eval accuracy %s, sparsity %.4f.',
                          epoch, record.phase, loss, record.eval_accuracy, record.prunable_sparsity)

        if not phase.compressed and config.select_best:
            accuracy = metrics[-1].eval_accuracy
            if best is None or accuracy > best.metric:
                best = DenseCheckpoint(params.with_flat(theta), phase.stop - 1, accuracy)
                _LOGGER.info('Best dense checkpoint at epoch %d, eval accuracy %.4f.', best.epoch, accuracy)

    sparse = params.with_flat(theta)
    assert pattern.satisfied_by(sparse, mask), 'Final sparse model violates its pattern.'
    return TrainResult(
        sparse=sparse,
        mask=mask,
        best_dense=best,
        metrics=metrics,
        mask_history=history,
        schedule=schedule,
        pattern=pattern,
        tracked_predictions=np.stack(tracked) if track is not None else None,
    )


def dense_finetune(result: TrainResult, model, data: Dataset, epochs: int, opt: OptimizerState,
                   rng: Optional[SeededRng] = None, config: Optional[TrainConfig] = None) -> ParamSet:
    """
    Overview:
        Dense training from the best dense checkpoint of ``result``, in place of the final compressed \
        fine-tuning. The learning rate continues from epoch ``total - epochs`` of the run's curve.

    :param result: Training result with a dense checkpoint.
    :param model: Model of the run.
    :param data: Training data.
    :param epochs: Count of fine-tuning epochs, ``0`` returns the checkpoint itself.
    :param opt: Optimizer state, its momentum buffer is reset first.
    :param rng: Random generator of the batches.
    :param config: Loop options, only batch size and input noise are used.
    :return: Dense fine-tuned parameters, also stored as ``result.dense_finetuned``.
    :raises MissingCheckpointError: When the run kept no dense checkpoint.
    """
    if result.best_dense is None:
        raise MissingCheckpointError('Dense checkpoint expected for dense fine-tuning but none found.')
    if not isinstance(epochs, int) or epochs < 0:
        raise ValueError(f'Non-negative epoch count expected but {epochs!r} found.')
    params = result.best_dense.params
    if epochs == 0:
        result.dense_finetuned = params
        return params

    model = as_model(model)
    config = config or TrainConfig(select_best=False)
    loop = _Loop(model, data, opt, config, rng or SeededRng(0), None)
    offset = max(0, result.schedule.total_epochs - epochs)
    phase = Phase(PhaseKind.DECOMPRESSED, offset, offset + epochs)
    theta = params.flat()
    opt.reset()
    for i in range(epochs):
        theta, loss = loop.run_epoch(theta, offset + i, offset + i, phase, None, None, params.prunable_index, None)
        _LOGGER.debug('Dense fine-tuning epoch %d: loss %.6g.', i, loss)

    result.dense_finetuned = params.with_flat(theta)
    return result.dense_finetuned


def oneshot_prune_finetune(model, data: Dataset, total_epochs: int, opt: OptimizerState,
                           pattern: SparsityPattern, rng: SeededRng, config: Optional[TrainConfig] = None,
                           eval_data: Optional[Dataset] = None, dense_epochs: Optional[int] = None) -> TrainResult:
    """
    Overview:
        One-shot baseline at equal budget: dense training for ``dense_epochs`` (half of the budget by default), \
        one magnitude pruning, then sparse fine-tuning for the rest.
    """
    dense_epochs = total_epochs // 2 if dense_epochs is None else dense_epochs
    schedule = build_schedule(total_epochs, dense_epochs, 0, 0, 0, total_epochs - dense_epochs)
    return acdc_train(model, data, schedule, opt, pattern, rng, config, eval_data)
