"""
Overview:
    Experiment configuration files.

    A configuration is a json document with ``format_version``, ``task``, ``seeds``, ``out`` and \
    the sections used by the task. Validation collects the errors of every field before failing.
"""
import json
import os
from contextlib import contextmanager
from typing import Dict, List, Mapping, Optional, Sequence

import click
import numpy as np
from easydict import EasyDict
from packaging.version import InvalidVersion, Version

from ..acdc import LrSchedule, OptimizerState, PhaseSchedule, TrainConfig, build_schedule
from ..flops import BUILTIN_MANIFESTS
from ..iht import IhtConfig, PolishConfig
from ..numeric import ParamSet
from ..objective import Mlp
from ..sparsity import SparsityPattern, pattern_from_json

__all__ = [
    'CONFIG_FORMAT_VERSION', 'TASKS',
    'ConfigValidationError', 'ExperimentConfig',
    'validate_config', 'load_config', 'error_record',
]

CONFIG_FORMAT_VERSION = '1.0'
TASKS = ('generate', 'run-iht', 'train-acdc', 'flops', 'diagnose')

_IHT_KEYS = {
    'step_size', 'max_iters', 'stop_tol', 'mode', 'batch_size', 'batch_scheme', 'polish', 'safety',
    'divergence_factor', 'stop_window', 'smoothness_trials', 'power_steps', 'theory_multiplier', 'phased',
}
_TRAIN_KEYS = {
    'batch_size', 'select_best', 'reset_on_compression', 'augment_noise', 'check_invariants',
    'eval_fraction', 'corrupt_fraction', 'dense_finetune_epochs', 'baseline',
}
_SCHEDULE_KEYS = ('total', 'warmup', 'compressed', 'decompressed', 'final_decompressed', 'finetune')


def error_record(kind: str, message: str, fields: Optional[Mapping[str, str]] = None) -> dict:
    """
    Overview:
        Machine readable error record, written to stderr and to ``error.json``.
    """
    return {'error': kind, 'message': message, 'fields': dict(fields or {})}


class ConfigValidationError(click.ClickException):
    """
    Overview:
        Invalid configuration, ``fields`` maps every offending field to its message. Exits with status 2.
    """
    exit_code = 0x2

    def __init__(self, fields: Mapping[str, str], message: Optional[str] = None):
        self.fields = dict(fields)
        message = message or 'Invalid configuration: ' + '; '.join(f'{k}: {v}' for k, v in sorted(self.fields.items()))
        click.ClickException.__init__(self, message)

    @property
    def record(self) -> dict:
        return error_record('config_validation', self.message, self.fields)

    def show(self, file=None):
        click.echo(json.dumps(self.record), file=file, err=True)


def _message(err: Exception) -> str:
    if isinstance(err, KeyError) and err.args:
        return f'Missing key {err.args[0]!r}.'
    return str(err)


class _Errors:
    def __init__(self):
        self.fields: Dict[str, str] = {}

    @contextmanager
    def field(self, name: str):
        try:
            yield
        except (ValueError, TypeError, KeyError) as err:
            self.fields[name] = _message(err)

    def add(self, name: str, message: str):
        self.fields[name] = message


def _int(section: Mapping, key: str, minimum: int = 0, default=None) -> int:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise ValueError(f'Integer {key} no less than {minimum!r} expected but {value!r} found.')
    return value


def _real(section: Mapping, key: str, minimum: float = 0.0, default=None) -> float:
    value = section.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not value >= minimum:
        raise ValueError(f'Number {key} no less than {minimum!r} expected but {value!r} found.')
    return float(value)


def _check_unknown(section: Mapping, allowed: Sequence[str], name: str):
    unknown = sorted(set(section.keys()) - set(allowed))
    if unknown:
        raise ValueError(f'Unknown {name} fields {unknown!r}.')


class ExperimentConfig:
    """
    Overview:
        Validated experiment configuration. Raw sections are :class:`easydict.EasyDict` objects, \
        patterns, schedules and run options are built once during validation.
    """

    def __init__(self, data: Mapping, base_dir: str, pattern: Optional[SparsityPattern],
                 iht: Optional[IhtConfig], schedule: Optional[PhaseSchedule], train: Optional[TrainConfig]):
        self.__data = EasyDict(data)
        self.__base_dir = base_dir
        self.__pattern = pattern
        self.__iht = iht
        self.__schedule = schedule
        self.__train = train

    @property
    def raw(self) -> EasyDict:
        return self.__data

    @property
    def format_version(self) -> str:
        return self.__data.format_version

    @property
    def task(self) -> str:
        return self.__data.task

    @property
    def seeds(self) -> List[int]:
        return list(self.__data.seeds)

    @property
    def out(self) -> str:
        return self.__data.out

    @property
    def base_dir(self) -> str:
        return self.__base_dir

    def section(self, name: str) -> EasyDict:
        return EasyDict(self.__data.get(name) or {})

    @property
    def pattern(self) -> Optional[SparsityPattern]:
        return self.__pattern

    @property
    def iht(self) -> Optional[IhtConfig]:
        return self.__iht

    @property
    def schedule(self) -> Optional[PhaseSchedule]:
        return self.__schedule

    @property
    def train(self) -> Optional[TrainConfig]:
        return self.__train

    def resolve(self, path: str) -> str:
        """
        Overview:
            Path relative to the configuration file.
        """
        return path if os.path.isabs(path) else os.path.join(self.__base_dir, path)

    def make_optimizer(self) -> OptimizerState:
        """
        Overview:
            Fresh optimizer state, the default recipe when the ``optimizer`` section is absent.
        """
        section = self.section('optimizer')
        batch_size = self.__train.batch_size if self.__train is not None else 256
        if not section:
            return OptimizerState.default(self.__schedule.total_epochs, batch_size)
        lr = section.get('lr', {})
        if isinstance(lr, Mapping):
            lr = dict(lr)
            if lr.get('kind', 'cosine') == 'cosine':
                lr.setdefault('total_epochs', self.__schedule.total_epochs)
            lr = LrSchedule(**lr)
        return OptimizerState(lr, section.get('momentum', 0.875), section.get('weight_decay', 0.0))

    def to_json(self) -> dict:
        return json.loads(json.dumps(self.__data))


def _validate_dataset(section: Mapping, errors: _Errors, base_dir: str, allowed_kinds: Sequence[str]):
    if not isinstance(section, Mapping):
        errors.add('dataset', f'Dataset section expected but {section!r} found.')
        return
    if 'path' in section:
        with errors.field('dataset.path'):
            path = section['path']
            full = path if os.path.isabs(path) else os.path.join(base_dir, path)
            if not os.path.isfile(full):
                raise ValueError(f'Existing file expected but {path!r} not found.')
        return

    kind = section.get('kind')
    if kind not in allowed_kinds:
        errors.add('dataset.kind', f'Dataset kind in {list(allowed_kinds)!r} or a path expected but {kind!r} found.')
    elif kind == 'regression':
        with errors.field('dataset'):
            _check_unknown(section, ['kind', 'dim', 'samples', 'k_star', 'noise_sigma', 'scale'], 'regression dataset')
        dim = None
        with errors.field('dataset.dim'):
            dim = _int(section, 'dim', 1)
        with errors.field('dataset.samples'):
            _int(section, 'samples', 1)
        with errors.field('dataset.k_star'):
            k_star = _int(section, 'k_star', 1)
            if dim is not None and k_star > dim:
                raise ValueError(f'Sparsity k_star no more than dim {dim!r} expected but {k_star!r} found.')
        with errors.field('dataset.noise_sigma'):
            _real(section, 'noise_sigma', 0.0, default=0.0)
    else:
        with errors.field('dataset'):
            _check_unknown(section, ['kind', 'features', 'classes', 'samples', 'spread', 'center_scale'],
                           'classification dataset')
        with errors.field('dataset.features'):
            _int(section, 'features', 1)
        with errors.field('dataset.classes'):
            _int(section, 'classes', 2)
        with errors.field('dataset.samples'):
            _int(section, 'samples', 2)
        with errors.field('dataset.spread'):
            _real(section, 'spread', 0.0)
        with errors.field('dataset.center_scale'):
            if _real(section, 'center_scale', 0.0, default=1.0) <= 0:
                raise ValueError('Positive center_scale expected but 0 found.')


def _build_iht(section: Mapping, pattern: SparsityPattern, errors: _Errors) -> Optional[IhtConfig]:
    with errors.field('iht'):
        _check_unknown(section, _IHT_KEYS, 'iht')
        options = {key: value for key, value in section.items() if key not in ('polish', 'phased')}
        polish = PolishConfig(**section['polish']) if section.get('polish') else None
        phased = section.get('phased')
        if phased is not None:
            _check_unknown(phased, ['rounds', 'dense_passes', 'sparse_passes'], 'iht.phased')
            _int(phased, 'rounds', 1)
            _int(phased, 'dense_passes', 1)
            _int(phased, 'sparse_passes', 0, default=0)
        return IhtConfig(pattern, polish=polish, **options)
    return None


def _build_schedule(section: Mapping, errors: _Errors) -> Optional[PhaseSchedule]:
    if not isinstance(section, Mapping) or not section:
        errors.add('schedule', 'Schedule section expected but none found.')
        return None
    with errors.field('schedule'):
        _check_unknown(section, list(_SCHEDULE_KEYS) + ['absorb_residual'], 'schedule')
    values, okay = {}, True
    for key in _SCHEDULE_KEYS:
        with errors.field(f'schedule.{key}'):
            values[key] = _int(section, key, 0, default=0 if key in ('decompressed', 'final_decompressed') else None)
            continue
        okay = False
    if not okay:
        return None
    with errors.field('schedule'):
        return build_schedule(values['total'], values['warmup'], values['compressed'], values['decompressed'],
                              values['final_decompressed'], values['finetune'],
                              absorb_residual=bool(section.get('absorb_residual', False)))
    return None


def _validate_optimizer(section: Mapping, schedule: Optional[PhaseSchedule], errors: _Errors):
    with errors.field('optimizer'):
        _check_unknown(section, ['lr', 'momentum', 'weight_decay'], 'optimizer')
        lr = section.get('lr', {})
        if isinstance(lr, Mapping):
            lr = dict(lr)
            if lr.get('kind', 'cosine') == 'cosine' and schedule is not None:
                lr.setdefault('total_epochs', schedule.total_epochs)
            lr = LrSchedule(**lr)
        OptimizerState(lr, section.get('momentum', 0.875), section.get('weight_decay', 0.0))


def _build_train(section: Mapping, errors: _Errors) -> Optional[TrainConfig]:
    with errors.field('train'):
        _check_unknown(section, _TRAIN_KEYS, 'train')
    with errors.field('train.eval_fraction'):
        fraction = _real(section, 'eval_fraction', 0.0, default=0.2)
        if fraction >= 1.0:
            raise ValueError(f'Evaluation fraction below 1 expected but {fraction!r} found.')
    with errors.field('train.corrupt_fraction'):
        fraction = _real(section, 'corrupt_fraction', 0.0, default=0.0)
        if fraction >= 1.0:
            raise ValueError(f'Corrupted fraction below 1 expected but {fraction!r} found.')
    with errors.field('train.dense_finetune_epochs'):
        _int(section, 'dense_finetune_epochs', 0, default=0)
    with errors.field('train'):
        select_best = section.get('select_best', section.get('eval_fraction', 0.2) > 0)
        if select_best and not section.get('eval_fraction', 0.2) > 0:
            raise ValueError('Positive eval_fraction expected when select_best is set but 0 found.')
        return TrainConfig(
            batch_size=section.get('batch_size', 128),
            select_best=select_best,
            reset_on_compression=bool(section.get('reset_on_compression', False)),
            augment_noise=section.get('augment_noise', 0.0),
            check_invariants=bool(section.get('check_invariants', False)),
        )
    return None


def _validate_objective(section: Mapping, errors: _Errors):
    kind = section.get('kind', 'mlp')
    if kind not in ('mlp', 'logistic'):
        errors.add('objective.kind', f'Objective kind in [\'mlp\', \'logistic\'] expected but {kind!r} found.')
        return
    with errors.field('objective'):
        _check_unknown(section, ['kind', 'hidden', 'l2'], 'objective')
    with errors.field('objective.l2'):
        _real(section, 'l2', 0.0, default=0.0)
    if kind == 'mlp':
        with errors.field('objective.hidden'):
            hidden = section.get('hidden', [64])
            if not isinstance(hidden, list) or any(isinstance(w, bool) or not isinstance(w, int) or w < 1
                                                   for w in hidden):
                raise ValueError(f'List of positive hidden widths expected but {hidden!r} found.')


def _parameter_template(task: str, data: Mapping) -> Optional[ParamSet]:
    dataset, objective = data.get('dataset'), data.get('objective') or {}
    if not isinstance(dataset, Mapping) or 'path' in dataset:
        return None
    try:
        if task == 'run-iht':
            return ParamSet.from_vector(np.zeros(dataset['dim']))
        hidden = objective.get('hidden', [64]) if objective.get('kind', 'mlp') == 'mlp' else []
        return Mlp([dataset['features'], *hidden, dataset['classes']]).template()
    except (KeyError, TypeError, ValueError):
        return None


def _validate_flops(section: Mapping, errors: _Errors, base_dir: str):
    with errors.field('flops'):
        _check_unknown(section, ['manifest', 'epochs', 'samples_per_epoch', 'density', 'decompressed_density'],
                       'flops')
    with errors.field('flops.manifest'):
        manifest = section['manifest']
        if manifest not in BUILTIN_MANIFESTS:
            full = manifest if os.path.isabs(manifest) else os.path.join(base_dir, manifest)
            if not os.path.isfile(full):
                raise ValueError(f'Manifest in {list(BUILTIN_MANIFESTS)!r} or an existing file expected '
                                 f'but {manifest!r} found.')
    with errors.field('flops.epochs'):
        _int(section, 'epochs', 2, default=100)
    with errors.field('flops.samples_per_epoch'):
        _int(section, 'samples_per_epoch', 0, default=1281167)
    for key in ('density', 'decompressed_density'):
        with errors.field(f'flops.{key}'):
            if _real(section, key, 0.0, default=1.0) > 1.0:
                raise ValueError(f'Density in [0, 1] expected but {section[key]!r} found.')


def validate_config(data: Mapping, base_dir: str = '.') -> ExperimentConfig:
    """
    Overview:
        Validate a configuration mapping.

    :param data: Configuration.
    :param base_dir: Directory relative paths are resolved against.
    :return: Validated configuration.
    :raises ConfigValidationError: With every offending field.
    """
    errors = _Errors()
    if not isinstance(data, Mapping):
        raise ConfigValidationError({'': f'Json object expected but {type(data).__name__!r} found.'})
    data = dict(data)

    with errors.field('format_version'):
        try:
            version = Version(str(data['format_version']))
        except InvalidVersion:
            raise ValueError(f'Version string expected but {data["format_version"]!r} found.')
        if version.major != Version(CONFIG_FORMAT_VERSION).major:
            raise ValueError(f'Format version 1.x expected but {data["format_version"]!r} found.')

    task = data.get('task')
    if task not in TASKS:
        errors.add('task', f'Task in {list(TASKS)!r} expected but {task!r} found.')
    with errors.field('seeds'):
        seeds = data.setdefault('seeds', [0])
        if not isinstance(seeds, list) or not seeds or \
                any(isinstance(s, bool) or not isinstance(s, int) or s < 0 for s in seeds):
            raise ValueError(f'Non-empty list of non-negative integer seeds expected but {seeds!r} found.')
        if len(set(seeds)) != len(seeds):
            raise ValueError(f'Distinct seeds expected but {seeds!r} found.')
    with errors.field('out'):
        out = data.setdefault('out', 'output')
        if not isinstance(out, str) or not out:
            raise ValueError(f'Output directory path expected but {out!r} found.')

    pattern, iht, schedule, train = None, None, None, None
    if task in ('generate', 'run-iht', 'train-acdc'):
        kinds = ['regression', 'classification'] if task == 'generate' else \
            (['regression'] if task == 'run-iht' else ['classification'])
        _validate_dataset(data.get('dataset'), errors, base_dir, kinds)
        if task == 'generate' and isinstance(data.get('dataset'), Mapping) and 'path' in data['dataset']:
            errors.add('dataset.path', 'Generator spec expected but dataset path found.')
    if task in ('run-iht', 'train-acdc'):
        with errors.field('pattern'):
            pattern = pattern_from_json(data.get('pattern'))
    if task == 'run-iht' and pattern is not None:
        iht = _build_iht(data.get('iht') or {}, pattern, errors)
    if task == 'train-acdc':
        _validate_objective(data.get('objective') or {}, errors)
        schedule = _build_schedule(data.get('schedule'), errors)
        train = _build_train(data.get('train') or {}, errors)
        if data.get('optimizer'):
            _validate_optimizer(data['optimizer'], schedule, errors)
    if pattern is not None and not any(name.split('.')[0] in ('pattern', 'dataset', 'objective')
                                       for name in errors.fields):
        template = _parameter_template(task, data)
        if template is not None:
            with errors.field('pattern'):
                pattern.validate(template)
    if task == 'flops':
        _validate_flops(data.get('flops') or {}, errors, base_dir)
        if data.get('schedule'):
            schedule = _build_schedule(data['schedule'], errors)
    if task == 'diagnose':
        with errors.field('diagnose.run_dir'):
            run_dir = (data.get('diagnose') or {})['run_dir']
            full = run_dir if os.path.isabs(run_dir) else os.path.join(base_dir, run_dir)
            if not os.path.isdir(full):
                raise ValueError(f'Existing run directory expected but {run_dir!r} not found.')

    if errors.fields:
        raise ConfigValidationError(errors.fields)
    return ExperimentConfig(data, base_dir, pattern, iht, schedule, train)


def load_config(path: str, seeds: Optional[Sequence[int]] = None, out: Optional[str] = None,
                task: Optional[str] = None) -> ExperimentConfig:
    """
    Overview:
        Load and validate a configuration file, with optional seed and output overrides.

    :param path: Json configuration file.
    :param seeds: Seeds replacing the configured ones.
    :param out: Output directory replacing the configured one.
    :param task: Required task, filled in when the file names none.
    :return: Validated configuration.
    :raises ConfigValidationError: With every offending field.
    """
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except (OSError, ValueError) as err:
        raise ConfigValidationError({'config': f'Readable json file expected but {err}.'})
    if isinstance(data, dict):
        if seeds:
            data['seeds'] = list(seeds)
        if out is not None:
            data['out'] = out
        if task is not None:
            data.setdefault('task', task)
            if data['task'] != task:
                raise ConfigValidationError({'task': f'Task {task!r} expected but {data["task"]!r} found.'})
    return validate_config(data, os.path.dirname(os.path.abspath(path)))
