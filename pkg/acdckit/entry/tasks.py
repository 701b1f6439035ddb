"""
Overview:
    Task execution. Every seed writes its artifacts into ``<out>/seed-<seed>/``, the summary \
    with medians across seeds is written to ``<out>/summary.json`` after all seeds completed.
"""
import csv
import dataclasses
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np
from tqdm import tqdm

from .config import ExperimentConfig, validate_config
from .metrics import MetricsRecord, MetricsWriter, check_summary, read_metrics, summarize
from ..acdc import PhaseKind, acdc_train, as_model, build_schedule, dense_finetune, load_checkpoint, \
    oneshot_prune_finetune, save_checkpoint
from ..data import Dataset, export_csv, gaussian_blobs, ingest_csv
from ..diagnostics import BoundModel, CorruptionRecord, MaskHistory, agreement, corrupt_labels, dead_weights, \
    memorization_track
from ..flops import BUILTIN_MANIFESTS, DensityTrajectory, LayerManifest, load_builtin_manifest, \
    manifest_for_mlp, train_flops
from ..iht import PlantedProblem, contraction_rate, geometric_mean_rate, planted_problem, run_iht, run_phased_iht
from ..numeric import ParamSet, SeededRng
from ..objective import LogisticMulti, Mlp
from ..sparsity import Mask

__all__ = [
    'seed_dir', 'run_task', 'run_seed',
    'generate_seed', 'run_iht_seed', 'train_acdc_seed',
    'flops_task', 'diagnose_task', 'report_task',
]

_LOGGER = logging.getLogger(__name__)


def seed_dir(out: str, seed: int) -> str:
    return os.path.join(out, f'seed-{seed}')


def _write_json(path: str, data):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True)


def _read_json(path: str):
    with open(path, 'r') as f:
        return json.load(f)


def generate_seed(cfg: ExperimentConfig, seed: int) -> Dict[str, float]:
    """
    Overview:
        Generate the dataset of one seed with its provenance sidecar.
    """
    spec = cfg.section('dataset')
    directory = seed_dir(cfg.out, seed)
    os.makedirs(directory, exist_ok=True)
    rng = SeededRng(seed)
    if spec.kind == 'regression':
        problem = planted_problem(spec.dim, spec.samples, spec.k_star, spec.get('noise_sigma', 0.0), rng,
                                  spec.get('scale'))
        problem.save(os.path.join(directory, 'planted.json'))
        files = ['planted.json']
        values = {
            'samples': problem.samples,
            'residual': float(np.linalg.norm(problem.b - problem.A @ problem.theta_star)),
        }
    else:
        data = gaussian_blobs(spec.features, spec.classes, spec.samples, spec.spread, rng,
                              spec.get('center_scale', 1.0))
        export_csv(data, os.path.join(directory, 'dataset.csv'))
        files = ['dataset.csv']
        values = {'samples': len(data)}

    _write_json(os.path.join(directory, 'provenance.json'), {
        'task': 'generate',
        'seed': seed,
        'rng': SeededRng(seed).state_dict(),
        'dataset': dict(spec),
        'files': files,
    })
    return values


def _planted(cfg: ExperimentConfig, rng: SeededRng) -> PlantedProblem:
    spec = cfg.section('dataset')
    if 'path' in spec:
        return PlantedProblem.load(cfg.resolve(spec.path))
    return planted_problem(spec.dim, spec.samples, spec.k_star, spec.get('noise_sigma', 0.0), rng, spec.get('scale'))


def run_iht_seed(cfg: ExperimentConfig, seed: int) -> Dict[str, float]:
    """
    Overview:
        Hard thresholding on the planted problem of one seed. Every iteration is one metrics record.
    """
    rng = SeededRng(seed)
    problem = _planted(cfg, rng.spawn(0))
    obj = problem.objective()
    f_star = problem.reference_value()
    phased = cfg.section('iht').get('phased')
    if phased:
        trajectory = run_phased_iht(obj, cfg.iht, phased['rounds'], phased['dense_passes'],
                                    phased.get('sparse_passes', 0), rng=rng.spawn(1), theta_star=problem.theta_star)
    else:
        trajectory = run_iht(obj, cfg.iht, rng=rng.spawn(1), theta_star=problem.theta_star,
                             f_star=f_star, k_star=problem.k_star)

    try:
        ratios = contraction_rate(trajectory, f_star)
    except ValueError as err:
        _LOGGER.warning('No contraction rates for seed %d: %s', seed, err)
        ratios = None

    directory = seed_dir(cfg.out, seed)
    norm = float(np.linalg.norm(problem.theta_star))
    with MetricsWriter(os.path.join(directory, 'metrics.jsonl'), cfg.task, seed) as writer:
        for index, record in enumerate(trajectory):
            writer.write(record.iteration, {
                'loss': record.f_value,
                'f_minus_fstar': record.f_value - f_star,
                'grad_norm': record.grad_norm,
                'distance': record.distance,
                'relative_error': record.distance / norm if record.distance is not None else None,
                'contraction': float(ratios[index - 1]) if ratios is not None and index > 0 else None,
                **record.extras,
            })

    theta = trajectory.meta['theta']
    mask = Mask.from_nonzero(theta)
    save_checkpoint(os.path.join(directory, 'theta.json'), ParamSet.from_vector(theta), mask,
                    epoch=len(trajectory) - 1, rng=rng)
    meta = {key: value for key, value in trajectory.meta.items() if key != 'theta'}
    _write_json(os.path.join(directory, 'run.json'), {'seed': seed, 'meta': meta, 'f_star': f_star})

    values = {
        'iterations': float(len(trajectory) - 1),
        'support_recovered': float(problem.support_recovered(theta)),
    }
    if ratios is not None and ratios.size > 0:
        values['contraction_rate'] = geometric_mean_rate(ratios)
    for key in ('step_size', 'beta_hat', 'alpha_hat', 'kappa_hat'):
        if isinstance(meta.get(key), (int, float)):
            values[key] = float(meta[key])
    return values


def _classification_data(cfg: ExperimentConfig, rng: SeededRng) -> Dataset:
    spec = cfg.section('dataset')
    if 'path' in spec:
        return ingest_csv(cfg.resolve(spec.path), spec.get('label_column', 'label'))
    return gaussian_blobs(spec.features, spec.classes, spec.samples, spec.spread, rng,
                          spec.get('center_scale', 1.0))


def _model(cfg: ExperimentConfig, data: Dataset) -> Mlp:
    spec = cfg.section('objective')
    if spec.get('kind', 'mlp') == 'logistic':
        return as_model(LogisticMulti(data.X, data.y, data.classes, spec.get('l2', 0.0)))
    return Mlp([data.features, *spec.get('hidden', [64]), data.classes], spec.get('l2', 0.0))


def train_acdc_seed(cfg: ExperimentConfig, seed: int) -> Dict[str, float]:
    """
    Overview:
        Alternating compressed/decompressed training of one seed, with optional label corruption, \
        one-shot baseline and dense fine-tuning. Every epoch is one metrics record.
    """
    rng = SeededRng(seed)
    train_spec = cfg.section('train')
    data = _classification_data(cfg, rng.spawn(0))
    eval_fraction = train_spec.get('eval_fraction', 0.2)
    if eval_fraction > 0:
        train, eval_data = data.split(eval_fraction, rng.spawn(1))
    else:
        train, eval_data = data, None

    train_cfg = cfg.train
    record: Optional[CorruptionRecord] = None
    corrupt_fraction = train_spec.get('corrupt_fraction', 0.0)
    if corrupt_fraction > 0:
        train, record = corrupt_labels(train, int(round(corrupt_fraction * len(train))), train.classes,
                                       rng.spawn(2))
        train_cfg = dataclasses.replace(train_cfg, track_indices=list(record.indices))

    model = _model(cfg, train)
    opt = cfg.make_optimizer()
    result = acdc_train(model, train, cfg.schedule, opt, cfg.pattern, rng.spawn(3), train_cfg, eval_data)

    manifest = manifest_for_mlp(model.widths)
    costs = train_flops(manifest, cfg.schedule, DensityTrajectory.from_metrics(manifest, result.metrics),
                        len(train))
    directory = seed_dir(cfg.out, seed)
    with MetricsWriter(os.path.join(directory, 'metrics.jsonl'), cfg.task, seed) as writer:
        cumulative = 0.0
        for metrics, cost in zip(result.metrics, costs.per_epoch):
            cumulative += cost
            writer.write(metrics.epoch, {
                'loss': metrics.train_loss,
                'train_accuracy': metrics.train_accuracy,
                'accuracy': metrics.eval_accuracy,
                'sparsity': metrics.prunable_sparsity,
                'overall_sparsity': metrics.overall_sparsity,
                'lr': metrics.lr,
                'mask_change': metrics.mask_change,
                'flops_cum': cumulative,
            })

    total = cfg.schedule.total_epochs
    save_checkpoint(os.path.join(directory, 'sparse.json'), result.sparse, result.mask, cfg.schedule, opt,
                    epoch=total - 1, rng=rng)
    _write_json(os.path.join(directory, 'masks.json'), result.mask_history.to_json())
    _write_json(os.path.join(directory, 'run.json'), {
        'seed': seed,
        'widths': list(model.widths),
        'l2': model.l2,
        'pattern': cfg.pattern.to_json(),
        'metrics': [item.to_json() for item in result.metrics],
        'flops': costs.to_json(),
    })
    if eval_data is not None:
        _write_json(os.path.join(directory, 'eval.json'), {
            'X': eval_data.X.tolist(), 'y': eval_data.y.tolist(), 'classes': eval_data.classes,
        })

    values = {
        'sparse_accuracy': result.final.eval_accuracy,
        'sparsity': result.final.prunable_sparsity,
        'train_flops_relative': costs.train_relative,
        'inference_flops_relative': costs.inference_relative,
    }
    if result.best_dense is not None:
        save_checkpoint(os.path.join(directory, 'dense.json'), result.best_dense.params,
                        epoch=result.best_dense.epoch, rng=rng)
        values['dense_accuracy'] = result.best_dense.metric
    if record is not None:
        _write_json(os.path.join(directory, 'corruption.json'), record.to_json())
        _write_json(os.path.join(directory, 'tracked.json'), result.tracked_predictions.tolist())

    finetune_epochs = train_spec.get('dense_finetune_epochs', 0)
    if finetune_epochs and result.best_dense is not None:
        params = dense_finetune(result, model, train, finetune_epochs, cfg.make_optimizer(), rng.spawn(4), train_cfg)
        save_checkpoint(os.path.join(directory, 'dense_finetuned.json'), params, epoch=total - 1, rng=rng)
        if eval_data is not None:
            values['dense_finetuned_accuracy'] = model.accuracy(params, eval_data)

    if train_spec.get('baseline', False):
        baseline = oneshot_prune_finetune(
            model, train, total, cfg.make_optimizer(), cfg.pattern, rng.spawn(3),
            dataclasses.replace(train_cfg, select_best=False, track_indices=None), eval_data,
        )
        values['oneshot_accuracy'] = baseline.final.eval_accuracy

    return {key: value for key, value in values.items() if value is not None}


_SEED_TASKS: Mapping[str, Callable[[ExperimentConfig, int], Dict[str, float]]] = {
    'generate': generate_seed,
    'run-iht': run_iht_seed,
    'train-acdc': train_acdc_seed,
}


def run_seed(data: Mapping, base_dir: str, seed: int) -> Tuple[int, Dict[str, float]]:
    """
    Overview:
        Run one seed of a configuration given as json, used by worker processes.
    """
    cfg = validate_config(data, base_dir)
    return seed, _SEED_TASKS[cfg.task](cfg, seed)


def _run_seeds(cfg: ExperimentConfig, jobs: int) -> Dict[int, Dict[str, float]]:
    seeds = cfg.seeds
    results = {}
    if jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(seeds))) as executor:
            futures = [executor.submit(run_seed, cfg.to_json(), cfg.base_dir, seed) for seed in seeds]
            for future in tqdm(futures, desc=cfg.task, disable=None):
                seed, values = future.result()
                results[seed] = values
    else:
        for seed in tqdm(seeds, desc=cfg.task, disable=None):
            _LOGGER.info('Running %s with seed %d.', cfg.task, seed)
            results[seed] = _SEED_TASKS[cfg.task](cfg, seed)
    return results


def flops_task(cfg: ExperimentConfig) -> dict:
    """
    Overview:
        Inference and training cost of a manifest. Without a schedule the run is dense for all \
        but its last epoch, ``density`` applies to compressed epochs and ``decompressed_density`` \
        to decompressed ones.
    """
    spec = cfg.section('flops')
    if spec.manifest in BUILTIN_MANIFESTS:
        manifest = load_builtin_manifest(spec.manifest)
    else:
        manifest = LayerManifest.load(cfg.resolve(spec.manifest))
    epochs = spec.get('epochs', 100)
    schedule = cfg.schedule or build_schedule(epochs, epochs - 1, 0, 0, 0, 1)
    trajectory = DensityTrajectory.from_schedule(
        manifest, schedule,
        [spec.get('density', 1.0)] * len(manifest),
        [spec.get('decompressed_density', 1.0)] * len(manifest),
    )
    report = train_flops(manifest, schedule, trajectory, spec.get('samples_per_epoch', 1281167))
    summary = {
        'task': cfg.task,
        'manifest': manifest.name,
        'layers': len(manifest),
        'macs': manifest.macs,
        'epochs': schedule.total_epochs,
        'samples_per_epoch': spec.get('samples_per_epoch', 1281167),
        **report.to_json(),
    }
    _LOGGER.info('Manifest %s: %.4g GFLOPs forward, %.4g EFLOPs training.',
                 manifest.name, summary['forward_gflops'], summary['train_eflops'])
    return summary


def _seed_dirs(run_dir: str) -> List[Tuple[int, str]]:
    items = []
    for name in os.listdir(run_dir):
        path = os.path.join(run_dir, name)
        if name.startswith('seed-') and name[5:].isdigit() and os.path.isdir(path):
            items.append((int(name[5:]), path))
    return sorted(items)


def _final_compressed_epochs(directory: str) -> List[int]:
    schedule = load_checkpoint(os.path.join(directory, 'sparse.json')).schedule
    if schedule is None:
        return []
    last = schedule.ranges(PhaseKind.COMPRESSED)[-1]
    return list(range(last[0], last[1]))


def _diagnose_seed(directory: str) -> Tuple[Dict[str, float], List[dict]]:
    run = _read_json(os.path.join(directory, 'run.json'))
    model = Mlp(run['widths'], run.get('l2', 0.0))
    sparse = load_checkpoint(os.path.join(directory, 'sparse.json')).params
    values = {'dead_weights_sparse': dead_weights(sparse)}
    result = {'dead_weights': {'sparse': values['dead_weights_sparse']}}

    dense_path = os.path.join(directory, 'dense.json')
    eval_path = os.path.join(directory, 'eval.json')
    if os.path.exists(dense_path):
        dense = load_checkpoint(dense_path).params
        values['dead_weights_dense'] = dead_weights(dense)
        result['dead_weights']['dense'] = values['dead_weights_dense']
        if os.path.exists(eval_path):
            raw = _read_json(eval_path)
            eval_data = Dataset(np.asarray(raw['X'], dtype=np.float64).reshape(len(raw['y']), -1),
                                raw['y'], raw['classes'])
            report = agreement(BoundModel(model, dense), BoundModel(model, sparse), eval_data)
            result['agreement'] = report.to_json()
            values['top1_agreement'] = report.top1_agreement
            values['mean_cross_entropy'] = report.mean_cross_entropy

    history = MaskHistory.from_json(_read_json(os.path.join(directory, 'masks.json')))
    result['mask_change'] = {
        'epochs': history.epochs,
        'change': history.changes(),
        'symmetric': history.changes(symmetric=True),
    }
    if len(history) > 1:
        values['final_mask_change'] = history.changes()[-1]

    rows = []
    corruption_path = os.path.join(directory, 'corruption.json')
    if os.path.exists(corruption_path):
        record = CorruptionRecord.from_json(_read_json(corruption_path))
        tracked = _read_json(os.path.join(directory, 'tracked.json'))
        memorization = memorization_track(tracked, record)
        result['memorization'] = memorization.to_json()
        rows = memorization.rows()
        final = set(_final_compressed_epochs(directory))
        selected = [row for row in rows if row['epoch'] in final]
        if selected:
            values['final_acc_true'] = float(np.mean([row['acc_true'] for row in selected]))
            values['final_acc_corrupted'] = float(np.mean([row['acc_corrupted'] for row in selected]))

    _write_json(os.path.join(directory, 'diagnostics.json'), result)
    return values, rows


def diagnose_task(cfg: ExperimentConfig) -> dict:
    """
    Overview:
        Diagnostics of a finished ``train-acdc`` output directory: dense/sparse agreement, dead weights, \
        mask changes and memorization series of every seed.
    """
    run_dir = cfg.resolve(cfg.section('diagnose').run_dir)
    seeds = _seed_dirs(run_dir)
    if not seeds:
        raise FileNotFoundError(f'Seed directories expected in {run_dir!r} but none found.')

    per_seed, rows = {}, []
    for seed, directory in tqdm(seeds, desc=cfg.task, disable=None):
        values, memorization = _diagnose_seed(directory)
        per_seed[seed] = values
        rows.extend({'seed': seed, **row} for row in memorization)

    os.makedirs(cfg.out, exist_ok=True)
    if rows:
        with open(os.path.join(cfg.out, 'memorization.csv'), 'w', newline='') as f:
            writer = csv.DictWriter(f, ['seed', 'epoch', 'acc_corrupted', 'acc_true'], lineterminator='\n')
            writer.writeheader()
            writer.writerows(rows)
    summary = summarize(cfg.task, {seed: [] for seed in per_seed}, per_seed)
    summary['run_dir'] = run_dir
    _write_json(os.path.join(cfg.out, 'diagnostics.json'), {str(seed): values for seed, values in per_seed.items()})
    return summary


def run_task(cfg: ExperimentConfig, jobs: int = 1) -> dict:
    """
    Overview:
        Execute the task of ``cfg`` over all its seeds and write ``summary.json``.

    :param cfg: Validated configuration.
    :param jobs: Count of worker processes for seeds.
    :return: Summary.
    :raises DivergenceError: When a hard thresholding run diverges.
    """
    os.makedirs(cfg.out, exist_ok=True)
    _write_json(os.path.join(cfg.out, 'config.json'), cfg.to_json())
    if cfg.task == 'flops':
        summary = flops_task(cfg)
    elif cfg.task == 'diagnose':
        summary = diagnose_task(cfg)
    else:
        extra = _run_seeds(cfg, jobs)
        records: Dict[int, List[MetricsRecord]] = {}
        for seed in cfg.seeds:
            path = os.path.join(seed_dir(cfg.out, seed), 'metrics.jsonl')
            records[seed] = read_metrics(path) if os.path.exists(path) else []
        summary = summarize(cfg.task, records, extra)
    _write_json(os.path.join(cfg.out, 'summary.json'), summary)
    return summary


def report_task(run_dir: str, output: Optional[str] = None) -> Tuple[str, List[str]]:
    """
    Overview:
        Render the metrics of every seed of ``run_dir`` as one plot-data csv, and recompute \
        the summary medians from the raw records.

    :param run_dir: Output directory of a run.
    :param output: Csv path, default is ``<run_dir>/plot.csv``.
    :return: Tuple of csv path and the summary fields whose medians disagree with the records.
    """
    records = {}
    for seed, directory in _seed_dirs(run_dir):
        path = os.path.join(directory, 'metrics.jsonl')
        if os.path.exists(path):
            records[seed] = read_metrics(path)
    if not records:
        raise FileNotFoundError(f'Metrics files expected in {run_dir!r} but none found.')

    fields = []
    for items in records.values():
        for record in items:
            fields.extend(name for name in record.values if name not in fields)
    output = output or os.path.join(run_dir, 'plot.csv')
    with open(output, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['seed', 'step', *fields])
        for seed, items in sorted(records.items()):
            for record in items:
                writer.writerow([seed, record.step, *(repr(record[name]) if name in record else ''
                                                      for name in fields)])

    mismatches = []
    summary_path = os.path.join(run_dir, 'summary.json')
    if os.path.exists(summary_path):
        mismatches = check_summary(_read_json(summary_path), records)
    return output, mismatches
