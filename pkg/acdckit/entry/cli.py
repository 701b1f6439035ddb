"""
Overview:
    Command line interface, ``acdckit <command> -c config.json``.
"""
import json
import logging
import os
from typing import Optional

import click
from click.exceptions import ClickException

from .config import ConfigValidationError, error_record, load_config
from .tasks import report_task, run_task
from ..config.meta import __TITLE__, __VERSION__
from ..data import CsvFormatError
from ..iht import DivergenceError
from ..numeric import NonFiniteError
from ..sparsity import PatternError

__all__ = [
    'CONTEXT_SETTINGS', 'LOG_ENVVAR',
    'RunDivergenceError', 'ArtifactError',
    'cli',
]

CONTEXT_SETTINGS = dict(
    help_option_names=['-h', '--help']
)
LOG_ENVVAR = 'ACDC_LOG'
_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR']


class _RecordException(ClickException):
    kind = 'error'

    def __init__(self, message: str, fields: Optional[dict] = None):
        ClickException.__init__(self, message)
        self.fields = dict(fields or {})

    @property
    def record(self) -> dict:
        return error_record(self.kind, self.message, self.fields)

    def show(self, file=None):
        click.echo(json.dumps(self.record), file=file, err=True)


class RunDivergenceError(_RecordException):
    """
    Overview:
        A run diverged, exits with status 3. ``fields`` holds the diagnostic.
    """
    exit_code = 0x3
    kind = 'divergence'


class ArtifactError(_RecordException):
    """
    Overview:
        Missing or inconsistent run artifacts, exits with status 1.
    """
    exit_code = 0x1
    kind = 'artifact'


class _StreamHandler(logging.StreamHandler):
    pass


def _setup_logging(level: str):
    logger = logging.getLogger('acdckit')
    for handler in list(logger.handlers):
        if isinstance(handler, _StreamHandler):
            logger.removeHandler(handler)
    handler = _StreamHandler()
    handler.setFormatter(logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s'))
    logger.addHandler(handler)
    logger.setLevel(level.upper())


def _write_error(out: Optional[str], record: dict):
    if out:
        os.makedirs(out, exist_ok=True)
        with open(os.path.join(out, 'error.json'), 'w') as f:
            json.dump(record, f, indent=2)


def _execute(config_path: str, seeds, out: Optional[str], jobs: int, task: Optional[str]):
    cfg = load_config(config_path, seeds, out, task)
    try:
        run_task(cfg, jobs)
    except DivergenceError as err:
        error = RunDivergenceError(str(err), err.diagnostic)
        _write_error(cfg.out, error.record)
        raise error
    except NonFiniteError as err:
        error = RunDivergenceError(str(err), {'reason': 'non_finite', 'task': cfg.task})
        _write_error(cfg.out, error.record)
        raise error
    except PatternError as err:
        error = ConfigValidationError({'pattern': str(err)})
        _write_error(cfg.out, error.record)
        raise error
    except CsvFormatError as err:
        error = ArtifactError(str(err), {'row': str(err.row), 'column': str(err.column)})
        _write_error(cfg.out, error.record)
        raise error
    except FileNotFoundError as err:
        error = ArtifactError(str(err))
        _write_error(cfg.out, error.record)
        raise error
    click.echo(os.path.join(cfg.out, 'summary.json'))


def _task_command(task: Optional[str], help_: str):
    @cli.command(task or 'run', help=help_, context_settings=CONTEXT_SETTINGS)
    @click.option('-c', '--config', 'config_path', type=click.Path(dir_okay=False), required=True,
                  help='Experiment configuration json file.')
    @click.option('--seed', 'seeds', type=click.IntRange(min=0), multiple=True,
                  help='Seed replacing the configured seeds, may be repeated.')
    @click.option('--out', type=click.Path(file_okay=False), default=None,
                  help='Output directory replacing the configured one.')
    @click.option('-j', '--jobs', type=click.IntRange(min=1), default=1, show_default=True,
                  help='Worker processes for seeds.')
    def _command(config_path: str, seeds, out: Optional[str], jobs: int):
        _execute(config_path, seeds, out, jobs, task)

    return _command


@click.group(context_settings=CONTEXT_SETTINGS, help='Sparse training experiments.')
@click.version_option(version=__VERSION__, prog_name=__TITLE__, message='%(prog)s, version %(version)s.')
@click.option('--log-level', type=click.Choice(_LOG_LEVELS, case_sensitive=False), envvar=LOG_ENVVAR,
              default='WARNING', show_default=True, help=f'Logging verbosity, also read from {LOG_ENVVAR}.')
def cli(log_level: str):
    _setup_logging(log_level)


run = _task_command(None, 'Run the task named in the configuration.')
generate = _task_command('generate', 'Generate planted regression problems or classification datasets.')
run_iht = _task_command('run-iht', 'Run iterative hard thresholding on planted problems.')
train_acdc = _task_command('train-acdc', 'Alternating compressed/decompressed training.')
flops = _task_command('flops', 'Inference and training FLOPs of a layer manifest.')
diagnose = _task_command('diagnose', 'Diagnostics of a finished training run.')


@cli.command('report', help='Render plot data from metrics files and check the summary.',
             context_settings=CONTEXT_SETTINGS)
@click.argument('run_dir', type=click.Path(exists=True, file_okay=False))
@click.option('-o', '--output', type=click.Path(dir_okay=False), default=None,
              help='Plot data csv, default is plot.csv in the run directory.')
def report(run_dir: str, output: Optional[str]):
    try:
        path, mismatches = report_task(run_dir, output)
    except (FileNotFoundError, ValueError) as err:
        raise ArtifactError(str(err))
    if mismatches:
        raise ArtifactError('Summary medians disagree with metrics records.',
                            {name: 'median mismatch' for name in mismatches})
    click.echo(path)

