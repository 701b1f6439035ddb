"""
Overview:
    Experiment orchestration, configuration files, metrics streams and the ``acdckit`` command line.
"""
from .cli import *
from .config import *
from .metrics import *
from .tasks import *
