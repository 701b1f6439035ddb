"""
Overview:
    Iterative hard thresholding, deterministic, stochastic, polished and phased, \
    with trajectory instrumentation and planted instances.
"""
from .batch import *
from .config import *
from .phased import *
from .planted import *
from .polish import *
from .runner import *
from .step import *
from .trajectory import *
