"""
Overview:
    Analysis instruments of sparse training runs: mask dynamics, sparse-dense agreement, \
    inactive weights and label memorization.
"""
from .agreement import *
from .masks import *
from .memorization import *
from .weights import *
