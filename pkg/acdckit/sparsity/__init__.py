"""
Overview:
    Truncation operators, sparsity patterns and mask algebra.
"""
from .mask import *
from .pattern import *
from .stats import *
from .topk import *
