"""
Overview:
    Objectives with exact full gradients and unbiased mini-batch gradients, \
    and empirical estimates of their landscape constants.
"""
from .base import *
from .landscape import *
from .least_squares import *
from .linear import *
from .logistic import *
from .mlp import *
