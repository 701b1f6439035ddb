"""
Overview:
    Deterministic numeric primitives, including vectors, matrices, parameter sets and seeded random generation.
"""
from .matrix import *
from .params import *
from .rng import *
from .vector import *
