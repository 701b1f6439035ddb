"""
Overview:
    Alternating compressed/decompressed training, with its phase schedules, \
    optimizer and checkpoints.
"""
from .checkpoint import *
from .optimizer import *
from .schedule import *
from .train import *
