"""
Overview:
    Floating point operation accounting of sparse training, over layer manifests.
"""
from .count import *
from .manifest import *
