"""
Overview:
    Datasets, synthetic generators and csv ingestion.
"""
from .csvio import *
from .dataset import *
from .generate import *
