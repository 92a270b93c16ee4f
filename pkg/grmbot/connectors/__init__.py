"""
Connectors Package

This package provides the execution back-ends that run enumeration shards:
in-process for single-worker runs and a multiprocessing pool otherwise.
"""

from . import local
from . import pool

__all__ = ["local", "pool"]
