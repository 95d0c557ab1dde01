"""Pseudo-spectral electrohydrodynamics on the periodic torus."""

from ._core import *  # noqa: F401,F403
from ._core import EhdError, __doc__  # noqa: F401

__version__ = "0.1.0"
