"""Trapped-ion gate error simulation, noise-aware tomography, and gate calibration."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
