"""Moderate- and large-deviation rate functions for two-factor stochastic volatility models."""

from ._mdpvol import *  # noqa: F401,F403
from ._mdpvol import __doc__  # noqa: F401

__version__ = "0.1.0"
