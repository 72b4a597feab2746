"""RSS/TOA target localization solvers and Monte Carlo benchmark (C++ core)."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
