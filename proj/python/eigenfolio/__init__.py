"""Eigen-portfolio construction and backtesting.

Thin wrapper around the compiled extension; everything public lives in
:mod:`eigenfolio._eigenfolio` and is re-exported here.
"""

from ._eigenfolio import *  # noqa: F401,F403
from ._eigenfolio import __version__  # noqa: F401
