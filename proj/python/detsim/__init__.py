"""Distributed detection on agent networks.

Six update rules combining consensus aggregation (arithmetic or geometric,
before or after the Bayes step, with or without one-round delay) are exposed
together with the network checkers and the seeded simulation engine.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
