"""Hierarchical Bayesian inference: full-model Gibbs sampling and
combination of independently sampled source posteriors."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
