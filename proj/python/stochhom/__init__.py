"""Antithetic variance reduction for nonlinear stochastic homogenization."""

from ._stochhom import *  # noqa: F401,F403
from ._stochhom import __version__, QUANTITIES  # noqa: F401
