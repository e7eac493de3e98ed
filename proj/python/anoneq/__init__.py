"""Approximate Nash equilibria of anonymous games.

Games, profiles and exact lattice distributions are first-class values;
solvers return result objects whose profiles are plain lists of
per-strategy probability rows, and every solver output can be re-checked
with the independent ``max_regret`` verifier.
"""

from anoneq._core import *  # noqa: F401,F403
from anoneq._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
