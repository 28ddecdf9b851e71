"""Best approximation onto intersections of affine subspaces.

The package is a thin wrapper around the C++ core; everything lives in
the compiled module.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
