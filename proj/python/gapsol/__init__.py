"""Gap solitons of a periodic nonlinear Schrodinger problem.

Thin wrapper over the compiled extension; see the C++ headers for the
operation contracts.
"""

from ._gapsol import *  # noqa: F401,F403
from ._gapsol import __version__  # noqa: F401
