"""Phase-space thermal averages for a single quantum degree of freedom.

The compiled extension carries the implementation; this package re-exports
its public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__all__ = [n for n in dir() if not n.startswith("_")]
