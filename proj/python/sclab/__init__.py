"""Python interface to the sclab core: grids, fields, solvers, and the
rare-event toolkit, all backed by the C++ extension module."""

try:
    from ._sclab import *  # noqa: F401,F403  (installed layout)
    from . import _sclab as _impl
except ImportError:
    from _sclab import *  # noqa: F401,F403  (build-tree layout)
    import _sclab as _impl

__version__ = "0.1.0"
__all__ = [name for name in dir(_impl) if not name.startswith("_")]
