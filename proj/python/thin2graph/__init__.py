"""Thin-domain to quantum-graph spectral convergence toolkit."""

try:
    from ._thin2graph import *  # noqa: F401,F403  (installed package layout)
    from ._thin2graph import __version__  # noqa: F401
except ImportError:  # development layout: extension on PYTHONPATH next to the build tree
    from _thin2graph import *  # noqa: F401,F403
    from _thin2graph import __version__  # noqa: F401
