"""Capacity of the discrete-time AWGN channel under K-bin output quantization.

Thin wrapper around the compiled core: input-distribution optimization with
KKT certification, symmetric quantizer design and the bundled reference
tables.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
