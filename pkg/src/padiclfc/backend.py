"""Kernel backend selection.

The compiled extension (Cython, int64 arithmetic) is used when it imported
successfully, was not disabled via PADICLFC_FORCE_PURE, and the field's
coordinate modulus leaves enough int64 headroom for unreduced convolution
sums.  Everything else falls back to the pure-Python kernels, which accept
arbitrary-size integers.
"""

import os

from . import _kernels_py as pure

try:
    from . import _kernels as compiled  # type: ignore[attr-defined]
except ImportError:
    compiled = None

if os.environ.get("PADICLFC_FORCE_PURE"):
    compiled = None

HAVE_COMPILED = compiled is not None


def pick(pm, width):
    """Kernel module for coordinate modulus pm and convolution width.

    Unreduced accumulator entries are bounded by width * (pm-1)^2, which
    must stay below 2^62 for the int64 path.
    """
    if compiled is not None and width * (pm - 1) * (pm - 1) < (1 << 62):
        return compiled
    return pure
