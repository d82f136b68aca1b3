"""Exact finite-precision arithmetic in Galois extensions of Q_p, fast
computation of local fundamental classes as explicit 2-cocycles, and a
group-cohomology verification oracle.
"""

__version__ = "0.1.0"

from . import errors  # noqa: F401
