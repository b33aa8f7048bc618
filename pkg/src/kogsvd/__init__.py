"""Accurate SVD of real 2x2 matrices by one Kogbetliantz-style step.

The main entry point is :func:`svd2`; :mod:`kogsvd.baseline` holds the
LAPACK-style comparator and :mod:`kogsvd.oracle` the high-precision references.
"""

from .epair import EPair
from .fpcore import BINARY32, BINARY64, Format, get_format, hypot_cr
from .matrix import Matrix2
from .svd2 import Options, Svd2Result, Trace, svd2

__all__ = ["EPair", "BINARY32", "BINARY64", "Format", "get_format", "hypot_cr", "Matrix2", "Options",
           "Svd2Result", "Trace", "svd2"]
