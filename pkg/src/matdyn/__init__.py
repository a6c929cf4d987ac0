"""Dynamics of rational maps on 2x2 complex matrices."""
from .core import (
    EigenPair, IDENTITY, Invariants, JordanType, Mat2, ZERO, conjugate, det, eigenvalues,
    invariants, jordan_classify, mat_inverse, mat_mul,
)
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
