"""Complex 2x2 matrix arithmetic with explicit entry formulas.

Matrices are ``[[x, y], [z, t]]``. Entries are Python complex numbers and
every operation returns a fresh immutable value.
"""
from __future__ import annotations

import cmath
import enum
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteValue, SingularMatrix

SINGULAR_TOL = 1e-300
REPEATED_TOL = 1e-10
JORDAN_TOL = 1e-10


@dataclass(frozen=True)
class Mat2:
    x: complex
    y: complex
    z: complex
    t: complex

    def __post_init__(self):
        for name in ("x", "y", "z", "t"):
            w = complex(getattr(self, name))
            if not cmath.isfinite(w):
                raise NonFiniteValue(f"non-finite entry {name}={w}")
            object.__setattr__(self, name, w)

    @classmethod
    def from_reals(cls, values) -> "Mat2":
        v = [float(a) for a in values]
        if len(v) != 8:
            raise ValueError("expected 8 reals: x.re,x.im,y.re,y.im,z.re,z.im,t.re,t.im")
        return cls(complex(v[0], v[1]), complex(v[2], v[3]),
                   complex(v[4], v[5]), complex(v[6], v[7]))

    @classmethod
    def parse(cls, text: str) -> "Mat2":
        return cls.from_reals(text.split(","))

    @classmethod
    def diag(cls, a: complex, b: complex) -> "Mat2":
        return cls(a, 0, 0, b)

    def entries(self) -> tuple[complex, complex, complex, complex]:
        return (self.x, self.y, self.z, self.t)

    def reals(self) -> list[float]:
        out = []
        for w in self.entries():
            out += [w.real, w.imag]
        return out

    def norm(self) -> float:
        """Sup-norm of the entries."""
        return max(abs(self.x), abs(self.y), abs(self.z), abs(self.t))

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.x + other.x, self.y + other.y, self.z + other.z, self.t + other.t)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.x - other.x, self.y - other.y, self.z - other.z, self.t - other.t)

    def scale(self, s: complex) -> "Mat2":
        return Mat2(s * self.x, s * self.y, s * self.z, s * self.t)

    def transpose(self) -> "Mat2":
        return Mat2(self.x, self.z, self.y, self.t)


IDENTITY = Mat2(1, 0, 0, 1)
ZERO = Mat2(0, 0, 0, 0)


@dataclass(frozen=True)
class Invariants:
    trace: complex
    det: complex


@dataclass(frozen=True)
class EigenPair:
    l1: complex
    l2: complex
    repeated: bool


class JordanType(enum.Enum):
    ScalarMultipleOfId = "ScalarMultipleOfId"
    DiagonalizableDistinct = "DiagonalizableDistinct"
    NonDiagonalizable = "NonDiagonalizable"


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return Mat2(a.x * b.x + a.y * b.z, a.x * b.y + a.y * b.t,
                a.z * b.x + a.t * b.z, a.z * b.y + a.t * b.t)


def det(m: Mat2) -> complex:
    return m.x * m.t - m.y * m.z


def mat_inverse(m: Mat2) -> Mat2:
    d = det(m)
    if abs(d) <= SINGULAR_TOL:
        raise SingularMatrix(f"|det| = {abs(d):.3g} is not invertible")
    return Mat2(m.t / d, -m.y / d, -m.z / d, m.x / d)


def invariants(m: Mat2) -> Invariants:
    return Invariants(m.x + m.t, det(m))


def discriminant_sqrt(m: Mat2) -> complex:
    """Principal square root of (t-x)^2 + 4yz."""
    return cmath.sqrt((m.t - m.x) ** 2 + 4 * m.y * m.z)


def _lex(w: complex) -> tuple[float, float]:
    return (w.real, w.imag)


def eigenvalues(m: Mat2) -> EigenPair:
    tr, d = m.x + m.t, det(m)
    delta = discriminant_sqrt(m)
    # Pick the sign avoiding cancellation; recover the other root from the product.
    big = (tr + delta) / 2 if abs(tr + delta) >= abs(tr - delta) else (tr - delta) / 2
    small = d / big if big != 0 else (tr - big)
    l1, l2 = sorted((big, small), key=_lex)
    return EigenPair(l1, l2, abs(delta) <= REPEATED_TOL * (1 + m.norm()))


def conjugate(p: Mat2, m: Mat2) -> Mat2:
    return mat_mul(mat_mul(p, m), mat_inverse(p))


def jordan_classify(m: Mat2, tol: float = JORDAN_TOL) -> JordanType:
    if abs(m.y) <= tol and abs(m.z) <= tol and abs(m.x - m.t) <= tol:
        return JordanType.ScalarMultipleOfId
    disc = (m.t - m.x) ** 2 + 4 * m.y * m.z
    if abs(disc) <= tol * (1 + m.norm() ** 2):
        return JordanType.NonDiagonalizable
    return JordanType.DiagonalizableDistinct


def random_matrices(rng, count: int, radius: float = 1.0) -> list[Mat2]:
    """Matrices with entries uniform in the disk of given radius (a polydisk sample)."""
    r = radius * np.sqrt(rng.random((count, 4)))
    w = r * np.exp(2j * np.pi * rng.random((count, 4)))
    return [Mat2(*map(complex, row)) for row in w]
