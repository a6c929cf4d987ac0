"""Squaring twisted by diag(e^{i theta}, e^{-i theta}) on quaternions.

A quaternion is stored as the pair (x, y) standing for [[x, y], [-conj(y), conj(x)]].
On the unit sphere the first component only depends on x, which gives the
real planar map ``phi_theta`` on the closed unit disk.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import Mat2
from .errors import DegenerateAngle, InternalConsistencyError

J = cmath.exp(2j * math.pi / 3)
DELTA_TOL = 1e-8
CYCLE_TOL = 1e-9


@dataclass(frozen=True)
class Quaternion:
    x: complex
    y: complex

    def matrix(self) -> Mat2:
        return Mat2(self.x, self.y, -self.y.conjugate(), self.x.conjugate())

    def norm2(self) -> float:
        return abs(self.x) ** 2 + abs(self.y) ** 2


@dataclass(frozen=True)
class CatalogPoint:
    tag: str
    point: tuple[float, float]
    in_disk: bool


@dataclass(frozen=True)
class TwoPeriodicCatalog:
    points: list[CatalogPoint]
    delta: float


def f_theta(theta: float, q: Quaternion) -> Quaternion:
    w = cmath.exp(1j * theta)
    x, y = complex(q.x), complex(q.y)
    return Quaternion(w * (x * x - abs(y) ** 2), w * y * (x + x.conjugate()))


def phi_theta(theta: float, p):
    x1, x2 = p
    c, s = math.cos(theta), math.sin(theta)
    w = 2 * x1 * x1 - 1
    return (c * w - 2 * s * x1 * x2, 2 * c * x1 * x2 + s * w)


def canonical_angle(theta: float) -> float:
    return theta % (2 * math.pi)


def degeneracy(theta: float) -> float:
    c = math.cos(theta)
    return ((4 * c * c - 3) * (2 * c**3 - 3 * c * c + 2) * (2 * c**3 + 3 * c * c - 2)
            * (c - 1) * (c + 1))


def _fixed(theta: float) -> list[CatalogPoint]:
    c, s = math.cos(theta), math.sin(theta)
    th = canonical_angle(theta)
    tiny = 1e-12
    b1_in = th <= 2 * math.pi / 3 + tiny or th >= 4 * math.pi / 3 - tiny
    b2_in = math.pi / 3 - tiny <= th <= 5 * math.pi / 3 + tiny
    return [
        CatalogPoint("a", (c, -s), True),
        CatalogPoint("b1", (-0.5, (c - 1) / (2 * s)), b1_in),
        CatalogPoint("b2", (0.5, -(c + 1) / (2 * s)), b2_in),
    ]


def phi_theta_fixed_points(theta: float) -> list[CatalogPoint]:
    if abs(math.sin(theta)) <= 1e-12:
        raise DegenerateAngle("sin(theta) = 0: only the circle fixed point is isolated",
                              [CatalogPoint("a", (math.cos(theta), 0.0), True)])
    return _fixed(theta)


def _cycle_points(theta: float) -> list[CatalogPoint]:
    rot = cmath.exp(-1j * theta)
    pts = [CatalogPoint(tag, ((w * rot).real, (w * rot).imag), True)
           for tag, w in (("c1", J), ("c2", J * J))]
    c, s = math.cos(theta), math.sin(theta)
    if abs(c) > DELTA_TOL:
        r = math.sqrt(1 + 4 * c * c)
        th = canonical_angle(theta)
        q = math.pi / 4
        tiny = 1e-12
        d_in = th <= q + tiny or th >= 7 * q - tiny or 3 * q - tiny <= th <= 5 * q + tiny
        pts += [
            CatalogPoint("d1", ((r - 1) / (4 * c), s * (r + 1) / (4 * c * c)), d_in),
            CatalogPoint("d2", (-(r + 1) / (4 * c), s * (1 - r) / (4 * c * c)), d_in),
        ]
    return pts


def _check_cycle(theta: float, cp: CatalogPoint):
    p = cp.point
    q = phi_theta(theta, phi_theta(theta, p))
    scale = (1 + math.hypot(*p)) ** 2
    if math.hypot(q[0] - p[0], q[1] - p[1]) > CYCLE_TOL * scale:
        raise InternalConsistencyError(f"catalog point {cp.tag} at theta={theta} is not 2-periodic")


def phi_theta_two_periodic(theta: float) -> TwoPeriodicCatalog:
    """Fixed points plus the genuine 2-cycles, each validated by applying phi twice."""
    delta = degeneracy(theta)
    if abs(delta) <= DELTA_TOL:
        raise DegenerateAngle(f"degeneracy polynomial vanishes at theta={theta}")
    pts = _fixed(theta) + _cycle_points(theta)
    for cp in pts:
        _check_cycle(theta, cp)
    if len(pts) < 7:
        # cos(theta) = 0 sends the d pair to infinity.
        raise DegenerateAngle(f"two points escape to infinity at theta={theta}",
                              TwoPeriodicCatalog(pts, delta))
    return TwoPeriodicCatalog(pts, delta)


def t_n_lambda(lam: float, v: complex, n: int) -> complex:
    if n < 0:
        raise ValueError("n must be >= 0")
    prod, w = 1 + 0j, complex(v)
    for _ in range(n):
        prod *= 1 + lam * lam * w
        w = w * w
    return prod
