"""Closed-form periodic points of the squaring maps, and a brute-force oracle.

Root-of-unity lattices are built from angles 2*pi*k/(2^n - 1) rather than by
repeated multiplication. Line families come back as one representative with
``free_entry`` naming the coordinate that may take any value.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .core import ZERO, Mat2
from .errors import MatdynError, NotRootOfUnity
from .maps import PhiDiag, PhiId, PhiJordan, apply

ROOT_TOL = 1e-10
FAMILIES = ("Zero", "DiagTorus", "XAxisCircle", "TAxisCircle", "JordanLine", "ResonantLine")


@dataclass(frozen=True)
class PeriodicPoint:
    point: Mat2
    period: int
    family: Optional[str]
    residual: float = 0.0
    free_entry: Optional[str] = None


@dataclass(frozen=True)
class ResonanceReport:
    n: int
    x: complex
    t: complex
    multiplier: complex
    resonant: bool


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def root(k: int, order: int) -> complex:
    return cmath.exp(2j * math.pi * k / order)


def roots_of_unity(order: int) -> list[complex]:
    return [root(k, order) for k in range(order)]


def exact_period(k: int, n: int) -> int:
    """Least d | n with root(k, 2^n - 1) a (2^d - 1)-th root of unity."""
    order = 2**n - 1
    return next(d for d in divisors(n) if (k * (2**d - 1)) % order == 0)


def cycle_residual(spec, m: Mat2, n: int) -> float:
    w = m
    for _ in range(n):
        w = apply(spec, w)
    return (w - m).norm() / (1 + m.norm())


def minimal_period(spec, m: Mat2, n: int, tol: float = 1e-9) -> Optional[int]:
    for d in divisors(n):
        if cycle_residual(spec, m, d) <= tol:
            return d
    return None


def _sort_key(p: PeriodicPoint):
    return tuple(p.point.reals()) + (p.period,)


def _check_root(w: complex, n: int, what: str):
    if abs(w ** (2**n - 1) - 1) > ROOT_TOL:
        raise NotRootOfUnity(f"{what}={w} is not a (2^{n}-1)-th root of unity")


# ---- identity squaring ------------------------------------------------------

def iter_periodic_phi_id(n: int) -> Iterator[PeriodicPoint]:
    if not 1 <= n <= 20:
        raise ValueError("n must lie in [1, 20]")
    spec, order = PhiId(), 2**n - 1

    def make(m, period, family):
        return PeriodicPoint(m, period, family, cycle_residual(spec, m, n))

    yield make(ZERO, 1, "Zero")
    for a in range(order):
        pa = exact_period(a, n)
        yield make(Mat2.diag(root(a, order), 0), pa, "XAxisCircle")
        yield make(Mat2.diag(0, root(a, order)), pa, "TAxisCircle")
        for b in range(order):
            period = math.lcm(pa, exact_period(b, n))
            yield make(Mat2.diag(root(a, order), root(b, order)), period, "DiagTorus")


def periodic_phi_id(n: int) -> list[PeriodicPoint]:
    """Representatives of the points of period dividing n.

    The list has (2^n - 1)^2 + 2(2^n - 1) + 1 entries; use the iterator for large n.
    """
    return sorted(iter_periodic_phi_id(n), key=_sort_key)


# ---- diagonal twist A = diag(lam, 1/lam) ------------------------------------

def resonance_multiplier(lam: complex, x: complex, t: complex, n: int,
                         tol: float = 1e-10) -> ResonanceReport:
    """Growth factor of the upper corner y after n steps on the torus."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_root(x, n, "x")
    _check_root(t, n, "t")
    mult, xi, ti = 1 + 0j, complex(x), complex(t)
    for _ in range(n):
        mult *= xi + lam * lam * ti
        xi, ti = xi * xi, ti * ti
    return ResonanceReport(n, x, t, mult, abs(mult - 1) <= tol)


def _diag_torus_period(lam, a, b, n, lower: bool, tol) -> Optional[int]:
    """Least d | n for which the off-diagonal line through the torus point closes up."""
    order = 2**n - 1
    base = math.lcm(exact_period(a, n), exact_period(b, n))
    for d in divisors(n):
        if d % base:
            continue
        rep = resonance_multiplier(lam, root(a, order), root(b, order), d, tol)
        mult = rep.multiplier / lam ** (2 * d) if lower else rep.multiplier
        if abs(mult - 1) <= tol:
            return d
    return None


def iter_periodic_phi_diag(lam: complex, n: int, tol: float = 1e-10) -> Iterator[PeriodicPoint]:
    if lam == 0:
        raise ValueError("lam must be nonzero")
    if not 1 <= n <= 12:
        raise ValueError("n must lie in [1, 12]")
    spec, order = PhiDiag(lam), 2**n - 1

    def make(m, period, family, free=None):
        return PeriodicPoint(m, period, family, cycle_residual(spec, m, n), free)

    yield make(ZERO, 1, "Zero")
    for a in range(order):
        u, pa = root(a, order), exact_period(a, n)
        yield make(Mat2(u / lam, 1, 0, 0), pa, "XAxisCircle", "y")
        yield make(Mat2(0, 0, 1, lam * u), pa, "TAxisCircle", "z")
        for b in range(order):
            v = root(b, order)
            yield make(Mat2.diag(u / lam, lam * v), math.lcm(pa, exact_period(b, n)), "DiagTorus")
            d = _diag_torus_period(lam, a, b, n, False, tol)
            if d is not None:
                yield make(Mat2(u / lam, 1, 0, lam * v), d, "ResonantLine", "y")
            d = _diag_torus_period(lam, a, b, n, True, tol)
            if d is not None:
                yield make(Mat2(u / lam, 0, 1, lam * v), d, "ResonantLine", "z")


def periodic_phi_diag(lam: complex, n: int, tol: float = 1e-10) -> list[PeriodicPoint]:
    return sorted(iter_periodic_phi_diag(lam, n, tol), key=_sort_key)


# ---- unipotent twist A = [[1,1],[0,1]] --------------------------------------

def jordan_B_C(x, t, n: int):
    """Coefficients of y_n = B_n * y + C_n for the upper corner on z = 0.

    Works elementwise on numpy arrays.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    xs, ts = [x], [t]
    for _ in range(n):
        xs.append(xs[-1] * xs[-1])
        ts.append(ts[-1] * ts[-1])
    b = 1
    for i in range(n):
        b = b * (xs[i] + ts[i])
    c = ts[n]
    for k in range(1, n):
        prod = 1
        for i in range(k, n):
            prod = prod * (xs[i] + ts[i])
        c = c + ts[k] * prod
    return b, c


def iter_periodic_phi_jordan(n: int, tol: float = 1e-10) -> Iterator[PeriodicPoint]:
    if not 1 <= n <= 10:
        raise ValueError("n must lie in [1, 10]")
    spec, order = PhiJordan(), 2**n - 1
    roots = np.exp(2j * np.pi * np.arange(order) / order)

    def make(m, family, free=None, period=None):
        if period is None:
            period = minimal_period(spec, m, n)
        return PeriodicPoint(m, period, family, cycle_residual(spec, m, n), free)

    yield make(ZERO, "Zero", period=1)
    for a in range(order):
        u = root(a, order)
        yield make(Mat2(u, 1, 0, 0), "XAxisCircle", "y", exact_period(a, n))
        yield make(Mat2(u, -u, 0, u), "JordanLine", None, exact_period(a, n))
    # Distinct root pairs: y_n = y + C_n, so the whole line closes iff C_n vanishes.
    xs, ts = np.meshgrid(roots, roots, indexing="ij")
    _, c = jordan_B_C(xs, ts, n)
    for a, b in zip(*np.nonzero(np.abs(c) <= tol)):
        if a != b:
            m = Mat2(root(int(a), order), 1, 0, root(int(b), order))
            yield make(m, "ResonantLine", "y")


def periodic_phi_jordan(n: int, tol: float = 1e-10) -> list[PeriodicPoint]:
    return sorted(iter_periodic_phi_jordan(n, tol), key=_sort_key)


# ---- oracle -----------------------------------------------------------------

def brute_force_cycles(spec, candidates: Iterable[Mat2], n: int,
                       tol: float = 1e-9) -> list[PeriodicPoint]:
    """Candidates returning to themselves after n steps, with minimal period."""
    if n < 1:
        raise ValueError("n must be >= 1")
    found = []
    for m in candidates:
        try:
            res = cycle_residual(spec, m, n)
            if res > tol:
                continue
            found.append(PeriodicPoint(m, minimal_period(spec, m, n, tol), None, res))
        except (MatdynError, OverflowError):
            continue
    return sorted(found, key=_sort_key)
