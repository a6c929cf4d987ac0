"""Basin of the zero matrix for the squaring maps, and the set of
(trace, det) pairs having one root on the unit circle and the other in the
closed unit disk.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

from .core import Mat2, eigenvalues, invariants
from .maps import PhiDiag, apply

BOUNDARY_TOL = 1e-9
RATIO_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class BasinVerdict:
    tag: str  # Interior | Boundary | OutsideClosure
    max_eig_modulus: float
    min_eig_modulus: float


@dataclass(frozen=True)
class SigmaPoint:
    b: complex
    c: complex


@dataclass(frozen=True)
class QuadricProbe:
    on_quadric: bool
    collapse_step: Optional[int]


def basin_classify_phi_id(m: Mat2, tol: float = BOUNDARY_TOL) -> BasinVerdict:
    ev = eigenvalues(m)
    hi, lo = sorted((abs(ev.l1), abs(ev.l2)), reverse=True)
    if hi < 1 - tol:
        tag = "Interior"
    elif abs(hi - 1) <= tol and lo <= 1 + tol:
        tag = "Boundary"
    else:
        tag = "OutsideClosure"
    return BasinVerdict(tag, hi, lo)


def sigma_residual(b: complex, c: complex) -> float:
    """Scaled left side of |c|^2 - |b|^2/2 - |b^2 - 4c|/2 + 1 = 0."""
    lhs = abs(c) ** 2 - 0.5 * abs(b) ** 2 - 0.5 * abs(b * b - 4 * c) + 1
    return abs(lhs) / (1 + abs(b) ** 2 + abs(c) ** 2)


def sigma_membership(b: complex, c: complex, tol: float = 1e-10) -> bool:
    return sigma_residual(b, c) <= tol and abs(c) <= 1 + tol


def sigma_param(theta: float, u: complex) -> SigmaPoint:
    w = cmath.exp(1j * theta)
    return SigmaPoint(w + u, w * u)


def classify_lambda_set(m: Mat2, tol: float = 1e-9) -> Optional[str]:
    inv = invariants(m)
    tr, d = inv.trace, inv.det
    unit_det = abs(abs(d) - 1) <= tol
    if unit_det and abs(tr * tr - 4 * d) <= tol * (1 + abs(tr) ** 2):
        return "Lambda1"
    if unit_det:
        ratio = tr * tr / d
        if abs(ratio.imag) <= RATIO_IMAG_TOL and -RATIO_IMAG_TOL <= ratio.real <= 4 - RATIO_IMAG_TOL:
            return "Lambda2"
    if abs(d) <= tol and abs(abs(tr) - 1) <= tol:
        return "Lambda0"
    return None


def empirical_basin(spec, m: Mat2, kappa: int = 60, R: float = 1e8, eps: float = 1e-8) -> str:
    """Iterate up to kappa steps; map errors propagate to the caller."""
    if kappa < 1 or not R > 1 > eps > 0:
        raise ValueError("need kappa >= 1 and R > 1 > eps > 0")
    w = m
    for _ in range(kappa + 1):
        norm = w.norm()
        if norm < eps:
            return "Converged"
        if norm > R:
            return "Escaped"
        try:
            w = apply(spec, w)
        except ValueError:  # overflow to non-finite entries
            return "Escaped"
    return "Undecided"


def qk_quadric_probe(lam: complex, m: Mat2, k: int, tol: float = 1e-10) -> QuadricProbe:
    """Test membership of {det = 0, lam^k x + t / lam^k = 0} and measure collapse to 0."""
    if lam == 0:
        raise ValueError("lam must be nonzero")
    scale = 1 + m.norm()
    lk = lam ** k
    on = (abs(m.x * m.t - m.y * m.z) <= tol * scale ** 2
          and abs(lk * m.x + m.t / lk) <= tol * scale * max(abs(lk), 1 / abs(lk)))
    # The map is quadratic, so rounding at a collapse leaves a residue of
    # order eps * (previous norm)^2; collapse is judged on that scale.
    spec, w, step, peak = PhiDiag(lam), m, None, m.norm()
    for n in range(1, k + 3):
        try:
            w = apply(spec, w)
        except ValueError:
            break
        if w.norm() <= tol * (1 + peak * peak):
            step = n
            break
        peak = max(peak, w.norm())
    return QuadricProbe(on, step)
