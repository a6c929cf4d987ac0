"""Matrix maps, the conjugation-equivariant lift, skeleton maps and orbits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .core import (
    IDENTITY, Mat2, discriminant_sqrt, mat_inverse, mat_mul,
    random_matrices,
)
from .errors import (
    DegenerateFiber, IndeterminatePoint, MatdynError, NonFiniteValue, PoleOfMap,
    PoleOfPsi,
)

LIFT_NEAR_DISC = 1e-8


# ---- map descriptions ------------------------------------------------------

@dataclass(frozen=True)
class PhiId:
    pass


@dataclass(frozen=True)
class PhiPower:
    alpha: complex
    d: int

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("PhiPower needs alpha != 0")
        if int(self.d) != self.d or self.d < 2:
            raise ValueError("PhiPower needs an integer degree d >= 2")


@dataclass(frozen=True)
class PhiDiag:
    """M -> A M^2 with A = diag(lam, 1/lam)."""
    lam: complex

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("PhiDiag needs lam != 0")


@dataclass(frozen=True)
class PhiJordan:
    """M -> A M^2 with A the unipotent Jordan block [[1,1],[0,1]]."""


@dataclass(frozen=True)
class SigmaC:
    c: complex


@dataclass(frozen=True)
class ZetaLambda:
    lam: complex

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("ZetaLambda needs lam != 0")


@dataclass(frozen=True)
class Lifted:
    psi: Callable[[complex, complex], complex]
    name: str = "custom"


@dataclass(frozen=True)
class PasanLift:
    pass


@dataclass(frozen=True)
class HenonLift:
    pass


LATTES_ZETA = ZetaLambda(0.5j)

MapSpec = Union[PhiId, PhiPower, PhiDiag, PhiJordan, SigmaC, ZetaLambda,
                Lifted, PasanLift, HenonLift]


@dataclass(frozen=True)
class SqPhiId:
    pass


@dataclass(frozen=True)
class SqSigmaC:
    c: complex


@dataclass(frozen=True)
class SqZeta:
    pass


@dataclass(frozen=True)
class DetZeroSlice:
    lam: float

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("DetZeroSlice needs lam != 0")


@dataclass(frozen=True)
class DetOneSlice:
    lam: float

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("DetOneSlice needs lam != 0")


@dataclass(frozen=True)
class PhiTheta:
    theta: float


PlanarMapSpec = Union[SqPhiId, SqSigmaC, SqZeta, DetZeroSlice, DetOneSlice, PhiTheta]
PLANAR_KINDS = (SqPhiId, SqSigmaC, SqZeta, DetZeroSlice, DetOneSlice, PhiTheta)


def is_planar(spec) -> bool:
    return isinstance(spec, PLANAR_KINDS)


# ---- symmetric functions used by the lifted presets -------------------------

def psi_pasan(a: complex, b: complex) -> complex:
    return a + (b - a) ** 2


def psi_henon(a: complex, b: complex) -> complex:
    num = (3 * a**3 - a * a * b + 5 * a * b * b + b**3 - 10 * a * a - 4 * a * b
           - 10 * b * b + 12 * a + 12 * b - 8)
    return num / ((a + b - 2) * (a - b) ** 2)


# ---- evaluation ------------------------------------------------------------

def _psi(psi, a: complex, b: complex) -> complex:
    try:
        w = complex(psi(a, b))
    except (ZeroDivisionError, OverflowError) as exc:
        raise PoleOfPsi(f"psi undefined at ({a}, {b})") from exc
    if not (math.isfinite(w.real) and math.isfinite(w.imag)):
        raise PoleOfPsi(f"psi not finite at ({a}, {b})")
    return w


def _antisymmetric_limit(psi, mid: complex) -> complex:
    """Limit of (psi(a,b) - psi(b,a)) / (a - b) as a, b -> mid.

    Central differences at two steps, combined by Richardson extrapolation.
    Disagreement between the steps means psi blows up on the diagonal.
    """
    h = 1e-3 * (1 + abs(mid))
    try:
        d1 = (_psi(psi, mid + h, mid - h) - _psi(psi, mid - h, mid + h)) / (2 * h)
        d2 = (_psi(psi, mid + h / 2, mid - h / 2) - _psi(psi, mid - h / 2, mid + h / 2)) / h
    except PoleOfPsi as exc:
        raise IndeterminatePoint(f"lift undefined at repeated eigenvalue {mid}") from exc
    if abs(d1 - d2) > 1e-3 * (1 + abs(d2)):
        raise IndeterminatePoint(f"lift has no limit at repeated eigenvalue {mid}")
    return (4 * d2 - d1) / 3


def lift_apply(psi, m: Mat2, branch: int = 1) -> Mat2:
    """Conjugation-equivariant map whose action on eigenvalues is psi."""
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    delta = branch * discriminant_sqrt(m)
    tr = m.x + m.t
    xi1, xi2 = (tr + delta) / 2, (tr - delta) / 2
    if abs(delta) < LIFT_NEAR_DISC * (1 + m.norm()):
        try:
            s = _psi(psi, xi1, xi2) + _psi(psi, xi2, xi1)
        except PoleOfPsi as exc:
            raise IndeterminatePoint(f"lift undefined at repeated eigenvalue {tr / 2}") from exc
        d = _antisymmetric_limit(psi, tr / 2)
    else:
        p12, p21 = _psi(psi, xi1, xi2), _psi(psi, xi2, xi1)
        s, d = p12 + p21, (p12 - p21) / delta
    tx = m.t - m.x
    return Mat2((s - tx * d) / 2, m.y * d, m.z * d, (s + tx * d) / 2)


def _power(m: Mat2, d: int) -> Mat2:
    out, base = IDENTITY, m
    while d:
        if d & 1:
            out = mat_mul(out, base)
        d >>= 1
        if d:
            base = mat_mul(base, base)
    return out


def apply(spec: MapSpec, m: Mat2) -> Mat2:
    x, y, z, t = m.x, m.y, m.z, m.t
    match spec:
        case PhiId():
            return Mat2(x * x + y * z, y * (x + t), z * (x + t), t * t + y * z)
        case PhiDiag(lam=lam):
            s, yz = x + t, y * z
            return Mat2(lam * (x * x + yz), lam * y * s, z * s / lam, (t * t + yz) / lam)
        case PhiJordan():
            s, yz = x + t, y * z
            return Mat2(x * x + yz + z * s, y * s + t * t + yz, z * s, t * t + yz)
        case PhiPower(alpha=alpha, d=d):
            return _power(m, int(d)).scale(alpha)
        case SigmaC(c=c):
            return Mat2(x * x + y * z + c, y * (x + t), z * (x + t), t * t + y * z + c)
        case ZetaLambda(lam=lam):
            return (m + mat_inverse(m)).scale(lam)
        case Lifted(psi=psi):
            return lift_apply(psi, m)
        case PasanLift():
            return lift_apply(psi_pasan, m)
        case HenonLift():
            return lift_apply(psi_henon, m)
    raise TypeError(f"not a matrix map: {spec!r}")


def _is_scalar_zero(v) -> bool:
    return isinstance(v, (int, float, complex)) and v == 0


def sq_apply(spec: PlanarMapSpec, p):
    """Planar map on a point; numpy arrays are accepted componentwise."""
    a, b = p
    match spec:
        case SqPhiId():
            return (a * a - 2 * b, b * b)
        case SqSigmaC(c=c):
            w = a * a - 2 * b
            return (w + 2 * c, b * b + c * w + c * c)
        case SqZeta():
            if _is_scalar_zero(b):
                raise PoleOfMap("skeleton of M + 1/M is undefined at det = 0")
            return (a / b + a, b + a * a / b - 2 + 1 / b)
        case DetZeroSlice(lam=lam):
            s = a + b
            return (lam * a * s, b * s / lam)
        case DetOneSlice(lam=lam):
            return (lam * (a * a + a * b - 1), (b * b + a * b - 1) / lam)
        case PhiTheta(theta=theta):
            c, s = math.cos(theta), math.sin(theta)
            w = 2 * a * a - 1
            return (c * w - 2 * s * a * b, 2 * c * a * b + s * w)
    raise TypeError(f"not a planar map: {spec!r}")


def evaluate(spec, point):
    return sq_apply(spec, point) if is_planar(spec) else apply(spec, point)


def sup_norm(point) -> float:
    if isinstance(point, Mat2):
        return point.norm()
    return max(abs(w) for w in point)


# ---- orbits ----------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    kind: str  # Escaped | Converged | Completed | IndeterminateHit
    step: Optional[int] = None

    def __str__(self):
        return self.kind if self.step is None else f"{self.kind}({self.step})"


@dataclass(frozen=True)
class OrbitRecord:
    points: tuple
    verdict: Verdict
    final_norm: float


def orbit(spec, seed, steps: int, escape_R: float = 1e6, conv_eps: float = 1e-12) -> OrbitRecord:
    if steps < 0 or escape_R <= 0:
        raise ValueError("need steps >= 0 and escape_R > 0")
    points = [seed]
    current = seed
    for step in range(steps + 1):
        norm = sup_norm(current)
        if not math.isfinite(norm) or norm > escape_R:
            return OrbitRecord(tuple(points), Verdict("Escaped", step), norm)
        if norm < conv_eps:
            return OrbitRecord(tuple(points), Verdict("Converged", step), norm)
        if step == steps:
            break
        try:
            current = evaluate(spec, current)
        except NonFiniteValue:
            return OrbitRecord(tuple(points), Verdict("Escaped", step + 1), math.inf)
        except MatdynError:
            return OrbitRecord(tuple(points), Verdict("IndeterminateHit", step + 1), norm)
        points.append(current)
    return OrbitRecord(tuple(points), Verdict("Completed"), sup_norm(current))


def iterate(spec, point, n: int):
    for _ in range(n):
        point = evaluate(spec, point)
    return point


# ---- differentials ---------------------------------------------------------

def jacobian_fd(spec: MapSpec, m: Mat2, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian in the coordinates (x, y, z, t)."""
    if not 1e-8 <= h <= 1e-4:
        raise ValueError("step h must lie in [1e-8, 1e-4]")
    base = np.array(m.entries())
    jac = np.empty((4, 4), dtype=complex)
    for k in range(4):
        e = np.zeros(4, dtype=complex)
        e[k] = h
        plus = apply(spec, Mat2(*(base + e))).entries()
        minus = apply(spec, Mat2(*(base - e))).entries()
        jac[:, k] = (np.array(plus) - np.array(minus)) / (2 * h)
    return jac


# ---- symmetries ------------------------------------------------------------

@dataclass(frozen=True)
class SigmaP:
    p: Mat2


@dataclass(frozen=True)
class Transpose:
    pass


@dataclass(frozen=True)
class InverseMap:
    pass


@dataclass(frozen=True)
class ExchangeI:
    """(x, y, z, t) -> (t, y, z, x)."""


@dataclass(frozen=True)
class FlowFs:
    """(x, y, z, t) -> (x, e^s y, e^-s z, t)."""
    s: complex


def apply_symmetry(g, m: Mat2) -> Mat2:
    match g:
        case SigmaP(p=p):
            return mat_mul(mat_mul(p, m), mat_inverse(p))
        case Transpose():
            return m.transpose()
        case InverseMap():
            return mat_inverse(m)
        case ExchangeI():
            return Mat2(m.t, m.y, m.z, m.x)
        case FlowFs(s=s):
            e = np.exp(complex(s))
            return Mat2(m.x, e * m.y, m.z / e, m.t)
    raise TypeError(f"not a symmetry: {g!r}")


@dataclass(frozen=True)
class CommutationResult:
    holds: bool
    max_residual: float


def commutes(spec: MapSpec, g, samples: int = 1000, tol: float = 1e-10,
             seed: int = 0) -> CommutationResult:
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in random_matrices(rng, samples):
        image = apply(spec, m)
        moved = apply_symmetry(g, image)
        diff = moved - apply(spec, apply_symmetry(g, m))
        # Inverse and ill-conditioned conjugations magnify entries, so scale by both sides.
        worst = max(worst, diff.norm() / (1 + max(image.norm(), moved.norm())))
    return CommutationResult(worst <= tol, worst)


# ---- invariant functions ---------------------------------------------------

@dataclass(frozen=True)
class InvariantResiduals:
    fiber_ratio: Optional[float]
    fiber_multiplier: Optional[complex]
    trace_ratio: Optional[float]
    commutator: float


def _fiber_multiplier(spec) -> Optional[complex]:
    if isinstance(spec, PhiDiag):
        return spec.lam ** 2
    if isinstance(spec, PhiJordan):
        return None
    return 1


def invariant_residuals(spec: MapSpec, m: Mat2, tol: float = 1e-12) -> InvariantResiduals:
    """Residuals of y/z, (x-t)/z and of [Phi(M), M] along one step.

    (x-t)/z is checked for maps that commute with conjugation, which fix
    every plane spanned by Id and M.
    """
    image = apply(spec, m)
    if abs(m.z) <= tol * (1 + m.norm()) or abs(image.z) <= tol * (1 + image.norm()):
        raise DegenerateFiber("z vanishes at the point or at its image")
    mult = _fiber_multiplier(spec)
    fiber = None
    if mult is not None:
        expected = mult * m.y / m.z
        fiber = abs(image.y / image.z - expected) / (1 + abs(expected))
    trace = None
    if not isinstance(spec, (PhiDiag, PhiJordan)):
        expected = (m.x - m.t) / m.z
        trace = abs((image.x - image.t) / image.z - expected) / (1 + abs(expected))
    comm = (mat_mul(image, m) - mat_mul(m, image)).norm() / (1 + image.norm() * m.norm())
    return InvariantResiduals(fiber, mult, trace, comm)
