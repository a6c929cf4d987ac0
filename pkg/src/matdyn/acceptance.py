"""Acceptance checks, runnable from pytest or from ``matdyn selftest``.

Each check returns a :class:`CriterionResult`. Reference values come from
independent formulas written out here (closed forms, direct expansion) rather
than from the code under test.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import basin, periodic, quat, raster
from .core import Mat2, conjugate, det, invariants, jordan_classify, JordanType, random_matrices
from .maps import (
    DetZeroSlice, HenonLift, PasanLift, PhiDiag, PhiId, PhiJordan, PhiTheta, SigmaC,
    SqPhiId, SqSigmaC, apply, iterate, jacobian_fd, lift_apply, psi_pasan, sq_apply,
)

DEFAULT_SEED = 20240601
J = cmath.exp(2j * math.pi / 3)


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"criterion {self.number:2d} {self.name}: {'PASS' if self.passed else 'FAIL'} ({self.detail})"


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / (1 + abs(b))


# ---- closed-form references -------------------------------------------------

def pasan_closed(m: Mat2) -> Mat2:
    g = (m.t - m.x) ** 2 + 4 * m.y * m.z
    return Mat2(m.x + g, m.y, m.z, m.t + g)


def henon_closed(m: Mat2) -> Mat2:
    x, y, z, t = m.entries()
    g, s = (t - x) ** 2 + 4 * y * z, t + x - 2
    den = g * s
    e11 = (3 * x**3 + t**3 + 5 * x * t * t + 8 * x * y * z - x * x * t - 4 * x * t
           - 10 * (t * t + x * x) - 16 * y * z + 12 * (t + x) - 8) / den
    e22 = (x**3 + 3 * t**3 - x * t * t + 5 * x * x * t + 8 * y * z * t
           - 10 * (x * x + t * t) - 4 * x * t - 16 * y * z + 12 * (t + x) - 8) / den
    return Mat2(e11, 2 * y / s, 2 * z / s, e22)


def condition_number(p: Mat2) -> float:
    """Spectral condition number of a 2x2 matrix from its Frobenius norm and det."""
    f2 = sum(abs(w) ** 2 for w in p.entries())
    d = abs(det(p))
    if d == 0:
        return math.inf
    return (f2 + math.sqrt(max(f2 * f2 - 4 * d * d, 0.0))) / (2 * d)


def _unitary(rng) -> np.ndarray:
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    r = math.hypot(abs(a), abs(b))
    a, b = a / r, b / r
    w = cmath.exp(2j * math.pi * rng.random())
    return np.array([[a, b], [-b.conjugate() * w, a.conjugate() * w]])


def conditioned_matrix(rng, max_cond: float) -> Mat2:
    """Random invertible matrix with condition number at most max_cond."""
    s = np.diag([1.0, max_cond ** -rng.random()])
    p = _unitary(rng) @ s @ _unitary(rng)
    return Mat2(*map(complex, p.reshape(-1)))


# ---- criteria ---------------------------------------------------------------

def c01_determinant(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    samples = random_matrices(rng, 10_000)
    worst = 0.0
    for spec in (PhiId(), PhiDiag(2), PhiDiag(1 + 1j), PhiDiag(0.3 - 0.7j), PhiJordan()):
        for m in samples:
            d = det(m)
            worst = max(worst, abs(det(apply(spec, m)) - d * d) / abs(d * d))
    return CriterionResult(1, "determinant squares", worst <= 1e-11, f"max rel err {worst:.2e}")


def c02_equivariance(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    spec, worst, count = PhiId(), 0.0, 0
    ms = random_matrices(rng, 10_000)
    while count < 10_000:
        if count % 2:
            p = conditioned_matrix(rng, 1e3)
        else:
            p = random_matrices(rng, 1)[0]
            if condition_number(p) > 1e3:
                continue
        m = ms[count]
        count += 1
        a, b = apply(spec, conjugate(p, m)), conjugate(p, apply(spec, m))
        worst = max(worst, (a - b).norm() / (1 + max(a.norm(), b.norm())))
    return CriterionResult(2, "conjugation equivariance", worst <= 1e-10, f"max scaled err {worst:.2e}")


def c03_skeleton(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    c = 0.25 + 0.1j
    worst = 0.0
    for m in random_matrices(rng, 10_000):
        for spec, sq in ((PhiId(), SqPhiId()), (SigmaC(c), SqSigmaC(c))):
            inv = invariants(apply(spec, m))
            base = invariants(m)
            u, v = sq_apply(sq, (base.trace, base.det))
            worst = max(worst, _rel(inv.trace, u), _rel(inv.det, v))
    return CriterionResult(3, "skeleton squares commute", worst <= 1e-11, f"max err {worst:.2e}")


def c04_jacobian(seed: int = DEFAULT_SEED) -> CriterionResult:
    lam = 2.0
    jac = jacobian_fd(PhiDiag(lam), Mat2.diag(1 / lam, lam), 1e-6)
    expected = np.diag([2, lam * (lam + 1 / lam), (lam + 1 / lam) / lam, 2])
    err_fixed = float(np.abs(jac - expected).max())
    rng = np.random.default_rng(seed)
    err_det = 0.0
    for m in random_matrices(rng, 100):
        inv = invariants(m)
        ref = 4 * inv.trace**2 * inv.det
        got = np.linalg.det(jacobian_fd(PhiId(), m, 1e-6))
        err_det = max(err_det, abs(got - ref) / abs(ref))
    ok = err_fixed <= 1e-5 and err_det <= 1e-5
    return CriterionResult(4, "finite-difference jacobians", ok,
                           f"fixed-point err {err_fixed:.2e}, det rel err {err_det:.2e}")


def c05_lifts(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    closed = branch = 0.0
    n = 0
    while n < 1000:
        m = random_matrices(rng, 1, 2.0)[0]
        if jordan_classify(m) is not JordanType.DiagonalizableDistinct:
            continue
        n += 1
        ref = pasan_closed(m)
        got = apply(PasanLift(), m)
        closed = max(closed, (got - ref).norm() / (1 + ref.norm()))
        other = lift_apply(psi_pasan, m, -1)
        branch = max(branch, (got - other).norm() / (1 + got.norm()))
    henon = 0.0
    n = 0
    while n < 1000:
        m = random_matrices(rng, 1, 2.0)[0]
        if abs((m.t - m.x) ** 2 + 4 * m.y * m.z) < 0.1 or abs(m.t + m.x - 2) < 0.1:
            continue
        n += 1
        ref = henon_closed(m)
        henon = max(henon, (apply(HenonLift(), m) - ref).norm() / (1 + ref.norm()))
    ok = closed <= 1e-10 and branch <= 1e-9 and henon <= 1e-8
    return CriterionResult(5, "lift formulas", ok,
                           f"pasan {closed:.2e}, branch {branch:.2e}, henon {henon:.2e}")


def _expand(points: list[periodic.PeriodicPoint]) -> list[tuple[Mat2, int]]:
    """Closed-form points, with line families sampled at a few parameter values."""
    out = []
    for p in points:
        m = p.point
        if p.free_entry == "y":
            out += [(Mat2(m.x, s, m.z, m.t), p.period) for s in (1, 0.5, -2j)]
        elif p.free_entry == "z":
            out += [(Mat2(m.x, m.y, s, m.t), p.period) for s in (1, 0.5, -2j)]
        else:
            out.append((m, p.period))
    return out


def _match(found: list[periodic.PeriodicPoint], expected: list[tuple[Mat2, int]]) -> bool:
    if len(found) != len(expected):
        return False
    remaining = list(expected)
    for f in found:
        hit = next((i for i, (m, per) in enumerate(remaining)
                    if (m - f.point).norm() <= 1e-12 and per == f.period), None)
        if hit is None:
            return False
        remaining.pop(hit)
    return True


def c06_periodic_oracle(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    cases = [(PhiId(), n, periodic.periodic_phi_id(n)) for n in range(1, 5)]
    cases += [(PhiDiag(2), n, periodic.periodic_phi_diag(2, n)) for n in range(1, 4)]
    ok, worst = True, 0.0
    for spec, n, closed in cases:
        expected = _expand(closed)
        picks = rng.integers(len(expected), size=10_000)
        noise = 1e-3 * (rng.normal(size=(10_000, 4)) + 1j * rng.normal(size=(10_000, 4)))
        cloud = [Mat2(*(np.array(expected[k][0].entries()) + e)) for k, e in zip(picks, noise)]
        found = periodic.brute_force_cycles(spec, [m for m, _ in expected] + cloud, n, 1e-9)
        worst = max([worst] + [f.residual for f in found])
        ok = ok and _match(found, expected)
    ok = ok and worst <= 1e-9
    return CriterionResult(6, "periodic points vs oracle", ok, f"max residual {worst:.2e}")


def c07_jordan(seed: int = DEFAULT_SEED) -> CriterionResult:
    b_err = 0.0
    for n in range(1, 7):
        order = 2**n - 1
        roots = np.exp(2j * np.pi * np.arange(order) / order)
        xs, ts = np.meshgrid(roots, roots, indexing="ij")
        b, _ = periodic.jordan_B_C(xs, ts, n)
        distinct = ~np.eye(order, dtype=bool)
        if distinct.any():
            b_err = max(b_err, float(np.abs(b[distinct] - 1).max()))
    _, c2 = periodic.jordan_B_C(1, J, 2)
    c_err = abs(c2 - (2 * J + J * J))
    rng = np.random.default_rng(seed)
    it_err = 0.0
    for m in random_matrices(rng, 200):
        x, y = m.x, m.y
        for n in range(1, 7):
            got = iterate(PhiJordan(), Mat2(x, y, 0, x), n)
            k = 2**n
            scale = x ** (k - 1)
            ref = Mat2(scale * x, scale * ((k - 1) * x + k * y), 0, scale * x)
            it_err = max(it_err, (got - ref).norm() / (1 + ref.norm()))
    ok = b_err <= 1e-10 and c_err <= 1e-12 and it_err <= 1e-9
    return CriterionResult(7, "unipotent twist identities", ok,
                           f"B {b_err:.2e}, C2 {c_err:.2e}, orbit {it_err:.2e}")


def c08_sigma_lambda(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    thetas = 2 * np.pi * rng.random(10_000)
    us = np.sqrt(rng.random(10_000)) * np.exp(2j * np.pi * rng.random(10_000))
    shifts = 2 * np.pi * rng.random(10_000)
    members = rotated = True
    for th, u, s in zip(thetas, us, shifts):
        p = basin.sigma_param(float(th), complex(u))
        members &= basin.sigma_membership(p.b, p.c, 1e-10)
        w = cmath.exp(1j * s)
        rotated &= basin.sigma_membership(p.b * w, p.c * w * w, 1e-10)
    boundary = all(basin.basin_classify_phi_id(p.point).tag == "Boundary"
                   for n in range(1, 5) for p in periodic.periodic_phi_id(n)
                   if p.family != "Zero")
    ok = bool(members and rotated and boundary)
    return CriterionResult(8, "sigma and lambda sets", ok,
                           f"membership {bool(members)}, circle action {bool(rotated)}, boundary {boundary}")


def c09_det0_band(seed: int = DEFAULT_SEED, workers: int = 4) -> CriterionResult:
    control = raster.ControlTriple(30.0, 10.0, 75)
    grid = raster.render(DetZeroSlice(1.0), control, 400, 400, "Square", workers)
    img = grid.as_image()
    xs = raster.pixel_centers(400, 10.0)
    gx, gt = np.meshgrid(xs, xs[::-1])
    s = np.abs(gx + gt)
    inner = img[s < 0.95]
    outer = img[(s > 1.05) & (np.abs(gx) < 9) & (np.abs(gt) < 9)]
    ok = bool((inner == 75).all() and (outer < 75).all())
    return CriterionResult(9, "det=0 slice basin band", ok,
                           f"{inner.size} band pixels, {outer.size} outside pixels")


def c10_phi_theta_catalog(seed: int = DEFAULT_SEED) -> CriterionResult:
    worst, moved = 0.0, math.inf
    for th in (0.3, 0.5, 1.0, 1.3):
        cat = quat.phi_theta_two_periodic(th)
        if len(cat.points) != 7:
            return CriterionResult(10, "phi_theta catalog", False, f"{len(cat.points)} points")
        for cp in cat.points:
            p = cp.point
            q = quat.phi_theta(th, quat.phi_theta(th, p))
            worst = max(worst, math.hypot(q[0] - p[0], q[1] - p[1]))
            if cp.tag[0] in "cd":
                f = quat.phi_theta(th, p)
                moved = min(moved, math.hypot(f[0] - p[0], f[1] - p[1]))
    fixed = sorted(cp.point for cp in quat.phi_theta_fixed_points(math.pi / 2))
    target = sorted([(0.0, -1.0), (0.5, -0.5), (-0.5, -0.5)])
    fixed_err = max(max(abs(a - b) for a, b in zip(p, q)) for p, q in zip(fixed, target))
    ok = worst <= 1e-9 and moved > 1e-6 and fixed_err <= 1e-12
    return CriterionResult(10, "phi_theta catalog", ok,
                           f"2-cycle err {worst:.2e}, min move {moved:.2e}, fixed err {fixed_err:.2e}")


def c11_t_product(seed: int = DEFAULT_SEED) -> CriterionResult:
    peak = max(abs(quat.t_n_lambda(0.5, J, n)) for n in range(0, 31) if n >= 1)
    return CriterionResult(11, "T-product bound", peak < 1, f"max |T_n| {peak:.6f}")


def c12_render_symmetry(seed: int = DEFAULT_SEED) -> CriterionResult:
    control = raster.ControlTriple(math.sqrt(0.99), 1.0, 75)
    first = raster.render(PhiTheta(0.0), control, 128, 128, "UnitDisk", 1)
    second = raster.render(PhiTheta(0.0), control, 128, 128, "UnitDisk", 4)
    ppm1, ppm2 = raster.grid_to_ppm(first, 75), raster.grid_to_ppm(second, 75)
    img = first.as_image()
    mirror = bool((img == img[::-1]).all())
    values = img[img != raster.SENTINEL]
    nonconstant = values.min() != values.max()
    xs = raster.pixel_centers(128, 1.0)
    gx, gy = np.meshgrid(xs, xs[::-1])
    r = np.hypot(gx, gy)
    ring = (r >= math.sqrt(0.99)) & (r <= 1)
    rgb = np.frombuffer(ppm1, dtype=np.uint8)[-128 * 128 * 3:].reshape(128, 128, 3)
    red = bool(ring.any() and (rgb[ring] == [255, 0, 0]).all())
    ok = ppm1 == ppm2 and mirror and nonconstant and red
    return CriterionResult(12, "render determinism and symmetry", ok,
                           f"identical {ppm1 == ppm2}, mirror {mirror}, nonconstant {nonconstant}, red ring {red}")


def c13_bounded_orbits(seed: int = DEFAULT_SEED) -> CriterionResult:
    rng = np.random.default_rng(seed)
    lam = 0.5
    spec = PhiDiag(lam)
    peak = 0.0
    for _ in range(200):
        x = complex(math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random()))
        u = complex(math.sqrt(rng.random()) * cmath.exp(2j * math.pi * rng.random()))
        # Blow-up chart (x, u, v) -> (X, Y, T) = (x, x u, x v), then X = lam x_m, T = t_m / lam.
        m = Mat2(x / lam, x * u, 0, lam * x * J)
        for _ in range(30):
            m = apply(spec, m)
            peak = max(peak, m.norm())
    drift = 0.0
    for lam_t in (2.0, 1 + 1j, cmath.exp(0.7j)):
        spec_t = PhiDiag(lam_t)
        for _ in range(50):
            a, b = 2 * math.pi * rng.random(2)
            m = Mat2.diag(cmath.exp(1j * a) / lam_t, lam_t * cmath.exp(1j * b))
            for _ in range(20):
                m = apply(spec_t, m)
                drift = max(drift, abs(abs(m.x) - 1 / abs(lam_t)), abs(abs(m.t) - abs(lam_t)),
                            abs(m.y), abs(m.z))
    ok = peak <= 4 and drift <= 1e-9
    return CriterionResult(13, "bounded orbit witnesses", ok,
                           f"max sup-norm {peak:.3f}, torus drift {drift:.2e}")


CRITERIA: list[Callable[..., CriterionResult]] = [
    c01_determinant, c02_equivariance, c03_skeleton, c04_jacobian, c05_lifts,
    c06_periodic_oracle, c07_jordan, c08_sigma_lambda, c09_det0_band,
    c10_phi_theta_catalog, c11_t_product, c12_render_symmetry, c13_bounded_orbits,
]


def run_all(seed: int = DEFAULT_SEED) -> list[CriterionResult]:
    return [check(seed) for check in CRITERIA]
