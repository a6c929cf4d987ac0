"""Exit-time images of planar maps and iterated segments of phi_theta."""
from __future__ import annotations

import colorsys
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import OutsideDomain, PointBudgetExceeded
from .maps import PhiTheta, sq_apply

SENTINEL = -1
POINT_BUDGET = 10**6


@dataclass(frozen=True)
class ControlTriple:
    escape_R: float
    window_half: float
    kappa: int

    def __post_init__(self):
        if not (self.escape_R > 0 and self.window_half > 0 and self.kappa >= 1):
            raise ValueError("need escape_R > 0, window_half > 0 and kappa >= 1")


@dataclass(frozen=True)
class ExitGrid:
    """Row-major exit times; row 0 is the top (largest y) row."""
    width: int
    height: int
    window: tuple[float, float, float, float]
    values: np.ndarray

    def at(self, ix: int, iy: int) -> int:
        return int(self.values[iy * self.width + ix])

    def as_image(self) -> np.ndarray:
        return self.values.reshape(self.height, self.width)


def _radius(a, b):
    return np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)


def exit_time(spec, m, control: ControlTriple) -> int:
    """Largest n <= kappa with the first n iterates all inside the open escape disk."""
    a, b = m
    rho, r = control.window_half, control.escape_R
    if not (abs(a) < rho and abs(b) < rho) or not math.hypot(abs(a), abs(b)) < r:
        raise OutsideDomain(f"{m} is outside the window or the escape disk")
    with np.errstate(all="ignore"):
        for k in range(1, control.kappa + 1):
            a, b = sq_apply(spec, (a, b))
            if not math.hypot(abs(a), abs(b)) < r:
                return k - 1
    return control.kappa


def _exit_times(spec, a: np.ndarray, b: np.ndarray, control: ControlTriple) -> np.ndarray:
    out = np.full(a.shape, control.kappa, dtype=np.int64)
    idx = np.arange(a.size)
    with np.errstate(all="ignore"):
        for k in range(1, control.kappa + 1):
            if idx.size == 0:
                break
            a, b = sq_apply(spec, (a, b))
            gone = ~(_radius(a, b) < control.escape_R)
            out[idx[gone]] = k - 1
            keep = ~gone
            idx, a, b = idx[keep], a[keep], b[keep]
    return out


def pixel_centers(n: int, half: float) -> np.ndarray:
    """Centers of n cells covering [-half, half], in increasing order."""
    return half * ((2 * np.arange(n) + 1) / n - 1)


def render(spec, control: ControlTriple, px_w: int, px_h: int,
           domain: str = "Square", workers: int = 1) -> ExitGrid:
    """Exit time at every pixel center.

    Pixels outside the unit disk (domain ``UnitDisk``) get the sentinel -1.
    Pixels inside the window but outside the escape disk get 0.
    """
    if not (1 <= px_w <= 16384 and 1 <= px_h <= 16384):
        raise ValueError("pixel dimensions must lie in [1, 16384]")
    if domain not in ("Square", "UnitDisk"):
        raise ValueError("domain is Square or UnitDisk")
    rho = control.window_half
    xs = pixel_centers(px_w, rho)
    ys = pixel_centers(px_h, rho)[::-1]
    gx, gy = np.meshgrid(xs, ys)
    values = np.empty((px_h, px_w), dtype=np.int64)

    def rows(lo: int, hi: int):
        a, b = gx[lo:hi], gy[lo:hi]
        block = np.zeros(a.shape, dtype=np.int64)
        inside = _radius(a, b) < control.escape_R
        block[inside] = _exit_times(spec, a[inside], b[inside], control)
        if domain == "UnitDisk":
            block[_radius(a, b) > 1] = SENTINEL
        values[lo:hi] = block

    step = max(1, -(-px_h // max(1, workers)))
    bounds = [(lo, min(px_h, lo + step)) for lo in range(0, px_h, step)]
    if workers <= 1:
        for lo, hi in bounds:
            rows(lo, hi)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda bd: rows(*bd), bounds))
    return ExitGrid(px_w, px_h, (-rho, rho, -rho, rho), values.reshape(-1))


def _palette(kappa: int) -> np.ndarray:
    table = np.empty((kappa + 1, 3), dtype=np.uint8)
    for k in range(kappa + 1):
        rgb = colorsys.hsv_to_rgb((k / kappa) % 1.0, 1.0, 1.0)
        table[k] = [round(255 * c) for c in rgb]
    return table


def grid_to_ppm(grid: ExitGrid, kappa: int) -> bytes:
    table = _palette(kappa)
    vals = np.asarray(grid.values)
    rgb = np.zeros((vals.size, 3), dtype=np.uint8)
    ok = vals != SENTINEL
    rgb[ok] = table[vals[ok]]
    header = f"P6\n{grid.width} {grid.height}\n255\n".encode("ascii")
    return header + rgb.tobytes()


def grid_rows(grid: ExitGrid):
    """Yield (ix, iy, x, y, value) per pixel in row-major order."""
    xmin, xmax, ymin, ymax = grid.window
    xs = pixel_centers(grid.width, xmax)
    ys = pixel_centers(grid.height, ymax)[::-1]
    for iy in range(grid.height):
        for ix in range(grid.width):
            yield ix, iy, float(xs[ix]), float(ys[iy]), grid.at(ix, iy)


def _phi_power(theta: float, a: np.ndarray, b: np.ndarray, n: int):
    spec = PhiTheta(theta)
    for _ in range(n):
        a, b = sq_apply(spec, (a, b))
    return a, b


def iterate_segment(theta: float, x1: float, iters: int, refine_eps: float = 1e-2,
                    samples: int = 201, budget: int = POINT_BUDGET) -> list[np.ndarray]:
    """Images of the vertical chord at x1 under phi_theta, as (N, 2) polylines.

    Each image is refined by inserting parameter midpoints along the chord
    until consecutive image points are at most refine_eps apart.
    """
    if not abs(x1) < 1 or iters < 0 or refine_eps <= 0:
        raise ValueError("need |x1| < 1, iters >= 0 and refine_eps > 0")
    h = math.sqrt(1 - x1 * x1)
    params = np.linspace(-h, h, samples)
    pts = np.column_stack([np.full(samples, x1), params])
    lines = [pts]
    total = samples
    for k in range(1, iters + 1):
        a, b = sq_apply(PhiTheta(theta), (pts[:, 0], pts[:, 1]))
        img = np.column_stack([a, b])
        for _ in range(64):
            gaps = np.hypot(*np.diff(img, axis=0).T) > refine_eps
            if not gaps.any():
                break
            where = np.nonzero(gaps)[0]
            mids = (params[where] + params[where + 1]) / 2
            if total + img.shape[0] + mids.size > budget:
                raise PointBudgetExceeded(f"more than {budget} points needed at image {k}")
            ma, mb = _phi_power(theta, np.full(mids.size, x1), mids, k)
            params = np.insert(params, where + 1, mids)
            img = np.insert(img, where + 1, np.column_stack([ma, mb]), axis=0)
        total += img.shape[0]
        if total > budget:
            raise PointBudgetExceeded(f"more than {budget} points needed at image {k}")
        lines.append(img)
        pts = img
    return lines
