import math

import numpy as np
import pytest

from matdyn.errors import OutsideDomain, PointBudgetExceeded
from matdyn.maps import DetOneSlice, DetZeroSlice, PhiTheta, SqPhiId
from matdyn.raster import (
    SENTINEL, ControlTriple, ExitGrid, exit_time, grid_rows, grid_to_ppm, iterate_segment,
    pixel_centers, render,
)

DET0 = DetZeroSlice(1)
SQRT99 = math.sqrt(0.99)


class TestExitTime:
    def test_examples(self):
        c = ControlTriple(30, 10, 75)
        assert exit_time(DET0, (0.1, 0.1), c) == 75
        assert exit_time(DET0, (10, 10), ControlTriple(30, 11, 75)) == 0
        assert exit_time(PhiTheta(0), (0, 0), ControlTriple(SQRT99, 1, 10)) == 0

    def test_outside(self):
        with pytest.raises(OutsideDomain):
            exit_time(DET0, (10, 10), ControlTriple(30, 10, 75))
        with pytest.raises(OutsideDomain):
            exit_time(DET0, (25, 25), ControlTriple(30, 40, 75))

    def test_matches_vectorized(self, rng):
        c = ControlTriple(30, 10, 40)
        grid = render(DET0, c, 16, 16)
        xs = pixel_centers(16, 10)
        for ix, iy, x, y, v in grid_rows(grid):
            assert exit_time(DET0, (x, y), c) == v
        assert grid.at(3, 0) == exit_time(DET0, (xs[3], xs[-1]), c)

    def test_control(self):
        with pytest.raises(ValueError):
            ControlTriple(1, 1, 0)


class TestRender:
    def test_band_is_basin(self):
        c = ControlTriple(30, 10, 10)
        img = render(DET0, c, 64, 64).as_image()
        xs = pixel_centers(64, 10)
        x, t = np.meshgrid(xs, xs[::-1])
        assert (img[np.abs(x + t) < 1] == 10).all()
        assert (img[np.abs(x + t) > 1.5] < 10).all()

    def test_kappa_one_range(self):
        for spec, dom in ((DET0, "Square"), (PhiTheta(1.0), "UnitDisk"), (SqPhiId(), "Square")):
            grid = render(spec, ControlTriple(SQRT99 if dom == "UnitDisk" else 3, 1.2, 1), 33, 21, dom)
            assert set(np.unique(grid.values)) <= {0, 1, -1}

    def test_mirror_symmetry(self):
        img = render(PhiTheta(0), ControlTriple(SQRT99, 1, 75), 128, 128, "UnitDisk").as_image()
        assert np.array_equal(img, img[::-1])
        assert len(np.unique(img)) > 3

    def test_unit_disk_values(self):
        for th in (0.0, 1.0, math.pi / 2):
            grid = render(PhiTheta(th), ControlTriple(SQRT99, 1, 30), 64, 64, "UnitDisk")
            ok = grid.values[grid.values != SENTINEL]
            assert ok.min() >= 0 and ok.max() <= 30
            xs = pixel_centers(64, 1)
            x, y = np.meshgrid(xs, xs[::-1])
            assert (grid.as_image()[np.hypot(x, y) > 1] == SENTINEL).all()

    def test_workers_are_deterministic(self):
        c = ControlTriple(4, 2, 25)
        a = render(DetOneSlice(0.8), c, 50, 37, workers=1)
        b = render(DetOneSlice(0.8), c, 50, 37, workers=4)
        assert grid_to_ppm(a, 25) == grid_to_ppm(b, 25)

    def test_pixel_limits(self):
        with pytest.raises(ValueError):
            render(DET0, ControlTriple(30, 10, 5), 0, 4)
        with pytest.raises(ValueError):
            render(DET0, ControlTriple(30, 10, 5), 4, 4, "Triangle")

    def test_pixel_centers(self):
        assert np.allclose(pixel_centers(4, 1), [-0.75, -0.25, 0.25, 0.75])


class TestPpm:
    @staticmethod
    def _one(value):
        return ExitGrid(1, 1, (-1, 1, -1, 1), np.array([value]))

    def test_red_ends(self):
        body = grid_to_ppm(self._one(0), 8)[-3:]
        assert body == bytes([255, 0, 0]) == grid_to_ppm(self._one(8), 8)[-3:]

    def test_cyan_middle(self):
        assert grid_to_ppm(self._one(5), 10)[-3:] == bytes([0, 255, 255])

    def test_sentinel(self):
        assert grid_to_ppm(self._one(SENTINEL), 10) == b"P6\n1 1\n255\n\x00\x00\x00"

    def test_layout(self):
        grid = render(DET0, ControlTriple(30, 10, 10), 5, 3)
        data = grid_to_ppm(grid, 10)
        header = b"P6\n5 3\n255\n"
        assert data.startswith(header) and len(data) == len(header) + 45

    def test_csv_rows(self):
        grid = render(DET0, ControlTriple(30, 10, 10), 3, 2)
        rows = list(grid_rows(grid))
        assert [(r[0], r[1]) for r in rows] == [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 1)]
        assert rows[0][3] > rows[-1][3]


class TestSegment:
    def test_accumulates_near_circle(self):
        lines = iterate_segment(math.pi / 2, 0.6, 11)
        assert len(lines) == 12
        frac = [float(np.mean(np.hypot(*ln.T) > 0.95)) for ln in lines]
        assert frac[0] < 0.1
        # measured: 0.835 at refine 1e-2, 201 samples
        assert abs(frac[11] - 0.835) <= 0.02
        assert frac[11] > frac[5] > frac[0]

    def test_collapsed_diameter(self):
        lines = iterate_segment(0.0, 0.0, 2)
        assert np.allclose(lines[1], [-1, 0], atol=1e-15)
        assert np.allclose(lines[2], [1, 0], atol=1e-15)

    def test_chord(self):
        (chord,) = iterate_segment(0.3, 0.6, 0, samples=11)
        assert np.allclose(chord[:, 0], 0.6)
        assert np.allclose(chord[[0, -1], 1], [-0.8, 0.8])

    def test_refinement_gap(self):
        for line in iterate_segment(1.0, -0.3, 5, refine_eps=5e-3)[1:]:
            assert np.hypot(*np.diff(line, axis=0).T).max() <= 5e-3

    def test_budget(self):
        with pytest.raises(PointBudgetExceeded):
            iterate_segment(math.pi / 2, 0.6, 11, budget=2000)

    def test_arguments(self):
        with pytest.raises(ValueError):
            iterate_segment(0.0, 1.0, 3)
