import cmath
import math

import numpy as np
import pytest

from matdyn.basin import (
    basin_classify_phi_id, classify_lambda_set, empirical_basin, qk_quadric_probe,
    sigma_membership, sigma_param, sigma_residual,
)
from matdyn.core import IDENTITY, Mat2, conjugate, det, eigenvalues, invariants, random_matrices
from matdyn.errors import PoleOfPsi
from matdyn.maps import HenonLift, PhiDiag, PhiId, PhiJordan
from matdyn.periodic import periodic_phi_id


def _with_eigenvalues(rng, l1, l2):
    p = random_matrices(rng, 1)[0]
    while abs(det(p)) < 0.1:
        p = random_matrices(rng, 1)[0]
    return conjugate(p, Mat2.diag(l1, l2))


class TestBasinClassify:
    def test_examples(self):
        assert basin_classify_phi_id(Mat2(0, 1, 0, 0)).tag == "Interior"
        assert basin_classify_phi_id(Mat2.diag(cmath.exp(0.7j), 0.5)).tag == "Boundary"
        v = basin_classify_phi_id(Mat2.diag(2, 0.1))
        assert v.tag == "OutsideClosure" and v.max_eig_modulus == 2

    def test_both_on_circle_is_boundary(self):
        assert basin_classify_phi_id(Mat2.diag(1j, -1)).tag == "Boundary"

    def test_periodic_points_on_boundary(self):
        for n in range(1, 5):
            for p in periodic_phi_id(n):
                if p.family != "Zero":
                    assert basin_classify_phi_id(p.point).tag == "Boundary"

    def test_agrees_with_iteration(self, rng):
        checked = 0
        while checked < 1000:
            m = random_matrices(rng, 1, 1.6)[0]
            v = basin_classify_phi_id(m)
            if 0.95 <= v.max_eig_modulus <= 1.05:
                continue
            checked += 1
            got = empirical_basin(PhiId(), m, 60, 1e8, 1e-8)
            assert got == ("Converged" if v.tag == "Interior" else "Escaped")


class TestSigma:
    def test_examples(self):
        assert sigma_membership(1, 0) and sigma_membership(2, 1)
        assert not sigma_membership(2, 0)

    def test_parametrization(self):
        p = sigma_param(0, 0)
        assert (p.b, p.c) == (1, 0)
        p = sigma_param(0, 1)
        assert (p.b, p.c) == (2, 1)
        p = sigma_param(math.pi / 2, 0.5)
        assert abs(p.b - (0.5 + 1j)) < 1e-15 and abs(p.c - 0.5j) < 1e-15
        assert sigma_membership(p.b, p.c)

    def test_image_is_inside(self, rng):
        for th, r, a in rng.random((10_000, 3)):
            u = math.sqrt(r) * cmath.exp(2j * math.pi * a)
            p = sigma_param(2 * math.pi * th, u)
            assert sigma_membership(p.b, p.c, 1e-10)

    def test_outside_when_root_too_large(self, rng):
        for th, r, a in rng.random((2000, 3)):
            u = (1 + 1e-3 + 2 * r) * cmath.exp(2j * math.pi * a)
            p = sigma_param(2 * math.pi * th, u)
            assert not sigma_membership(p.b, p.c, 1e-10)

    def test_circle_action(self, rng):
        for th, r, a, s in rng.random((2000, 4)):
            p = sigma_param(2 * math.pi * th, math.sqrt(r) * cmath.exp(2j * math.pi * a))
            w = cmath.exp(2j * math.pi * s)
            assert abs(sigma_residual(p.b * w, p.c * w * w) - sigma_residual(p.b, p.c)) <= 1e-12
            assert sigma_membership(p.b * w, p.c * w * w)


class TestLambdaStrata:
    def test_examples(self):
        assert classify_lambda_set(Mat2(cmath.exp(0.3j), 0, 0, 0)) == "Lambda0"
        assert classify_lambda_set(IDENTITY) == "Lambda1"
        assert classify_lambda_set(Mat2.diag(1j, -1j)) == "Lambda2"
        assert classify_lambda_set(Mat2.diag(2, 0.5)) is None

    def test_unipotent_unit(self):
        assert classify_lambda_set(Mat2(-1, 1, 0, -1)) == "Lambda1"

    def test_strata_match_sigma_on_unit_det(self, rng):
        for k in range(1000):
            a, b = 2 * math.pi * rng.random(2)
            rho = 1.0 if k % 2 else 1 + rng.random()
            m = _with_eigenvalues(rng, rho * cmath.exp(1j * a), cmath.exp(1j * b) / rho)
            inv = invariants(m)
            member = sigma_membership(inv.trace, inv.det, 1e-9) and abs(abs(inv.det) - 1) <= 1e-9
            assert (classify_lambda_set(m, 1e-9) in ("Lambda1", "Lambda2")) == member


class TestEmpirical:
    def test_small_polydisk_converges(self, rng):
        for m in random_matrices(rng, 200, 0.25):
            assert empirical_basin(PhiDiag(2), m, 60, 1e8, 1e-8) == "Converged"

    def test_large_det_escapes(self, rng):
        for m in random_matrices(rng, 500, 3.0):
            if abs(det(m)) > 1.01:
                assert empirical_basin(PhiDiag(2), m, 60, 1e8, 1e-8) == "Escaped"

    def test_jordan_bounded_family(self):
        assert empirical_basin(PhiJordan(), Mat2(0.5, -0.5, 0, 0.5), 60, 1e8, 1e-8) == "Converged"

    def test_undecided(self):
        assert empirical_basin(PhiId(), IDENTITY, 5, 10, 1e-3) == "Undecided"

    def test_errors_propagate(self):
        with pytest.raises(PoleOfPsi):
            empirical_basin(HenonLift(), Mat2.diag(0.5, 1.5), 5, 10, 1e-3)

    def test_arguments(self):
        with pytest.raises(ValueError):
            empirical_basin(PhiId(), IDENTITY, 0, 10, 1e-3)


class TestQuadric:
    def test_example(self):
        probe = qk_quadric_probe(2, Mat2(1, 2, -2, -4), 1)
        assert probe.on_quadric and probe.collapse_step == 2

    def test_off_quadric(self):
        probe = qk_quadric_probe(2, IDENTITY, 1)
        assert not probe.on_quadric and probe.collapse_step is None

    def test_collapse_index_is_k_plus_one(self):
        # Dyadic points make every step exact.
        for k in range(0, 6):
            m = Mat2(1, 2, -(4.0**k) / 2, -(4.0**k))
            assert qk_quadric_probe(2, m, k) == type(qk_quadric_probe(2, m, k))(True, k + 1)

    def test_collapse_with_rounding(self, rng):
        for k in range(0, 5):
            for x, y in rng.normal(size=(10, 2)):
                lam = 1.5
                t = -lam ** (2 * k) * x
                m = Mat2(x, y, x * t / y, t)
                probe = qk_quadric_probe(lam, m, k)
                assert probe.on_quadric and probe.collapse_step == k + 1

    def test_nonzero_lambda(self):
        with pytest.raises(ValueError):
            qk_quadric_probe(0, IDENTITY, 1)
