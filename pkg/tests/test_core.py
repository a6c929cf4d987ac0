import cmath

import numpy as np
import pytest
from hypothesis import given

from matdyn.core import (
    IDENTITY, ZERO, JordanType, Mat2, conjugate, det, eigenvalues, invariants,
    jordan_classify, mat_inverse, mat_mul, random_matrices,
)
from matdyn.errors import NonFiniteValue, SingularMatrix

from conftest import close, matrices


class TestMat2:
    def test_rejects_non_finite(self):
        with pytest.raises(NonFiniteValue):
            Mat2(float("nan"), 0, 0, 0)
        with pytest.raises(NonFiniteValue):
            Mat2(0, complex(0, float("inf")), 0, 0)

    def test_text_round_trip(self):
        m = Mat2.parse("1,2,3,4,5,6,7,8")
        assert m == Mat2(1 + 2j, 3 + 4j, 5 + 6j, 7 + 8j)
        assert m.reals() == [1, 2, 3, 4, 5, 6, 7, 8]

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            Mat2.from_reals([1, 2, 3])

    def test_sup_norm(self):
        assert Mat2(1, -3j, 2, 0).norm() == 3


class TestProducts:
    def test_identity(self):
        m = Mat2(1, 2j, 3, 4)
        assert mat_mul(IDENTITY, m) == m

    def test_nilpotent_square(self):
        n = Mat2(0, 1, 0, 0)
        assert mat_mul(n, n) == ZERO

    def test_unipotent_square(self):
        u = Mat2(1, 1, 0, 1)
        assert mat_mul(u, u) == Mat2(1, 2, 0, 1)


class TestInverse:
    def test_examples(self):
        assert mat_inverse(IDENTITY) == IDENTITY
        assert mat_inverse(Mat2.diag(2, 0.5)) == Mat2.diag(0.5, 2)
        assert mat_inverse(Mat2(1, 1, 0, 1)) == Mat2(1, -1, 0, 1)

    def test_singular(self):
        with pytest.raises(SingularMatrix):
            mat_inverse(Mat2(1, 2, 2, 4))

    def test_residual(self, rng):
        for m in random_matrices(rng, 1000):
            if abs(det(m)) < 1e-3:
                continue
            assert (mat_mul(m, mat_inverse(m)) - IDENTITY).norm() <= 1e-12 * (1 + m.norm()) / abs(det(m))

    def test_involution(self, rng):
        for m in random_matrices(rng, 1000, 3.0):
            if not 1e-3 <= abs(det(m)) <= 1e3:
                continue
            assert close(mat_inverse(mat_inverse(m)), m, 1e-10)


class TestInvariants:
    def test_examples(self):
        assert invariants(IDENTITY).trace == 2 and invariants(IDENTITY).det == 1
        nil = invariants(Mat2(0, 1, 0, 0))
        assert (nil.trace, nil.det) == (0, 0)
        inv = invariants(Mat2(1, 2, 3, 4))
        assert (inv.trace, inv.det) == (5, -2)

    def test_similarity_invariance(self, rng):
        for p, m in zip(random_matrices(rng, 500), random_matrices(rng, 500)):
            if abs(det(p)) < 1e-2:
                continue
            a, b = invariants(conjugate(p, m)), invariants(m)
            assert abs(a.trace - b.trace) <= 1e-10 * (1 + abs(b.trace))
            assert abs(a.det - b.det) <= 1e-10 * (1 + abs(b.det))


class TestEigenvalues:
    def test_diagonal(self):
        ev = eigenvalues(Mat2.diag(2, 1))
        assert (ev.l1, ev.l2, ev.repeated) == (1, 2, False)

    def test_unipotent(self):
        ev = eigenvalues(Mat2(1, 1, 0, 1))
        assert ev.repeated and ev.l1 == ev.l2 == 1

    def test_rotation_order(self):
        ev = eigenvalues(Mat2(0, 1, -1, 0))
        assert abs(ev.l1 + 1j) < 1e-15 and abs(ev.l2 - 1j) < 1e-15

    def test_roots_of_characteristic_polynomial(self, rng):
        for m in random_matrices(rng, 10_000):
            inv, ev = invariants(m), eigenvalues(m)
            for lam in (ev.l1, ev.l2):
                scale = abs(lam) ** 2 + abs(inv.trace * lam) + abs(inv.det)
                assert abs(lam * lam - inv.trace * lam + inv.det) <= 1e-12 * (1 + scale)
            assert (ev.l1.real, ev.l1.imag) <= (ev.l2.real, ev.l2.imag)

    def test_small_root_is_accurate(self):
        ev = eigenvalues(Mat2.diag(1e8, 1e-8))
        assert abs(ev.l1 - 1e-8) <= 1e-20


class TestConjugateAndJordan:
    def test_conjugate_examples(self):
        m = Mat2(0, 1, 0, 0)
        assert conjugate(IDENTITY, m) == m
        assert conjugate(Mat2.diag(1, 2), m) == Mat2(0, 0.5, 0, 0)

    def test_conjugate_singular(self):
        with pytest.raises(SingularMatrix):
            conjugate(Mat2(1, 1, 1, 1), IDENTITY)

    def test_classes(self):
        assert jordan_classify(IDENTITY) is JordanType.ScalarMultipleOfId
        assert jordan_classify(Mat2(1, 1, 0, 1)) is JordanType.NonDiagonalizable
        assert jordan_classify(Mat2.diag(1, 2)) is JordanType.DiagonalizableDistinct
        assert jordan_classify(Mat2.diag(3j, 3j)) is JordanType.ScalarMultipleOfId


class TestProperties:
    @given(matrices)
    def test_traceless_square_is_central(self, m):
        m = Mat2(m.x, m.y, m.z, -m.x)
        sq = mat_mul(m, m)
        d = det(m)
        assert sq == Mat2(-d, 0, 0, -d)

    @given(matrices)
    def test_transpose_preserves_invariants(self, m):
        assert invariants(m.transpose()) == invariants(m)

    def test_random_matrices_in_polydisk(self, rng):
        ms = random_matrices(rng, 1000, 2.0)
        assert max(m.norm() for m in ms) <= 2.0
        assert np.mean([abs(m.x) for m in ms]) > 1.0
        assert all(cmath.isfinite(w) for m in ms for w in m.entries())
