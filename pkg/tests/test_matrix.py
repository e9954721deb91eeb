"""Dense exact matrices, block assembly, conjugation, determinants."""

import random

import pytest

from hnnrep.matrix import (
    RingMatrix,
    block_companion,
    block_diag,
    block_grid,
    conjugate,
    det2,
    det_bareiss,
    get_block,
)
from hnnrep.ring import INT, LAURENT, LaurentPoly, QpRing

LAM = LAURENT.lam()
MU = LAURENT.mu()
ONE = LAURENT.one
ZERO = LAURENT.zero

X0 = RingMatrix(LAURENT, ((ONE, ZERO), (LAM, ONE)))
X0_INV = RingMatrix(LAURENT, ((ONE, ZERO), (-LAM, ONE)))
X1 = RingMatrix(LAURENT, ((ONE, MU), (ZERO, ONE)))
X1_INV = RingMatrix(LAURENT, ((ONE, -MU), (ZERO, ONE)))


def random_int_matrix(rng, ring, d):
    return RingMatrix.from_ints(
        ring, [[rng.randrange(-4, 5) for _ in range(d)] for _ in range(d)]
    )


class TestRingMatrix:
    def test_identity_neutral(self):
        m = RingMatrix.identity(LAURENT, 4)
        grid = block_diag([X0, X1])
        assert m * grid == grid and grid * m == grid

    def test_x0_times_x1_inverse(self):
        expected = RingMatrix(
            LAURENT, ((ONE, -MU), (LAM, ONE - LAM * MU))
        )
        assert X0 * X1_INV == expected

    def test_scalar_mul(self):
        s = LAURENT.s_power(1)
        m = RingMatrix.identity(LAURENT, 2).scalar_mul(s)
        assert m.rows == ((s, ZERO), (ZERO, s))

    def test_associativity_random(self):
        rng = random.Random(13)
        for _ in range(50):
            a, b, c = (random_int_matrix(rng, INT, 3) for _ in range(3))
            assert (a * b) * c == a * (b * c)

    def test_degree_mismatch(self):
        with pytest.raises(ValueError):
            X0 * RingMatrix.identity(LAURENT, 3)

    def test_not_square_rejected(self):
        with pytest.raises(ValueError):
            RingMatrix(INT, ((1, 2), (3,)))

    def test_no_negative_powers(self):
        with pytest.raises(ValueError):
            X0 ** -1


class TestBlocks:
    def test_block_diag_single(self):
        assert block_diag([X0]) == X0

    def test_block_diag_identities(self):
        i2 = RingMatrix.identity(LAURENT, 2)
        assert block_diag([i2, i2]) == RingMatrix.identity(LAURENT, 4)

    def test_block_diag_square(self):
        assert block_diag([X0, X1]) ** 2 == block_diag([X0 ** 2, X1 ** 2])

    def test_companion_square_is_diag(self):
        c = X0 * X1_INV
        m = block_companion([None], c)
        assert m ** 2 == block_diag([c, c])

    def test_companion_cycle(self):
        i2 = RingMatrix.identity(LAURENT, 2)
        m = block_companion([None, None], i2)
        assert m ** 3 == RingMatrix.identity(LAURENT, 6)

    def test_companion_power_block_diagonal(self):
        # With identity superdiagonal the k-th power is diag(corner, .., corner),
        # generic symbolic corner.
        corner = RingMatrix(LAURENT, ((LAM, MU), (LAURENT.s_power(1), ONE)))
        for k in (2, 5, 8):
            m = block_companion([None] * (k - 1), corner)
            assert m ** k == block_diag([corner] * k)

    def test_inhomogeneous_blocks_rejected(self):
        with pytest.raises(ValueError):
            block_diag([X0, RingMatrix.identity(LAURENT, 3)])

    def test_get_block(self):
        m = block_grid(LAURENT, 2, 2, {(0, 1): X0, (1, 0): X1})
        assert get_block(m, 0, 1, 2) == X0
        assert get_block(m, 1, 0, 2) == X1
        assert get_block(m, 0, 0, 2) == RingMatrix.zeros(LAURENT, 2)


class TestConjugate:
    def test_identity_conjugation(self):
        i2 = RingMatrix.identity(LAURENT, 2)
        assert conjugate(X0, i2, i2) == X0

    def test_requires_two_sided_inverse(self):
        with pytest.raises(ValueError):
            conjugate(X0, X0, X1)

    def test_preserves_products(self):
        rng = random.Random(17)
        for _ in range(25):
            m = random_int_matrix(rng, INT, 3)
            n = random_int_matrix(rng, INT, 3)
            u = RingMatrix.from_ints(INT, ((1, 1, 0), (0, 1, 2), (0, 0, 1)))
            u_inv = RingMatrix.from_ints(INT, ((1, -1, 2), (0, 1, -2), (0, 0, 1)))
            left = conjugate(m * n, u, u_inv)
            right = conjugate(m, u, u_inv) * conjugate(n, u, u_inv)
            assert left == right


class TestDeterminants:
    def test_det2_generators(self):
        assert det2(X0) == ONE
        assert det2(X1) == ONE
        assert det2(X0 * X1_INV) == ONE

    def test_bareiss_matches_cofactor_small(self):
        def cofactor_det(rows):
            if len(rows) == 1:
                return rows[0][0]
            total = 0
            for j, top in enumerate(rows[0]):
                minor = [r[:j] + r[j + 1:] for r in rows[1:]]
                total += (-1) ** j * top * cofactor_det(minor)
            return total

        rng = random.Random(19)
        for d in (1, 2, 3, 4, 5):
            for _ in range(20):
                m = random_int_matrix(rng, INT, d)
                assert det_bareiss(m) == cofactor_det([list(r) for r in m.rows])

    def test_bareiss_singular(self):
        m = RingMatrix.from_ints(INT, ((1, 2, 3), (2, 4, 6), (1, 0, 1)))
        assert det_bareiss(m) == 0

    def test_bareiss_rejects_non_integer(self):
        with pytest.raises(ValueError):
            det_bareiss(X0)


class TestSpecializationLift:
    def test_matmul_commutes_with_specialize(self):
        rng = random.Random(23)
        qp = QpRing(5)

        def spec_matrix(m):
            return RingMatrix(qp, tuple(
                tuple(x.specialize(2, 3, 5) for x in row) for row in m.rows
            ))

        for _ in range(30):
            def rand_laurent():
                return RingMatrix(LAURENT, tuple(
                    tuple(
                        LaurentPoly({
                            (rng.randrange(3), rng.randrange(3), rng.randrange(-2, 3)):
                            rng.randrange(-5, 6)
                        })
                        for _ in range(2)
                    )
                    for _ in range(2)
                ))

            a, b = rand_laurent(), rand_laurent()
            assert spec_matrix(a * b) == spec_matrix(a) * spec_matrix(b)


class TestMatrixJson:
    def test_round_trip_laurent(self):
        doc = (X0 * X1_INV).to_json()
        again = RingMatrix.from_json(doc)
        assert again == X0 * X1_INV
        assert again.to_json() == doc

    def test_round_trip_qp(self):
        qp = QpRing(5)
        m = RingMatrix(qp, tuple(
            tuple(qp.from_int(3) if i == j else qp.zero for j in range(2))
            for i in range(2)
        ))
        doc = m.to_json()
        assert RingMatrix.from_json(doc) == m

    def test_round_trip_int(self):
        m = RingMatrix.from_ints(INT, ((1, -7), (0, 3)))
        assert RingMatrix.from_json(m.to_json()) == m

    def test_degree_mismatch_rejected(self):
        doc = X0.to_json()
        doc["degree"] = 3
        with pytest.raises(ValueError):
            RingMatrix.from_json(doc)
