import os
import random
import sys
import unittest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cyclotomic import cyclotomic_prime_power
from errors import NotPrimeError, PreconditionError
from exterior import wedge_power
from families import random_unimodular, random_unimodular_residue
from linalg import (
    ExactMatrix,
    IntPolynomial,
    charpoly,
    companion_matrix,
    direct_sum,
    identity,
    jordan_block,
    residue_array,
    residue_matmul,
)
from spectral import (
    JordanPartition,
    conductor_candidates,
    is_neg_unipotent,
    is_quasi_unipotent,
    is_unipotent,
    jordan_partition_by_bisection,
    jordan_partition_unipotent,
    level2_check,
    level2_evidence,
    nilpotency_index_mod_prime,
    power_vanishes_mod_prime,
    unipotent_echelon,
    unipotent_scalars,
)


def M(*rows):
    return ExactMatrix.from_rows(rows)


TRANSVECTION = M([1, 1], [0, 1])
C5 = companion_matrix(cyclotomic_prime_power(5, 1))


class TestUnipotency(unittest.TestCase):
    def test_examples(self):
        self.assertTrue(is_unipotent(identity(3)))
        self.assertTrue(is_unipotent(TRANSVECTION))
        self.assertFalse(is_unipotent(identity(2).scale(-1)))
        self.assertTrue(is_neg_unipotent(identity(2).scale(-1)))
        self.assertTrue(is_neg_unipotent(-TRANSVECTION))
        self.assertFalse(is_neg_unipotent(identity(2)))

    def test_echelon(self):
        self.assertEqual(unipotent_echelon(identity(2)), 1)
        self.assertEqual(unipotent_echelon(TRANSVECTION), 2)
        self.assertEqual(unipotent_echelon(jordan_block(3)), 3)
        self.assertIsNone(unipotent_echelon(C5))

    def test_trace_dim_but_not_unipotent(self):
        # trace equals dim, eigenvalues 1 ± sqrt 2
        self.assertIsNone(unipotent_echelon(M([2, 1], [1, 0])))

    def test_agrees_with_charpoly(self):
        rng = random.Random(8)
        samples = [identity(4), direct_sum(jordan_block(2), jordan_block(2)), jordan_block(4),
                   direct_sum(C5), direct_sum(jordan_block(2), identity(2).scale(-1))]
        for base in samples:
            p, p_inv = random_unimodular(base.dim, rng)
            a = p @ base @ p_inv
            self.assertEqual(is_unipotent(a), charpoly(a) == IntPolynomial.x_minus(1) ** a.dim)

    def test_scalars(self):
        self.assertEqual(unipotent_scalars(TRANSVECTION), (1,))
        self.assertEqual(unipotent_scalars(-TRANSVECTION), (-1,))
        self.assertEqual(unipotent_scalars(C5), ())


class TestLevel2(unittest.TestCase):
    def test_examples(self):
        for m in (1, 2, 5):
            self.assertTrue(level2_check(TRANSVECTION, m))
        self.assertFalse(level2_check(jordan_block(3), 1))
        self.assertFalse(level2_check(jordan_block(3), 4))
        self.assertTrue(level2_check(-TRANSVECTION, 2))
        self.assertFalse(level2_check(-TRANSVECTION, 1))

    def test_bad_m(self):
        with self.assertRaises(PreconditionError):
            level2_check(TRANSVECTION, 0)

    def test_evidence(self):
        ev = level2_evidence(-jordan_block(2))
        self.assertFalse(ev.unipotent)
        self.assertTrue(ev.neg_unipotent)
        self.assertTrue(ev.neg_square_zero)
        ev = level2_evidence(jordan_block(3))
        self.assertTrue(ev.unipotent)
        self.assertFalse(ev.square_zero)


class TestQuasiUnipotent(unittest.TestCase):
    def test_examples(self):
        rep = is_quasi_unipotent(TRANSVECTION)
        self.assertTrue(rep.is_quasi_unipotent)
        self.assertEqual(rep.order, 1)
        self.assertEqual(rep.cyclotomic_factors, ((1, 2),))

        rep = is_quasi_unipotent(C5)
        self.assertTrue(rep.is_quasi_unipotent)
        self.assertEqual(rep.order, 5)
        self.assertEqual(rep.cyclotomic_factors, ((5, 1),))

        rep = is_quasi_unipotent(M([2, 0], [0, 1]))
        self.assertFalse(rep.is_quasi_unipotent)
        self.assertIsNone(rep.order)

    def test_mixed_orders(self):
        a = direct_sum(identity(2).scale(-1), companion_matrix(cyclotomic_prime_power(3, 1)))
        rep = is_quasi_unipotent(a)
        self.assertEqual(rep.order, 6)
        self.assertEqual(rep.cyclotomic_factors, ((2, 2), (3, 1)))
        self.assertEqual(rep.to_json()["cyclotomic_factors"], [[2, 2], [3, 1]])

    def test_conductors(self):
        cands = conductor_candidates(2)
        self.assertEqual(cands, (1, 2, 3, 4, 6))


class TestJordanPartitions(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(jordan_partition_unipotent(identity(3), 5).blocks, (1, 1, 1))
        self.assertEqual(jordan_partition_unipotent(jordan_block(4), 5).blocks, (4,))
        self.assertEqual(jordan_partition_unipotent(wedge_power(jordan_block(4), 2), 5).blocks, (5, 1))

    def test_mixed_blocks(self):
        a = direct_sum(jordan_block(3), jordan_block(2), identity(1))
        part = jordan_partition_unipotent(a, 7)
        self.assertEqual(part, JordanPartition((3, 2, 1), 7))
        self.assertEqual(part.dim, 6)
        self.assertEqual(part.largest, 3)

    def test_characteristic_matters(self):
        # J_3 squared is unipotent; in characteristic 2 the block splits
        sq = jordan_block(3) @ jordan_block(3)
        self.assertEqual(jordan_partition_unipotent(sq, 3).blocks, (3,))
        self.assertEqual(jordan_partition_unipotent(sq, 2).blocks, (2, 1))

    def test_not_unipotent(self):
        with self.assertRaises(PreconditionError):
            jordan_partition_unipotent(C5, 7)
        with self.assertRaises(NotPrimeError):
            jordan_partition_unipotent(identity(2), 6)

    def test_bisection_oracle_agrees(self):
        rng = random.Random(4)
        w = wedge_power(jordan_block(6), 3)
        arr = residue_array(w.rows, 7)
        p, p_inv = random_unimodular_residue(w.dim, 7, rng)
        conj = residue_matmul(residue_matmul(p, arr, 7), p_inv, 7)
        self.assertEqual(jordan_partition_by_bisection(conj, 7), jordan_partition_unipotent(w, 7))
        self.assertEqual(nilpotency_index_mod_prime(jordan_block(4), 5), 4)
        self.assertEqual(nilpotency_index_mod_prime(identity(3), 5), 1)

    def test_power_vanishes(self):
        self.assertTrue(power_vanishes_mod_prime(jordan_block(4), 4, 5))
        self.assertFalse(power_vanishes_mod_prime(jordan_block(4), 3, 5))
        self.assertFalse(power_vanishes_mod_prime(wedge_power(jordan_block(4), 2), 4, 5))

    def test_partition_validation(self):
        with self.assertRaises(ValueError):
            JordanPartition((1, 2), 5)


if __name__ == "__main__":
    unittest.main()
