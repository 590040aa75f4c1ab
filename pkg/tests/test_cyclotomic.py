"""Exceptional moduli and the (zeta - 1)^r membership law."""
import os
import sys
import unittest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cyclotomic import (
    PrimePowerSet,
    cyclotomic,
    cyclotomic_prime_power,
    exceptional_difference,
    groupring_bound,
    n_prime_set,
    n_set,
    prime_power_orders,
    root_minus_one_membership,
    scan_witnesses,
    sharpness_scan,
    valuation_threshold,
)
from errors import NotPrimeError, PreconditionError
from linalg import IntPolynomial


class TestPrimePowerSet(unittest.TestCase):
    def test_validation(self):
        with self.assertRaises(ValueError):
            PrimePowerSet((1, 6))
        with self.assertRaises(ValueError):
            PrimePowerSet((3, 2))
        self.assertEqual(PrimePowerSet.of([4, 2, 2, 1]).elements, (1, 2, 4))

    def test_text(self):
        self.assertEqual(str(PrimePowerSet.of([1, 2, 3, 4])), "{1, 2, 3, 4}")
        self.assertEqual(str(PrimePowerSet(())), "{}")


class TestExceptionalSets(unittest.TestCase):
    def test_n_set_examples(self):
        self.assertEqual(list(n_set(1)), [1, 2])
        self.assertEqual(list(n_set(2)), [1, 2, 3, 4])
        self.assertEqual(list(n_set(3)), [1, 2, 3, 4, 8])
        self.assertEqual(list(n_set(4)), [1, 2, 3, 4, 5, 8, 9, 16])

    def test_n_prime_set_examples(self):
        self.assertEqual(list(n_prime_set(1)), [1, 2])
        self.assertEqual(list(n_prime_set(2)), [1, 2, 3, 4])
        self.assertEqual(list(n_prime_set(4)), [1, 2, 3, 4, 8, 9, 16])

    def test_difference(self):
        self.assertEqual(list(exceptional_difference(4)), [5])
        self.assertEqual(list(exceptional_difference(12)), [13, 49, 125])
        self.assertEqual(list(exceptional_difference(3)), [])

    def test_nesting(self):
        for r in range(1, 21):
            self.assertTrue(n_set(r).issubset(n_set(r + 1)), r)
            self.assertTrue(n_prime_set(r).issubset(n_set(r)), r)

    def test_bad_r(self):
        with self.assertRaises(PreconditionError):
            n_set(0)


class TestCyclotomicPolynomials(unittest.TestCase):
    def test_prime_power_examples(self):
        self.assertEqual(cyclotomic_prime_power(2, 1), IntPolynomial.from_coefficients([1, 1]))
        self.assertEqual(cyclotomic_prime_power(3, 1), IntPolynomial.from_coefficients([1, 1, 1]))
        phi25 = cyclotomic_prime_power(5, 2)
        self.assertEqual(phi25.coefficients, tuple(1 if i % 5 == 0 else 0 for i in range(21)))
        x25 = IntPolynomial.from_coefficients([-1] + [0] * 24 + [1])
        x5 = IntPolynomial.from_coefficients([-1, 0, 0, 0, 0, 1])
        self.assertTrue(x25.divisible_by(phi25))
        self.assertFalse(x5.divisible_by(phi25))

    def test_matches_general_conductor(self):
        for ell, s in ((2, 3), (3, 2), (7, 1)):
            self.assertEqual(cyclotomic_prime_power(ell, s), cyclotomic(ell ** s))
        self.assertEqual(cyclotomic(6), IntPolynomial.from_coefficients([1, -1, 1]))

    def test_not_prime(self):
        with self.assertRaises(NotPrimeError):
            cyclotomic_prime_power(4, 1)


class TestMembership(unittest.TestCase):
    def test_examples(self):
        self.assertTrue(root_minus_one_membership(3, 1, 2, 3))
        self.assertTrue(root_minus_one_membership(5, 1, 4, 5))
        self.assertFalse(root_minus_one_membership(5, 1, 3, 5))
        self.assertTrue(root_minus_one_membership(2, 1, 3, 8))
        self.assertFalse(root_minus_one_membership(2, 1, 2, 8))

    def test_unit_modulus_and_zero_power(self):
        self.assertTrue(root_minus_one_membership(7, 1, 0, 1))
        self.assertFalse(root_minus_one_membership(7, 1, 0, 2))

    def test_groupring_bound(self):
        self.assertEqual(groupring_bound(3, 1, 1), 2)
        self.assertEqual(groupring_bound(2, 1, 3), 3)
        self.assertEqual(groupring_bound(5, 2, 1), 20)
        self.assertFalse(root_minus_one_membership(5, 2, 19, 5))

    def test_threshold_law(self):
        for ell in (2, 3, 5, 7):
            for s in (1, 2):
                for m in (1, 2, 3):
                    t = valuation_threshold(ell, s, m)
                    for r in range(1, 25):
                        self.assertEqual(root_minus_one_membership(ell, s, r, ell ** m), r >= t, (ell, s, m, r))

    def test_preconditions(self):
        with self.assertRaises(PreconditionError):
            root_minus_one_membership(3, 0, 1, 3)
        with self.assertRaises(PreconditionError):
            valuation_threshold(3, 1, 0)


class TestSharpnessScan(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(sharpness_scan(2, 4), (2, 1))
        self.assertIsNone(sharpness_scan(2, 5))
        self.assertEqual(scan_witnesses(4, 5), [(5, 1)])

    def test_orders_respect_degree_cap(self):
        orders = prime_power_orders(None, 20)
        self.assertIn((5, 2), orders)
        self.assertNotIn((3, 4), orders)
        self.assertTrue(all(ell ** (s - 1) * (ell - 1) <= 20 for ell, s in orders))
        self.assertEqual(prime_power_orders(1, 6), [(2, 1), (3, 1), (5, 1), (7, 1)])

    def test_witness_iff_in_n_set(self):
        for r in range(1, 6):
            for n in range(2, 20):
                self.assertEqual(sharpness_scan(r, n) is not None, n in n_set(r), (r, n))


if __name__ == "__main__":
    unittest.main()
