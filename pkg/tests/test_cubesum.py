import unittest
from fractions import Fraction

from sympy import primerange

from ed_utils.decorators import number, slow
from ed_utils.timeout import timeout

from constants import Assumption, VerdictStatus
from cubesum import (UnsupportedShapeError, biquad_empty_S12_b, cube_sum_point, cube_sum_shape, cube_sum_verdict,
                     large_selmer_family, naive_rank_floor, selmer_dim_16l2, selmer_dim_16l4, selmer_dim_l2,
                     special_family_point, twist_density_experiment, twist_selmer_interval)
from curves import Curve1, Point, WeierstrassCurve
from localdata import type1_sets
from selmer import type1_bounds_K


class TestSelmerDimensions(unittest.TestCase):

    @number("6.1")
    def test_dimension_tables(self):
        self.assertEqual([selmer_dim_16l2(ell) for ell in (5, 7, 19)], [1, 2, 3])
        self.assertEqual([selmer_dim_16l4(ell) for ell in (5, 17, 37)], [1, 2, 3])
        self.assertEqual([selmer_dim_l2(ell) for ell in (5, 11, 7)], [1, 2, 1])
        self.assertRaises(ValueError, selmer_dim_16l2, 3)
        self.assertRaises(ValueError, selmer_dim_l2, 15)

    @number("6.2")
    def test_shapes(self):
        self.assertEqual(cube_sum_shape(5), ("l", 5))
        self.assertEqual(cube_sum_shape(10), ("2l", 5))
        self.assertEqual(cube_sum_shape(25), ("l2", 5))
        for D in (6, 9, 4, -5, 0):
            self.assertRaises(UnsupportedShapeError, cube_sum_shape, D)

    @number("6.3")
    def test_cube_sum_point(self):
        P = cube_sum_point(7, 2, -1)
        self.assertEqual(P, Point(84, 756))
        curve = WeierstrassCurve(Fraction(0), Fraction(0), Fraction(-432 * 49))
        self.assertTrue(curve.contains(P))
        self.assertRaises(ValueError, cube_sum_point, 7, 1, 1)
        self.assertRaises(ValueError, cube_sum_point, 0, 1, -1)

    @number("6.4")
    def test_special_family(self):
        self.assertEqual(special_family_point(31), ("t^2+27", Point(31, 62)))
        self.assertEqual(special_family_point(43), ("t^2+27", Point(43, 172)))
        self.assertEqual(special_family_point(13), ("s^6+3t^2", Point(39, 234)))
        self.assertEqual(special_family_point(109), ("s^6+27t^2", Point(327, 5886)))
        self.assertIsNone(special_family_point(7))
        self.assertIsNone(special_family_point(5))
        for ell in (13, 31, 43, 109):
            P = special_family_point(ell)[1]
            self.assertTrue(Curve1(-27 * ell * ell).weierstrass.contains(P))


class TestVerdicts(unittest.TestCase):

    @number("6.5")
    def test_rank_zero(self):
        for D in (5, 10, 14):
            verdict = cube_sum_verdict(D)
            self.assertEqual(verdict.status, VerdictStatus.NOT_CUBE_SUM, f"D = {D}")
            self.assertEqual(verdict.rank, 0)
            self.assertEqual(verdict.hypotheses, [])
            self.assertEqual(verdict.selmer_dim, 1)

    @number("6.6")
    def test_certified(self):
        verdict = cube_sum_verdict(62)
        self.assertEqual(verdict.status, VerdictStatus.CUBE_SUM)
        self.assertEqual(verdict.certificate, Point(31, 62))
        self.assertEqual(verdict.certificate_curve, "E_-25947")
        self.assertEqual(verdict.selmer_dim, 2)
        self.assertIsNone(verdict.rank)
        verdict = cube_sum_verdict(62, sha_even=True)
        self.assertEqual(verdict.rank, 1)
        self.assertEqual(verdict.hypotheses, [Assumption.SHA_EVEN])
        self.assertEqual(cube_sum_verdict(7).certificate, Point(-7, 21))

    @number("6.7")
    def test_conditional(self):
        verdict = cube_sum_verdict(7, height=1)
        self.assertEqual(verdict.status, VerdictStatus.CONDITIONAL_CUBE_SUM)
        self.assertEqual(verdict.hypotheses, [Assumption.SHA_EVEN])
        verdict = cube_sum_verdict(19, height=1)
        self.assertEqual(verdict.status, VerdictStatus.UNDETERMINED)
        self.assertEqual(verdict.hypotheses, [Assumption.RANK_POSITIVE, Assumption.SHA_EVEN])
        verdict = cube_sum_verdict(19, sha_even=True, rank_positive=True, height=1)
        self.assertEqual(verdict.status, VerdictStatus.CONDITIONAL_CUBE_SUM)
        self.assertEqual(verdict.rank, 2)

    @number("6.8")
    def test_naive_rank_floor(self):
        found, points = naive_rank_floor(Curve1(2), 10)
        self.assertGreaterEqual(found, 1)
        self.assertEqual(points[0], Point(-1, 1))
        self.assertEqual(naive_rank_floor(Curve1(7), 100), (0, []))


class TestFamilies(unittest.TestCase):

    @number("6.9")
    def test_large_selmer_family(self):
        w = large_selmer_family(0)
        self.assertEqual((w.a, w.primes, w.lower_bound), (-4, [11], 0))
        w = large_selmer_family(1)
        self.assertEqual((w.a, w.b, w.primes, w.s3_size), (2966, 1, [11, 23, 47], 3))
        self.assertEqual(w.lower_bound, 2)
        self.assertRaises(ValueError, large_selmer_family, -1)

    @number("6.10")
    def test_empty_S12(self):
        self.assertEqual(biquad_empty_S12_b(5, 3), [7, 13, 37])
        self.assertEqual(biquad_empty_S12_b(-1, 4), [7, 19, 31, 43])
        self.assertRaises(ValueError, biquad_empty_S12_b, 3, 1)
        self.assertRaises(ValueError, biquad_empty_S12_b, 20, 1)
        self.assertRaises(ValueError, biquad_empty_S12_b, 50, 1)
        self.assertRaises(ValueError, biquad_empty_S12_b, -98, 1)
        self.assertRaises(ValueError, biquad_empty_S12_b, 1, 1)

    @number("6.11")
    def test_twists(self):
        bounds = twist_selmer_interval(5, 7)
        self.assertEqual((bounds.lower, bounds.upper), (0, 1))

    @number("6.12")
    @timeout(60)
    def test_twist_density(self):
        result = twist_density_experiment(5, 10 ** 4, verify=3)
        self.assertGreater(result["count"], 0)
        self.assertTrue(0.22 <= result["ratio"] <= 0.28, result)

    @number("6.14")
    @timeout(120)
    def test_dimensions_inside_bounds(self):
        for ell in primerange(5, 501):
            for a, dim in ((16 * ell ** 2, selmer_dim_16l2(ell)), (16 * ell ** 4, selmer_dim_16l4(ell)),
                           (ell ** 2, selmer_dim_l2(ell))):
                bounds = type1_bounds_K(a, type1_sets(a))
                self.assertTrue(bounds.contains(dim), f"a = {a}: {dim} outside {bounds}")

    @number("6.13")
    @slow()
    def test_large_selmer_family_growth(self):
        for n in range(2, 4):
            w = large_selmer_family(n)
            self.assertEqual(w.s3_size, 2 * n + 1)
            self.assertEqual(w.lower_bound, 2 * n)

    @number("6.15")
    @slow()
    def test_special_family_up_to_ten_thousand(self):
        shapes = 0
        for ell in primerange(5, 10 ** 4):
            special = special_family_point(ell)
            if special is None:
                continue
            shapes += 1
            curve = Curve1(-27 * ell * ell).weierstrass
            self.assertTrue(curve.contains(special[1]), f"ℓ = {ell}")
            self.assertFalse(curve.is_torsion(special[1]), f"ℓ = {ell}")
            verdict = cube_sum_verdict(2 * ell)
            self.assertEqual(verdict.status, VerdictStatus.CUBE_SUM, f"ℓ = {ell}")
            self.assertEqual(verdict.certificate, special[1])
        self.assertGreaterEqual(shapes, 50)

    @number("6.16")
    @slow()
    def test_twist_density_large(self):
        result = twist_density_experiment(5, 10 ** 5)
        self.assertTrue(0.24 <= result["ratio"] <= 0.26, result)


if __name__ == "__main__":
    unittest.main()
