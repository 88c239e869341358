import unittest

from ed_utils.decorators import number

from classgroup import EnumerationLimitError
from constants import Assumption, BoundSource
from localdata import compute_S123, type1_sets
from selmer import (ConsistencyError, ParityInsufficientError, RankCertificate, SelmerBounds, Type1ClassRanks,
                    check_over_Q, duality_shift, rank_identity, sha_floor, torsion_phi_dim, type1_bounds_K,
                    type1_bounds_Q, type1_class_ranks, type1_dual_bounds_Q, type1_exact_with_root_number,
                    type1_sel3_bounds, type2_bounds, type2_dual_bounds, type2_sel3_bounds)


def interval(bounds: SelmerBounds) -> tuple[int, int | None]:
    return bounds.lower, bounds.upper


def phi_K(a: int) -> SelmerBounds:
    return type1_bounds_K(a, type1_sets(a))


class TestSelmerBounds(unittest.TestCase):

    @number("5.1")
    def test_interval(self):
        b = SelmerBounds(1, 4, [BoundSource.TYPE1_CONTAINMENT], [BoundSource.TYPE1_CONTAINMENT])
        self.assertTrue(b.contains(1) and b.contains(4))
        self.assertFalse(b.contains(5))
        both = b.intersect(SelmerBounds(2, 6, [BoundSource.RANK], [BoundSource.RANK]))
        self.assertEqual(interval(both), (2, 4))
        self.assertEqual(both.lower_source, [BoundSource.TYPE1_CONTAINMENT, BoundSource.RANK])
        self.assertEqual(interval(b.shifted(-2, BoundSource.TYPE2_DUAL_SHIFT)), (0, 2))
        self.assertTrue(SelmerBounds(3, 3).is_exact)
        self.assertEqual(str(SelmerBounds(1, None)), "[1, ?]")
        self.assertRaises(ConsistencyError, b.intersect, SelmerBounds(5, 7))
        self.assertRaises(ConsistencyError, SelmerBounds, -1, 2)

    @number("5.2")
    def test_rank_certificate(self):
        self.assertRaises(ValueError, RankCertificate, -1)
        self.assertRaises(ValueError, RankCertificate, 0, -1)
        self.assertRaises(ValueError, RankCertificate, 0, None, 0)


class TestTypeOneBounds(unittest.TestCase):

    @number("5.3")
    def test_over_K(self):
        self.assertEqual(interval(phi_K(2)), (0, 1))
        self.assertEqual(interval(phi_K(359)), (2, 3))
        self.assertEqual(interval(phi_K(5)), (0, 3))
        self.assertIn(Assumption.NOT_SQUARE, phi_K(5).assumptions)

    @number("5.4")
    def test_square_case(self):
        bounds = phi_K(4)
        self.assertEqual(bounds.lower, 0)
        self.assertEqual(bounds.upper, len(type1_sets(4).S_a) + 1)
        self.assertIn(Assumption.SQUARE, bounds.assumptions)
        self.assertEqual(torsion_phi_dim(4), 1)
        self.assertEqual(torsion_phi_dim(5), 0)

    @number("5.5")
    def test_root_number(self):
        for a, w, dim in [(2, -1, 1), (7, 1, 0), (359, -1, 3), (822, -1, 1)]:
            sets = type1_sets(a)
            self.assertEqual(type1_exact_with_root_number(a, sets, type1_bounds_K(a, sets), w), dim, f"a = {a}")
        sets = type1_sets(5)
        self.assertRaises(ParityInsufficientError, type1_exact_with_root_number, 5, sets, phi_K(5), 1)
        self.assertRaises(ValueError, type1_exact_with_root_number, 7, type1_sets(7), phi_K(7), 0)

    @number("5.6")
    def test_over_Q(self):
        sets = type1_sets(5)
        self.assertEqual(type1_bounds_Q(5, sets).upper, 2)
        self.assertEqual(type1_dual_bounds_Q(5, sets).upper, 1)
        check_over_Q(5, phi_K(5), type1_bounds_Q(5, sets), type1_dual_bounds_Q(5, sets))
        self.assertRaises(ConsistencyError, check_over_Q, 5, SelmerBounds(5, 6), SelmerBounds(0, 1),
                          SelmerBounds(0, 1))

    @number("5.7")
    def test_sel3(self):
        sets = type1_sets(5)
        self.assertEqual(interval(type1_sel3_bounds(5, sets, phi_K(5), RankCertificate(2))), (2, 6))
        sets = type1_sets(79)
        bounds = type1_sel3_bounds(79, sets, phi_K(79), RankCertificate(4))
        self.assertEqual(interval(bounds), (4, 6))
        self.assertIn(Assumption.RANK_GIVEN, bounds.assumptions)
        sets = type1_sets(7)
        self.assertEqual(interval(type1_sel3_bounds(7, sets, phi_K(7), exact_phi=0)), (0, 0))

    @number("5.8")
    def test_sha_and_rank(self):
        sets = type1_sets(51694)
        ranks = Type1ClassRanks(4, None, None)
        self.assertEqual(sha_floor(51694, sets, ranks, RankCertificate(0)), 4)
        self.assertEqual(sha_floor(51694, sets, ranks, RankCertificate(6)), 0)
        self.assertRaises(ValueError, sha_floor, 51694, sets, ranks, None)
        self.assertRaises(ValueError, sha_floor, 784, sets, None, RankCertificate(0))
        sets = type1_sets(5)
        self.assertEqual(sha_floor(5, sets, None, RankCertificate(0)),
                         sha_floor(5, sets, type1_class_ranks(5, sets), RankCertificate(0)))
        self.assertEqual(sha_floor(5, sets, None, RankCertificate(0)), 0)
        self.assertEqual(rank_identity(1, 0, 0), 1)
        self.assertEqual(rank_identity(3, 0, 0), 3)
        for k in range(1, 5):
            self.assertEqual(rank_identity(k, 1, k - 1), 0)
        self.assertRaises(ConsistencyError, rank_identity, 1, 1, 1)

    @number("5.9")
    def test_floored_ranks(self):
        sets = type1_sets(359)
        self.assertRaises(EnumerationLimitError, type1_class_ranks, 359, sets, 10)
        ranks = type1_class_ranks(359, sets, limit=10, floor=True)
        self.assertTrue(ranks.floored)
        bounds = type1_bounds_K(359, sets, ranks)
        self.assertIsNone(bounds.upper)
        self.assertIn(Assumption.CLASS_RANK_FLOORED, bounds.assumptions)
        self.assertIsNone(type1_sel3_bounds(359, sets, bounds).upper)


class TestTypeTwoBounds(unittest.TestCase):

    @number("5.10")
    def test_psi(self):
        for (a, b), expected in [((79, 131), (2, 4)), ((29, 76), (1, 3)), ((137, 143), (1, 6))]:
            self.assertEqual(interval(type2_bounds(a, b, compute_S123(a, b))), expected, f"({a}, {b})")

    @number("5.11")
    def test_psi_hat(self):
        sets = compute_S123(79, 131)
        self.assertEqual(interval(type2_dual_bounds(79, 131, sets, refined=False)), (2, 6))
        refined = type2_dual_bounds(79, 131, sets)
        self.assertEqual(interval(refined), (4, 6))
        self.assertIn(BoundSource.TYPE2_DUAL_SHIFT, refined.lower_source)
        sets = compute_S123(29, 76)
        self.assertEqual(interval(type2_dual_bounds(29, 76, sets, refined=False)), (0, 3))
        self.assertEqual(duality_shift(1, 0), 2)
        self.assertEqual(duality_shift(0, 1), 0)

    @number("5.12")
    def test_sel3(self):
        sets = compute_S123(79, 131)
        self.assertEqual(interval(type2_sel3_bounds(79, 131, sets)), (2, 10))
        sets = compute_S123(137, 127)
        bounds = type2_sel3_bounds(137, 127, sets, cert=RankCertificate(2))
        self.assertEqual(interval(bounds), (2, 10))
        self.assertIn(BoundSource.RANK, bounds.lower_source)


if __name__ == "__main__":
    unittest.main()
