import os
import unittest
from unittest import mock

from ed_utils.decorators import number, slow
from ed_utils.timeout import timeout

from classgroup import (EnumerationLimitError, FormClassGroup, NotAFieldError, QuadraticForm, biquadratic_three_rank,
                        class_group_of, class_number, count_primes_above, form_class_group, fundamental_discriminant,
                        prime_classes_above, quadratic_s_class_three_rank, resolve_limit, s_class_three_rank,
                        squarefree_core, three_rank, _solve_linmod)
from constants import ENUMERATION_LIMIT, LIMIT_ENV_VAR
from eisenstein import classify_prime


def scholz_holds(d: int) -> bool:
    real = three_rank(fundamental_discriminant(d))
    imaginary = three_rank(fundamental_discriminant(-3 * d))
    return real <= imaginary <= real + 1


class TestClassGroup(unittest.TestCase):

    @number("2.6")
    def test_discriminants(self):
        self.assertEqual(fundamental_discriminant(5), 5)
        self.assertEqual(fundamental_discriminant(-15), -15)
        self.assertEqual(fundamental_discriminant(2), 8)
        self.assertEqual(fundamental_discriminant(-1), -4)
        self.assertEqual(fundamental_discriminant(-12), -3)
        self.assertRaises(NotAFieldError, fundamental_discriminant, 4)
        self.assertEqual(squarefree_core(-12), -3)
        self.assertEqual(squarefree_core(72), 2)
        self.assertRaises(ValueError, squarefree_core, 0)

    @number("2.7")
    def test_imaginary_groups(self):
        self.assertEqual(form_class_group(-3).invariant_factors, [])
        self.assertEqual(str(form_class_group(-3)), "trivial")
        self.assertEqual(form_class_group(-23).invariant_factors, [3])
        self.assertEqual(form_class_group(-84).invariant_factors, [2, 2])
        self.assertEqual(form_class_group(-104).invariant_factors, [6])
        for D, h in ((-4, 1), (-20, 2), (-47, 5), (-56, 4), (-239, 15)):
            self.assertEqual(class_number(D), h, f"D = {D}")
        self.assertEqual(sorted(class_group_of(-23).classes),
                         [QuadraticForm(1, 1, 6), QuadraticForm(2, -1, 3), QuadraticForm(2, 1, 3)])

    @number("2.8")
    def test_real_groups(self):
        self.assertEqual(class_number(5), 1)
        # Narrow: x² - 3y² and 3y² - x² are not properly equivalent.
        self.assertEqual(class_number(12), 2)
        self.assertEqual(class_number(229), 3)
        self.assertEqual(three_rank(229), 1)
        self.assertEqual(three_rank(5), 0)
        self.assertEqual(three_rank(-23), 1)

    @number("2.9")
    def test_group_law(self):
        for D in (-23, -47, -84, -239, -3896, 12, 229, 316):
            group = class_group_of(D)
            structure = group.structure()
            self.assertEqual(structure.order, group.order, f"D = {D}")
            for x in group.classes:
                self.assertEqual(group.power(x, group.order), group.identity)
                self.assertEqual(group.compose(x, group.inverse(x)), group.identity)
            for d, g in zip(structure.invariant_factors, structure.generators):
                self.assertEqual(group.order_of(g), d)
            for x in group.classes[:5]:
                self.assertTrue(x.is_reduced())
                self.assertEqual(x.discriminant, D)

    @number("2.10")
    def test_prime_classes(self):
        group = class_group_of(-23)
        forms = prime_classes_above(-23, 2)
        self.assertEqual(forms[0], QuadraticForm(2, 1, 3))
        self.assertEqual(forms[1], group.inverse(forms[0]))
        self.assertEqual(group.order_of(forms[0]), 3)
        self.assertEqual(prime_classes_above(-23, 5), [group.identity])
        self.assertEqual(count_primes_above(-15, [2]), 2)
        self.assertEqual(count_primes_above(-15, [5]), 1)
        self.assertEqual(count_primes_above(-23, [5, 2]), 3)

    @number("2.11")
    def test_quadratic_s_class_rank(self):
        self.assertEqual(quadratic_s_class_three_rank(-23, []), 1)
        # The primes over 2 generate the 3-part of Cl(Q(√-23)).
        self.assertEqual(quadratic_s_class_three_rank(-23, [2]), 0)
        self.assertEqual(quadratic_s_class_three_rank(-23, [5]), 1)
        self.assertEqual(quadratic_s_class_three_rank(5, [2, 3]), 0)
        self.assertRaises(NotAFieldError, quadratic_s_class_three_rank, 9, [])

    @number("2.12")
    def test_biquadratic_rank(self):
        self.assertEqual(biquadratic_three_rank(2), 0)
        self.assertEqual(biquadratic_three_rank(359), 2)
        self.assertEqual(biquadratic_three_rank(822), 1)
        self.assertRaises(NotAFieldError, biquadratic_three_rank, 4)
        self.assertRaises(NotAFieldError, biquadratic_three_rank, -3)

    @number("2.13")
    def test_s_class_rank(self):
        two = classify_prime(2)
        self.assertEqual(s_class_three_rank(1373, [two]).rank, 2)
        self.assertEqual(s_class_three_rank(79, []).rank, 2)
        self.assertEqual(s_class_three_rank(5, [two]).rank, 0)
        data = s_class_three_rank(359, [])
        self.assertEqual((data.d1, data.d2), (359, -1077))
        self.assertEqual(data.rank1 + data.rank2, data.rank)
        for a in (79, 359, 822, 1373, 2230):
            self.assertEqual(s_class_three_rank(a, []).rank, biquadratic_three_rank(a))
            self.assertLessEqual(s_class_three_rank(a, [two, classify_prime(5), classify_prime(7)]).rank,
                                 s_class_three_rank(a, [two]).rank)
            self.assertLessEqual(s_class_three_rank(a, [two]).rank, s_class_three_rank(a, []).rank)

    @number("2.14")
    @timeout(60)
    def test_scholz_reflection(self):
        for d in range(2, 300):
            if squarefree_core(d) == d:
                self.assertTrue(scholz_holds(d), f"d = {d}")

    @number("2.15")
    def test_limit(self):
        self.assertRaises(EnumerationLimitError, FormClassGroup, -239, 100)
        self.assertEqual(resolve_limit(7), 7)
        with mock.patch.dict(os.environ, {LIMIT_ENV_VAR: "1234"}):
            self.assertEqual(resolve_limit(), 1234)
            self.assertEqual(resolve_limit(99), 99)
        with mock.patch.dict(os.environ, {LIMIT_ENV_VAR: ""}):
            self.assertEqual(resolve_limit(), ENUMERATION_LIMIT)

    @number("2.16")
    @slow()
    def test_scholz_reflection_full(self):
        for d in range(2, 2001):
            if squarefree_core(d) == d:
                self.assertTrue(scholz_holds(d), f"d = {d}")

    @number("2.22")
    def test_linear_congruence(self):
        for a, b, m in [(3, 1, 7), (4, 2, 6), (10, 5, 35), (-7, 3, 11), (6, 0, 9)]:
            u, step = _solve_linmod(a, b, m)
            self.assertEqual((a * u - b) % m, 0, f"{a}x = {b} mod {m}")
            self.assertEqual((a * (u + step) - b) % m, 0)
        self.assertEqual(_solve_linmod(3, 1, 7), (5, 7))
        self.assertEqual(_solve_linmod(4, 2, 6)[1], 3)
        self.assertRaises(ValueError, _solve_linmod, 2, 1, 4)
        self.assertRaises(ValueError, _solve_linmod, 6, 4, 9)


if __name__ == "__main__":
    unittest.main()
