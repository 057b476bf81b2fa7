from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hesskit import curves
from hesskit.curves import (CURVE_ONE, CURVE_TWO, FAMILY1_INTEGER_CANDIDATES,
                            FAMILY2_INTEGER_CANDIDATES, OMEGA1, OMEGA2, W1,
                            W1_SINTEGRAL_X_Y, W2, W2_INTEGRAL_X_Y, X1, X2,
                            condition_matches_curve, denominator_support,
                            even_a, even_b, fiber_recover, odd_c, rho1, rho2,
                            scan_condition, shift_from_c1, signed_points,
                            verify_family)

ks = st.integers(min_value=-60, max_value=60)


class TestConditionScans:
    def test_even_quadric_power_windows(self):
        wide = scan_condition("evenA", 2, 2, 20)
        assert wide.violations == ((7, 3), (12, 4))
        assert not wide.clean
        assert scan_condition("evenA", 2, 2, 6).clean

    def test_odd_window_is_clean(self):
        rep = scan_condition("odd", 2, 2, 100)
        assert rep.clean and rep.violations == ()

    def test_even_double_line_window(self):
        rep = scan_condition("evenB", 2, 2, 100)
        assert rep.violations == ((2, 2),)

    def test_unknown_condition_rejected(self):
        with pytest.raises(ValueError):
            scan_condition("oddA", 2, 2, 5)

    @given(ks, ks)
    def test_odd_condition_is_curve_one(self, k, m):
        assert odd_c(2, k, m) == CURVE_ONE.evaluate(k, m)

    @given(ks, ks)
    def test_even_double_line_condition_is_curve_two(self, k, m):
        assert even_b(2, k, m) == CURVE_TWO.evaluate(k, m)

    def test_bridge_helper_on_a_grid(self):
        grid = [(k, m) for k in range(-5, 6) for m in range(-5, 6)]
        assert condition_matches_curve("odd", CURVE_ONE, grid)
        assert condition_matches_curve("evenB", CURVE_TWO, grid)

    @given(ks.filter(lambda k: k >= 2), st.integers(1, 60))
    def test_even_quadric_power_values_are_integers(self, k, m):
        # no curve bridge exists for this one; pin the polynomial instead
        assert even_a(2, k, m) == 2 * m * m + m - 3 * k


class TestIntegralPoints:
    @pytest.mark.parametrize("curve,omega", [(CURVE_ONE, OMEGA1),
                                             (CURVE_TWO, OMEGA2)])
    def test_search_recovers_the_expected_sets(self, curve, omega):
        assert set(curve.integral_points(500)) == set(omega)

    @pytest.mark.parametrize("curve", [CURVE_ONE, CURVE_TWO])
    def test_discriminant_search_agrees_with_boxed_brute_force(self, curve):
        box = {(x, y)
               for x in range(-40, 41) for y in range(-1000, 1001)
               if curve.contains(x, y)}
        assert box == set(curve.integral_points(40))

    def test_every_listed_point_lies_on_its_curve(self):
        assert all(CURVE_ONE.contains(x, y) for x, y in OMEGA1)
        assert all(CURVE_TWO.contains(x, y) for x, y in OMEGA2)

    def test_set_sizes(self):
        assert len(OMEGA1) == 6 and len(OMEGA2) == 7


class TestWeierstrassModels:
    def test_representative_counts(self):
        assert len(W1_SINTEGRAL_X_Y) == 10
        assert len(W2_INTEGRAL_X_Y) == 6

    def test_all_signed_points_on_curve(self):
        assert all(W1.on_curve(x, y) for x, y in signed_points(W1_SINTEGRAL_X_Y))
        assert all(W2.on_curve(x, y) for x, y in signed_points(W2_INTEGRAL_X_Y))

    def test_denominator_support(self):
        for x, y in W1_SINTEGRAL_X_Y:
            assert denominator_support(x) | denominator_support(y) <= {2, 3}
        for x, y in W2_INTEGRAL_X_Y:
            assert x.denominator == 1 and y.denominator == 1

    def test_rescaling_reaches_the_labelled_models(self):
        r1 = W1.rescaled(64, "X1")
        assert (r1.a2, r1.a4, r1.a6) == (X1.a2, X1.a4, X1.a6)
        r2 = W2.rescaled(4, "X2")
        assert (r2.a2, r2.a4, r2.a6) == (X2.a2, X2.a4, X2.a6)
        assert X1.label == "366.b1" and X2.label == "1002.e1"

    def test_rescaled_points_land_on_the_minimal_models(self):
        for x, y in signed_points(W1_SINTEGRAL_X_Y):
            assert X1.on_curve(*rho2(1, x, y))
        for x, y in signed_points(W2_INTEGRAL_X_Y):
            assert X2.on_curve(*rho2(2, x, y))


def _sympy_fiber(family, a, b):
    """Independent fiber computation straight from the coordinate forms.

    Solutions with x = 0 are dropped: for both families that is the branch of
    the first relation consisting of base points of the map, which the
    recovery routine deliberately leaves out.
    """
    x, y = sympy.symbols("x y")
    if family == 1:
        cx = 6 * x * y
        cy = (3 * x ** 2 - sympy.Rational(9, 2) * x * y - 3 * y ** 2
              + sympy.Rational(3, 2) * x - 6 * y)
        cz = -8 * x ** 2 - 4 * x
    else:
        cx = 6 * y
        cy = 12 * y ** 2 - 9 * x - 9 * y
        cz = -x
    sols = sympy.solve([sympy.Eq(cx, a * cz), sympy.Eq(cy, b * cz)],
                       [x, y], dict=True)
    out = set()
    for s in sols:
        sx, sy = s[x], s[y]
        if not (sx.is_rational and sy.is_rational):
            continue
        if sx == 0:
            continue
        out.add((Fraction(str(sx)), Fraction(str(sy))))
    return out


class TestFiberRecovery:
    def test_family_one_quadratic_fiber_matches_sympy(self):
        rep = fiber_recover(1, 1, 1)
        assert rep.case == "quadratic"
        assert set(rep.candidates) == _sympy_fiber(1, 1, 1)
        assert {x for x, _ in rep.candidates} == {Fraction(-1, 2),
                                                 Fraction(-16, 35)}

    def test_family_two_linear_fiber_matches_sympy(self):
        rep = fiber_recover(2, 2, 2)
        assert rep.case == "linear"
        assert set(rep.candidates) == _sympy_fiber(2, 2, 2) == {(Fraction(3),
                                                                Fraction(-1))}

    def test_family_two_degenerate_targets(self):
        assert fiber_recover(2, 0, 9).case == "contracted-line"
        assert fiber_recover(2, 0, 5).case == "empty"

    def test_candidates_map_back_to_their_target(self):
        # a candidate either maps to its target or sits where the map is
        # undefined / sends the point to infinity
        for a, b in list(signed_points(W1_SINTEGRAL_X_Y))[:6]:
            rep = fiber_recover(1, a, b)
            if rep.case == "contracted-line":
                continue
            for cx, cy in rep.candidates:
                img = rho1(1, cx, cy)
                if img.defined and img.affine is not None:
                    assert img.affine == (a, b)

    def test_bad_family_rejected(self):
        with pytest.raises(ValueError):
            fiber_recover(3, 0, 0)


class TestFamilyVerification:
    def test_family_one_end_to_end(self):
        rep = verify_family(1, 400)
        assert rep.passed()
        assert rep.fiber_cases == {"quadratic": 17, "contracted-line": 2,
                                   "linear": 1}
        assert set(rep.recovered_set) == OMEGA1
        assert rep.brute_force_set == rep.expected_set

    def test_family_two_end_to_end(self):
        rep = verify_family(2, 400)
        assert rep.passed()
        assert rep.fiber_cases == {"linear": 10, "contracted-line": 1,
                                   "empty": 1}
        assert set(rep.recovered_set) == OMEGA2

    def test_integer_candidate_sets(self):
        assert FAMILY1_INTEGER_CANDIDATES == {(-1, 1), (-1, 2), (0, -2),
                                              (0, 0), (1, -3), (1, 0)}
        shifted = {tuple(int(v) for v in shift_from_c1(x, y))
                   for x, y in FAMILY1_INTEGER_CANDIDATES}
        assert shifted == OMEGA1
        assert FAMILY2_INTEGER_CANDIDATES == OMEGA2

    def test_bad_family_rejected(self):
        with pytest.raises(ValueError):
            verify_family(0, 100)
