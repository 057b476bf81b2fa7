import math
import random
from fractions import Fraction

import pytest

from hesskit.forms import Form
from hesskit.hessians import TParameterForm, hess
from hesskit.indeterminacy import (ConeNormalForm, NAMED_FAMILIES, _linear,
                                   exclusion_gate, f_divisible_by_x0,
                                   limit_divisibility_check,
                                   multiplicity_profile, normal_form_check,
                                   pair_divisibility_check, sample_family,
                                   sample_gated_pair, sample_gated_triple,
                                   triple_divisibility_check)
from hesskit.orbit_checks import hyperbolic_q, isotropic_l

X1 = _linear(Fraction(1), Fraction(0))
X2 = _linear(Fraction(0), Fraction(1))


def standard_form(d, cs=None):
    cs = cs if cs is not None else tuple(Fraction(i) for i in range(1, d))
    return ConeNormalForm(d, X2, X1, cs)


class TestNormalForms:
    @pytest.mark.parametrize("d", [4, 5, 6])
    def test_standard_shape_passes(self, d):
        rep = normal_form_check(standard_form(d))
        assert rep.passed()
        assert not rep.hess_zero and not rep.degenerate_data

    def test_all_zero_coefficients_give_a_cone(self):
        n = standard_form(5, cs=(Fraction(0),) * 4)
        rep = normal_form_check(n)
        assert rep.hess_zero and rep.degenerate_data and rep.iff_holds

    def test_proportional_linear_parts_give_a_cone(self):
        n = ConeNormalForm(5, X1, 3 * X1,
                           tuple(Fraction(i) for i in (2, -1, 1, 4)))
        rep = normal_form_check(n)
        assert rep.hess_zero and rep.degenerate_data and rep.iff_holds

    @pytest.mark.parametrize("seed", range(8))
    def test_random_data_keeps_the_equivalence(self, seed):
        rng = random.Random(seed)
        d = rng.randint(4, 6)
        l = _linear(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
        cs = tuple(Fraction(rng.randint(-4, 4)) for _ in range(d - 1))
        rep = normal_form_check(ConeNormalForm(d, l, X1, cs))
        assert rep.h12_vanishes and rep.divisible and rep.iff_holds

    @pytest.mark.parametrize("d", [4, 5, 6, 7])
    def test_multiplicity_profile(self, d):
        prof = multiplicity_profile(standard_form(d))
        assert prof["vanishing_through_order"] == d - 2
        assert prof["nonzero_at_order_d_minus_1"] == [(d - 1, 0, 0)]

    def test_surviving_derivative_value(self):
        """The one order-(d-1) derivative at (0:0:1) evaluates to (d-1)!."""
        d = 5
        f = standard_form(d).build()
        g = f
        for _ in range(d - 1):
            g = g.diff(0)
        assert g.evaluate((Fraction(0), Fraction(0), Fraction(1))) \
            == math.factorial(d - 1)

    def test_divisibility_helper(self):
        f = Form.from_coeffs(3, 4, {(3, 1, 0): 1, (4, 0, 0): 2})
        assert f_divisible_by_x0(f, 3)
        assert not f_divisible_by_x0(f, 4)
        assert f_divisible_by_x0(Form.zero(3, 4), 10)


class TestGatedPairs:
    @pytest.mark.parametrize("seed", range(12))
    def test_sampled_pairs_divide(self, seed):
        rng = random.Random(seed)
        d = rng.randint(4, 7)
        f, g, case = sample_gated_pair(d, rng)
        rep = pair_divisibility_check(f, g, case)
        assert rep.hypotheses_ok and rep.applicable
        assert rep.passed() and rep.divisible

    def test_all_pair_branches_appear(self):
        seen = set()
        for seed in range(40):
            rng = random.Random(seed)
            seen.add(sample_gated_pair(5, rng)[2])
        assert seen == {"f11-zero", "directional-g", "shared-direction"}

    def test_gate_violation_is_not_applicable(self):
        # h12(f, g) != 0 here, so the conclusion is not claimed
        f = Form.monomial((0, 4, 0))
        g = Form.monomial((0, 0, 4))
        rep = pair_divisibility_check(f, g, "manual")
        assert not rep.applicable
        assert rep.passed()


class TestGatedTriples:
    @pytest.mark.parametrize("seed", range(12))
    def test_sampled_triples_divide(self, seed):
        rng = random.Random(seed)
        d = rng.randint(4, 6)
        f, g, h, case = sample_gated_triple(d, rng)
        rep = triple_divisibility_check(f, g, h, case)
        assert rep.hypotheses_ok and rep.applicable
        assert rep.passed() and rep.divisible

    def test_all_triple_branches_appear(self):
        seen = set()
        for seed in range(40):
            rng = random.Random(seed)
            seen.add(sample_gated_triple(5, rng)[3])
        assert seen == {"g11-zero", "b-zero-h22", "c-zero"}


class TestLimits:
    @pytest.mark.parametrize("name", sorted(NAMED_FAMILIES))
    def test_named_families_pass(self, name):
        rep = limit_divisibility_check(NAMED_FAMILIES[name]())
        assert rep.passed()
        assert rep.status == "divisible"
        assert rep.required_power == rep.d - 3

    @pytest.mark.parametrize("seed", range(20))
    def test_random_families_never_fail(self, seed):
        rng = random.Random(seed)
        d = rng.choice([4, 5])
        rep = limit_divisibility_check(sample_family(d, rng))
        assert rep.status != "not-divisible"

    def test_family_with_identically_zero_hessian(self):
        fam = TParameterForm({0: Form.monomial((4, 0, 0)),
                              1: Form.monomial((4, 0, 0))})
        rep = limit_divisibility_check(fam)
        assert rep.status == "inconclusive-limit"
        assert rep.passed() and rep.lowest_order is None

    def test_slot_scaling_does_not_change_the_verdict(self):
        rng = random.Random(3)
        fam = sample_family(5, rng)
        scaled = TParameterForm({a: (Fraction(7) * s if a else s)
                                 for a, s in fam.slots.items()})
        assert (limit_divisibility_check(fam).status
                == limit_divisibility_check(scaled).status)

    def test_base_slot_is_mandatory(self):
        fam = TParameterForm({0: Form.monomial((3, 1, 0)),
                              1: Form.monomial((0, 4, 0))})
        with pytest.raises(ValueError):
            limit_divisibility_check(fam)

    def test_low_degree_rejected(self):
        fam = TParameterForm({0: Form.monomial((3, 0, 0))})
        with pytest.raises(ValueError):
            limit_divisibility_check(fam)


def x0_valuation(f):
    return min(e[0] for e in f.terms)


class TestExclusionGates:
    def test_special_point_valuations(self):
        q, l = hyperbolic_q(2), isotropic_l(2)
        assert x0_valuation(hess(q ** 2)) == 0
        assert x0_valuation(hess(q ** 2 * l)) == 3
        assert x0_valuation(hess(q ** 2 * l * l)) == 6

    def test_even_degree_gates(self):
        g = exclusion_gate(10)["gates"]
        assert g["hyperbolic-power"]["excluded"]
        assert g["hyperbolic-power"]["available"]
        assert g["quadric-double-line"]["excluded"]
        assert g["quadric-double-line"]["available"]
        g8 = exclusion_gate(8)["gates"]
        assert not g8["quadric-double-line"]["excluded"]
        assert not g8["quadric-double-line"]["available"]

    def test_odd_degree_gates(self):
        g = exclusion_gate(7)["gates"]
        assert g["quadric-line"]["excluded"] and g["quadric-line"]["available"]
        g5 = exclusion_gate(5)["gates"]
        assert not g5["quadric-line"]["excluded"]
        assert not g5["quadric-line"]["available"]

    def test_degree_floor(self):
        with pytest.raises(ValueError):
            exclusion_gate(3)
