from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hesskit.forms import Form, dim_sym, monomials_of_degree, random_form

from conftest import SYMS, forms, to_sympy


class TestConstruction:
    def test_monomial_infers_variable_count(self):
        f = Form.monomial((2, 1, 0), 3)
        assert f.nvars == 3 and f.degree == 3
        assert f.terms == {(2, 1, 0): Fraction(3)}

    def test_mixed_degrees_rejected(self):
        with pytest.raises(ValueError):
            Form.from_coeffs(3, 2, {(2, 0, 0): 1, (1, 0, 0): 1})

    def test_zero_form_has_no_terms(self):
        z = Form.zero(3, 4)
        assert z.is_zero() and z.degree == 4

    def test_canonical_order_is_descending_lex(self):
        monos = monomials_of_degree(3, 2)
        assert monos[0] == (2, 0, 0)
        assert monos[-1] == (0, 0, 2)
        assert monos == sorted(monos, reverse=True)

    def test_dim_sym_matches_monomial_count(self):
        for nvars in (2, 3, 4):
            for d in range(0, 6):
                assert dim_sym(nvars, d) == len(monomials_of_degree(nvars, d))


class TestArithmetic:
    @settings(max_examples=40)
    @given(f=forms(), g=forms())
    def test_product_against_sympy(self, f, g):
        fg = f * g
        assert to_sympy(fg) == sympy.expand(to_sympy(f) * to_sympy(g))
        assert fg.degree == f.degree + g.degree

    @settings(max_examples=40)
    @given(f=forms(max_degree=3))
    def test_square_matches_self_product(self, f):
        assert f ** 2 == f * f

    @given(f=forms(), g=forms(min_degree=3, max_degree=3),
           h=forms(min_degree=3, max_degree=3))
    @settings(max_examples=25)
    def test_product_distributes_over_sums(self, f, g, h):
        assert f * (g + h) == f * g + f * h

    @settings(max_examples=40)
    @given(f=forms(), i=st.integers(0, 2))
    def test_derivative_against_sympy(self, f, i):
        df = f.diff(i)
        assert to_sympy(df) == sympy.expand(sympy.diff(to_sympy(f), SYMS[i]))

    @settings(max_examples=30)
    @given(f=forms(), point=st.tuples(st.integers(-5, 5), st.integers(-5, 5),
                                      st.integers(-5, 5)))
    def test_evaluation_is_substitution(self, f, point):
        subs = {v: p for v, p in zip(SYMS, point)}
        assert f.evaluate(tuple(Fraction(p) for p in point)) \
            == to_sympy(f).subs(subs)

    def test_euler_identity_on_a_sample(self):
        """sum_i x_i df/dx_i = d f for homogeneous f."""
        f = Form.from_coeffs(3, 3, {(3, 0, 0): 2, (1, 1, 1): -5, (0, 2, 1): 7})
        total = Form.zero(3, 3)
        for i in range(3):
            total = total + Form.variable(3, i) * f.diff(i)
        assert total == Fraction(3) * f


class TestRandomAndJson:
    def test_random_form_is_seed_stable(self):
        import random
        a = random_form(3, 4, random.Random(11))
        b = random_form(3, 4, random.Random(11))
        assert a == b

    @settings(max_examples=20)
    @given(f=forms())
    def test_json_round_trip(self, f):
        assert Form.from_json_dict(f.to_json_dict()) == f
