from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hesskit.forms import Form, dim_sym
from hesskit.harmonic import (QuadraticForm, bombieri_weyl, dim_harmonic,
                              harmonic_basis, harmonic_decompose, recompose)

from conftest import forms

Q = QuadraticForm.canonical_hyperbolic(2)


class TestDecomposition:
    @settings(max_examples=30, deadline=None)
    @given(f=forms(min_degree=1, max_degree=7))
    def test_round_trip(self, f):
        slots = harmonic_decompose(f, Q)
        assert recompose(slots, Q) == f
        assert len(slots) == f.degree // 2 + 1

    @settings(max_examples=30, deadline=None)
    @given(f=forms(min_degree=1, max_degree=6))
    def test_every_slot_is_harmonic(self, f):
        for s in harmonic_decompose(f, Q):
            assert Q.laplacian(s).is_zero()

    @settings(max_examples=20, deadline=None)
    @given(f=forms(min_degree=1, max_degree=4), j=st.integers(1, 2))
    def test_multiplying_by_q_shifts_slots(self, f, j):
        slots = harmonic_decompose(f, Q)
        shifted = harmonic_decompose((Q.polynomial() ** j) * f, Q)
        assert shifted[:j] == [Form.zero(3, f.degree + 2 * j - 2 * i)
                               for i in range(j)]
        assert shifted[j:] == slots

    @settings(max_examples=20)
    @given(f=forms(min_degree=2, max_degree=5), g=forms(min_degree=2, max_degree=5))
    def test_decomposition_is_linear(self, f, g):
        if f.degree != g.degree:
            g = f
        sf = harmonic_decompose(f, Q)
        sg = harmonic_decompose(g, Q)
        sfg = harmonic_decompose(f + g, Q)
        assert sfg == [a + b for a, b in zip(sf, sg)]

    def test_decomposition_of_q_power_is_a_single_slot(self):
        qp = Q.polynomial() ** 3
        slots = harmonic_decompose(qp, Q)
        assert [i for i, s in enumerate(slots) if not s.is_zero()] == [3]
        assert slots[3] == Form.monomial((0, 0, 0), 1)


class TestDimensions:
    def test_ternary_harmonic_dimension_is_odd(self):
        for d in range(0, 9):
            assert dim_harmonic(3, d) == 2 * d + 1

    def test_harmonic_dimension_is_sym_difference(self):
        for nvars in (3, 4):
            for d in range(2, 7):
                assert dim_harmonic(nvars, d) \
                    == dim_sym(nvars, d) - dim_sym(nvars, d - 2)

    def test_basis_has_harmonic_dimension(self):
        for d in (1, 2, 3, 4, 5):
            basis = harmonic_basis(d, Q)
            assert len(basis) == dim_harmonic(3, d)
            for h in basis:
                assert Q.laplacian(h).is_zero()


class TestBombieriWeyl:
    def test_distinct_basis_vectors_are_orthogonal(self):
        for d in (2, 3, 4):
            basis = harmonic_basis(d, Q)
            for i, hi in enumerate(basis):
                assert bombieri_weyl(hi, hi) != 0
                for hj in basis[i + 1:]:
                    assert bombieri_weyl(hi, hj) == 0

    @settings(max_examples=20)
    @given(f=forms(min_degree=2, max_degree=4), g=forms(min_degree=2, max_degree=4))
    def test_pairing_is_symmetric(self, f, g):
        if f.degree != g.degree:
            g = f
        assert bombieri_weyl(f, g) == bombieri_weyl(g, f)

    def test_pairing_on_monomials(self):
        """<x0^2, x0^2> at degree 2 carries weight 1 over the multinomial."""
        a = Form.monomial((2, 0, 0))
        assert bombieri_weyl(a, a) == Fraction(1)
        b = Form.monomial((1, 1, 0))
        assert bombieri_weyl(b, b) == Fraction(1, 2)


class TestQuadraticForm:
    def test_canonical_hyperbolic_polynomial(self):
        assert Q.polynomial() == Form.from_coeffs(
            3, 2, {(1, 1, 0): 1, (0, 0, 2): 1})

    def test_identity_laplacian_is_classical(self):
        qid = QuadraticForm.identity(2)
        f = Form.monomial((2, 0, 0))
        lap = qid.laplacian(f)
        assert lap == Form.monomial((0, 0, 0), 2)

    def test_variable_count_mismatch_rejected(self):
        with pytest.raises(ValueError):
            harmonic_decompose(Form.monomial((2, 0)), Q)
