from fractions import Fraction

import sympy
from hypothesis import strategies as st

from hesskit.forms import Form, monomials_of_degree

SYMS = sympy.symbols("x0 x1 x2 x3 x4")


def to_sympy(f: Form):
    expr = sympy.Integer(0)
    for exps, c in f.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in zip(SYMS, exps):
            if e:
                term *= v ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, nvars: int, degree: int) -> Form:
    poly = sympy.Poly(sympy.expand(expr), *SYMS[:nvars])
    terms = {}
    for exps, coeff in poly.terms():
        q = sympy.Rational(coeff)
        terms[tuple(exps)] = Fraction(int(q.p), int(q.q))
    return Form.from_coeffs(nvars, degree, terms)


@st.composite
def forms(draw, nvars=3, min_degree=1, max_degree=4, coeff_bound=6):
    d = draw(st.integers(min_degree, max_degree))
    monos = monomials_of_degree(nvars, d)
    coeffs = draw(st.lists(st.integers(-coeff_bound, coeff_bound),
                           min_size=len(monos), max_size=len(monos)))
    if all(c == 0 for c in coeffs):
        coeffs = list(coeffs)
        coeffs[0] = 1
    return Form.from_coeffs(
        nvars, d, {e: Fraction(c) for e, c in zip(monos, coeffs) if c})
