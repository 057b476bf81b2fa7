"""Harmonic decomposition with respect to a nondegenerate quadratic form.

A quadratic form is carried by its symmetric Gram matrix A, as the polynomial
x^T A x.  Its dual differential operator is

    lap_q(f) = sum_ij (A**-1)_ij d2 f / dxi dxj,

normalized so that lap_q applied to the quadric itself gives 2*(r+1) in r+1
variables.  A form is harmonic when lap_q kills it.  Every degree-d form f
splits uniquely as f = sum_i q**i * f_{d-2i} with all f_{d-2i} harmonic; the
splitting here follows the constructive recursion: peel the top summand by
solving lap_q(q*g) = lap_q(f) for g, then recurse on g.

The solve is an exact linear solve over the monomial basis; the inverse of the
multiplication-then-Laplacian operator is cached per (variables, degree,
quadric), which makes repeated decompositions cheap.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Sequence, Tuple

from . import linalg
from .forms import Form, dim_sym, monomials_of_degree

_ONE_HALF = Fraction(1, 2)


class QuadraticForm:
    """Nondegenerate quadratic form given by its symmetric Gram matrix."""

    __slots__ = ("nvars", "gram", "dual", "_poly", "_key")

    def __init__(self, gram: Sequence[Sequence]):
        n = len(gram)
        g = [[Fraction(x) for x in row] for row in gram]
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i + 1, n):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        if linalg.det_exact(g) == 0:
            raise ValueError("Gram matrix is degenerate")
        self.nvars = n
        self.gram = tuple(tuple(row) for row in g)
        self.dual = tuple(tuple(row) for row in linalg.invert(g))
        terms: Dict[Tuple[int, ...], Fraction] = {}
        for i in range(n):
            for j in range(n):
                if g[i][j] == 0:
                    continue
                e = [0] * n
                e[i] += 1
                e[j] += 1
                key = tuple(e)
                terms[key] = terms.get(key, Fraction(0)) + g[i][j]
        self._poly = Form(n, 2, terms)
        self._key = json.dumps(self.to_json_dict(), separators=(",", ":"))

    @staticmethod
    def identity(r: int) -> "QuadraticForm":
        """Sum of squares x0**2 + ... + xr**2."""
        n = r + 1
        return QuadraticForm([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def canonical_hyperbolic(r: int) -> "QuadraticForm":
        """The quadric x0*x1 + x2**2 + ... + xr**2 with isotropic x0."""
        n = r + 1
        if n < 2:
            raise ValueError("need at least two variables")
        gram = [[Fraction(0)] * n for _ in range(n)]
        gram[0][1] = gram[1][0] = _ONE_HALF
        for i in range(2, n):
            gram[i][i] = Fraction(1)
        return QuadraticForm(gram)

    def polynomial(self) -> Form:
        return self._poly

    def key(self) -> str:
        return self._key

    def laplacian(self, f: Form) -> Form:
        """The dual second-order operator sum_ij (A**-1)_ij d_i d_j f."""
        if f.nvars != self.nvars:
            raise ValueError("form and quadric have different variable counts")
        n = self.nvars
        firsts = [f.diff(i) for i in range(n)]
        total = Form.zero(n, max(f.degree - 2, 0))
        for i in range(n):
            di = firsts[i]
            if di.is_zero():
                continue
            for j in range(n):
                c = self.dual[i][j]
                if c == 0:
                    continue
                total = total + di.diff(j).scale(c)
        return total

    def evaluate_bilinear(self, v: Sequence, w: Sequence) -> Fraction:
        """The bilinear pairing v^T A w."""
        n = self.nvars
        vv = [Fraction(x) for x in v]
        ww = [Fraction(x) for x in w]
        total = Fraction(0)
        for i in range(n):
            for j in range(n):
                total += vv[i] * self.gram[i][j] * ww[j]
        return total

    def to_json_dict(self) -> dict:
        return {"gram": [[f"{x.numerator}/{x.denominator}" for x in row] for row in self.gram]}

    @staticmethod
    def from_json_dict(data: Mapping) -> "QuadraticForm":
        return QuadraticForm([[Fraction(x) for x in row] for row in data["gram"]])

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        return self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.gram)

    def __repr__(self) -> str:
        return f"QuadraticForm({self.nvars} vars)"


# Cache of inverses of g -> lap_q(q*g) on the degree-(d-2) monomial basis,
# keyed by (nvars, d, gram serialization).
_SOLVER_CACHE: Dict[Tuple[int, int, str], List[List[Fraction]]] = {}


def _mult_solver(q: QuadraticForm, d: int) -> List[List[Fraction]]:
    key = (q.nvars, d, q.key())
    cached = _SOLVER_CACHE.get(key)
    if cached is not None:
        return cached
    basis = monomials_of_degree(q.nvars, d - 2)
    index = {m: i for i, m in enumerate(basis)}
    n = len(basis)
    qpoly = q.polynomial()
    cols: List[List[Fraction]] = []
    for m in basis:
        image = q.laplacian(qpoly * Form.monomial(m, 1))
        col = [Fraction(0)] * n
        for e, c in image.terms.items():
            col[index[e]] = c
        cols.append(col)
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    inv = linalg.invert(matrix)
    _SOLVER_CACHE[key] = inv
    return inv


def harmonic_decompose(f: Form, q: QuadraticForm) -> List[Form]:
    """Split f into [f_d, f_{d-2}, ..., f_{d mod 2}] with every slot harmonic.

    The returned list has d//2 + 1 entries and satisfies
    f == sum_i q**i * slots[i] exactly.
    """
    if f.nvars != q.nvars:
        raise ValueError("form and quadric have different variable counts")
    d = f.degree
    nvars = f.nvars
    qpoly = q.polynomial()
    slots: List[Form] = []
    cur = f
    for i in range(d // 2 + 1):
        dd = d - 2 * i
        if dd <= 1 or cur.is_zero():
            slots.append(cur if not cur.is_zero() else Form.zero(nvars, dd))
            cur = Form.zero(nvars, max(dd - 2, 0))
            continue
        rhs = q.laplacian(cur)
        if rhs.is_zero():
            slots.append(cur)
            cur = Form.zero(nvars, dd - 2)
            continue
        inv = _mult_solver(q, dd)
        basis = monomials_of_degree(nvars, dd - 2)
        index = {m: k for k, m in enumerate(basis)}
        vec = [Fraction(0)] * len(basis)
        for e, c in rhs.terms.items():
            vec[index[e]] = c
        g_terms: Dict[Tuple[int, ...], Fraction] = {}
        for row_i, m in enumerate(basis):
            s = Fraction(0)
            row = inv[row_i]
            for k, v in enumerate(vec):
                if v:
                    s += row[k] * v
            if s:
                g_terms[m] = s
        g = Form(nvars, dd - 2, g_terms)
        slots.append(cur - qpoly * g)
        cur = g
    return slots


def recompose(slots: Sequence[Form], q: QuadraticForm) -> Form:
    """Inverse of harmonic_decompose: sum_i q**i * slots[i]."""
    if not slots:
        raise ValueError("no slots")
    qpoly = q.polynomial()
    total = None
    qpow = Form.monomial((0,) * q.nvars, 1)
    for i, s in enumerate(slots):
        piece = s if i == 0 else qpow * s
        total = piece if total is None else total + piece
        qpow = qpow * qpoly
    return total


def dim_harmonic(nvars: int, degree: int) -> int:
    """Dimension of the harmonic subspace of degree-``degree`` forms."""
    return dim_sym(nvars, degree) - dim_sym(nvars, degree - 2)


def harmonic_basis(degree: int, q: QuadraticForm) -> List[Form]:
    """Deterministic basis of the harmonic forms of the given degree.

    Computed as an exact nullspace of the Laplacian matrix on the monomial
    basis; order follows the canonical monomial order of the free columns.
    """
    nvars = q.nvars
    monos = monomials_of_degree(nvars, degree)
    if degree <= 1:
        return [Form.monomial(m, 1) for m in monos]
    target = monomials_of_degree(nvars, degree - 2)
    tindex = {m: i for i, m in enumerate(target)}
    rows = [[Fraction(0)] * len(monos) for _ in range(len(target))]
    for j, m in enumerate(monos):
        image = q.laplacian(Form.monomial(m, 1))
        for e, c in image.terms.items():
            rows[tindex[e]][j] = c
    basis_vectors = linalg.nullspace(rows, ncols=len(monos))
    out: List[Form] = []
    for v in basis_vectors:
        terms = {monos[i]: c for i, c in enumerate(v) if c != 0}
        out.append(Form(nvars, degree, terms))
    return out


def bombieri_weyl(f: Form, g: Form) -> Fraction:
    """The pairing sum_a f_a g_a a!/d! (relative to the identity quadric).

    Satisfies BW((v.x)**d, (w.x)**d) = (v.w)**d, and makes the harmonic
    summands relative to the identity quadric mutually orthogonal.
    """
    if f.nvars != g.nvars:
        raise ValueError("forms live in different variable counts")
    if f.is_zero() or g.is_zero():
        return Fraction(0)
    if f.degree != g.degree:
        raise ValueError("pairing needs equal degrees")
    dfact = factorial(f.degree)
    total = Fraction(0)
    small, large = (f.terms, g.terms) if len(f.terms) <= len(g.terms) else (g.terms, f.terms)
    for e, c in small.items():
        c2 = large.get(e)
        if c2 is None:
            continue
        weight = 1
        for k in e:
            weight *= factorial(k)
        total += c * c2 * Fraction(weight, dfact)
    return total
