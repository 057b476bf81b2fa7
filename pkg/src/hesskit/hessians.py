"""Hessian determinants, first-order jets, and t-parameter families.

``hess`` is the exact Hessian determinant of a form.  ``hess_eps`` tracks a
first-order perturbation f + eps*g through the determinant using dual-number
(jet) arithmetic, so its eps-part is the directional derivative of the Hessian
map at f in direction g.  The same derivative can be read off the Jacobi
formula as trace(adj(D2 f) * D2 g); both routes are exposed and tested against
each other.

For three variables the polarized operators h12 and h3 are provided, together
with families depending on a parameter t (polynomially, with Form
coefficients) and their exact Hessians.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .forms import Form

# ---------------------------------------------------------------------------
# determinants of matrices with ring-element entries
# ---------------------------------------------------------------------------


def _det_by_expansion(mat):
    """Determinant by first-row Laplace expansion with column-mask memo.

    Entries only need +, -, * (commutative).  Intended for the small matrices
    that show up here (at most 5x5).
    """
    n = len(mat)
    memo: Dict[int, object] = {}

    def rec(row: int, mask: int):
        if row == n - 1:
            col = mask.bit_length() - 1  # only one bit left
            return mat[row][col]
        if mask in memo:
            return memo[mask]
        acc = None
        sign = 1
        m = mask
        while m:
            low = m & (-m)
            col = low.bit_length() - 1
            term = mat[row][col] * rec(row + 1, mask & ~low)
            if acc is None:
                acc = term if sign > 0 else -term
            else:
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
            m &= m - 1
        memo[mask] = acc
        return acc

    return rec(0, (1 << n) - 1)


def hess(f: Form) -> Form:
    """Exact Hessian determinant det(d2 f / dxi dxj).

    For f of degree d in n variables the result is homogeneous of degree
    n*(d-2); degree-<2 input gives the zero form of that (clamped) degree.
    """
    n = f.nvars
    target = max(n * (f.degree - 2), 0)
    if f.degree < 2 or f.is_zero():
        return Form.zero(n, target)
    return _det_by_expansion(f.second_partials())


def adjugate_second_partials(f: Form) -> List[List[Form]]:
    """Adjugate of the matrix of second partials of f.

    adj[i][j] is (-1)**(i+j) times the (j,i) minor; since the matrix is
    symmetric the adjugate is symmetric too.
    """
    mat = f.second_partials()
    n = f.nvars
    adj: List[List[Optional[Form]]] = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            minor = [[mat[a][b] for b in range(n) if b != i] for a in range(n) if a != j]
            entry = _det_by_expansion(minor)
            if (i + j) % 2:
                entry = -entry
            adj[i][j] = entry
            adj[j][i] = entry
    return adj  # type: ignore[return-value]


def hess_directional(f: Form, g: Form) -> Form:
    """d/deps Hess(f + eps g) at eps=0, via trace(adj(D2 f) * D2 g)."""
    if f.degree != g.degree or f.nvars != g.nvars:
        raise ValueError("f and g must share variables and degree")
    adj = adjugate_second_partials(f)
    gm = g.second_partials()
    n = f.nvars
    total = Form.zero(n, max(n * (f.degree - 2), 0))
    for i in range(n):
        for j in range(n):
            total = total + adj[i][j] * gm[j][i]
    return total


class EpsilonForm:
    """First-order jet a + eps*b with Form components (eps**2 = 0)."""

    __slots__ = ("a", "b")

    def __init__(self, a: Form, b: Form):
        self.a = a
        self.b = b

    def __add__(self, other: "EpsilonForm") -> "EpsilonForm":
        return EpsilonForm(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "EpsilonForm") -> "EpsilonForm":
        return EpsilonForm(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "EpsilonForm":
        return EpsilonForm(-self.a, -self.b)

    def __mul__(self, other: "EpsilonForm") -> "EpsilonForm":
        return EpsilonForm(self.a * other.a, self.a * other.b + self.b * other.a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EpsilonForm):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __repr__(self) -> str:
        return f"EpsilonForm({self.a!r}, {self.b!r})"


def hess_eps(f: Form, g: Form) -> Tuple[Form, Form]:
    """Hessian of f + eps*g to first order: returns (Hess f, eps-part).

    Computed by running the determinant in jet arithmetic; no truncation error
    because eps**2 is dropped exactly at each multiplication.
    """
    if f.degree != g.degree or f.nvars != g.nvars:
        raise ValueError("f and g must share variables and degree")
    n = f.nvars
    target = max(n * (f.degree - 2), 0)
    if f.degree < 2:
        return Form.zero(n, target), Form.zero(n, target)
    fm = f.second_partials()
    gm = g.second_partials()
    jet = [[EpsilonForm(fm[i][j], gm[i][j]) for j in range(n)] for i in range(n)]
    d = _det_by_expansion(jet)
    return d.a, d.b


# ---------------------------------------------------------------------------
# polarized operators in three variables
# ---------------------------------------------------------------------------


def _require_ternary(*forms: Form) -> None:
    for f in forms:
        if f.nvars != 3:
            raise ValueError("this operator is defined for three variables only")


def h12(f: Form, g: Optional[Form] = None) -> Form:
    """Polarized 2x2 lower-right Hessian minor in three variables.

    h12(f, g) = (f11*g22 - 2*f12*g12 + f22*g11) / 2, and h12(f) is the
    diagonal f11*f22 - f12**2.
    """
    if g is None:
        _require_ternary(f)
        f11 = f.diff(1).diff(1)
        f22 = f.diff(2).diff(2)
        f12 = f.diff(1).diff(2)
        return f11 * f22 - f12 * f12
    _require_ternary(f, g)
    if f.degree != g.degree:
        raise ValueError("h12 arguments must have equal degree")
    f11, f12, f22 = f.diff(1).diff(1), f.diff(1).diff(2), f.diff(2).diff(2)
    g11, g12, g22 = g.diff(1).diff(1), g.diff(1).diff(2), g.diff(2).diff(2)
    return (f11 * g22 - (f12 * g12).scale(2) + f22 * g11).scale(Fraction(1, 2))


_PERM3 = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def h3(f: Form, g: Form, h: Form) -> Form:
    """Full polarization of the ternary Hessian determinant.

    Symmetric trilinear, normalized so that h3(f, f, f) == hess(f): six
    determinants whose rows are drawn from the three Hessian matrices, divided
    by 6.
    """
    _require_ternary(f, g, h)
    if not (f.degree == g.degree == h.degree):
        raise ValueError("h3 arguments must have equal degree")
    mats = (f.second_partials(), g.second_partials(), h.second_partials())
    total = None
    for perm in _PERM3:
        rows = [mats[perm[row]][row] for row in range(3)]
        d = _det_by_expansion(rows)
        total = d if total is None else total + d
    return total.scale(Fraction(1, 6))


# ---------------------------------------------------------------------------
# families depending polynomially on a parameter t
# ---------------------------------------------------------------------------


class TParameterForm:
    """A form whose coefficients are polynomials in a parameter t.

    Stored as {t_exponent: Form}; all slot forms share the same variable count
    and degree.  Fractional parameter exponents are expected to be cleared to
    integers by the caller (substituting t -> t**N changes nothing that is
    checked here: orders scale, vanishing does not).
    """

    __slots__ = ("nvars", "degree", "slots")

    def __init__(self, slots: Mapping[int, Form]):
        clean: Dict[int, Form] = {}
        nvars = None
        degree = None
        for a, form in slots.items():
            if not isinstance(a, int) or a < 0:
                raise ValueError("t-exponents must be nonnegative integers")
            if form.is_zero():
                continue
            if nvars is None:
                nvars, degree = form.nvars, form.degree
            elif form.nvars != nvars or form.degree != degree:
                raise ValueError("all slots must share variable count and degree")
            clean[a] = form
        if nvars is None:
            raise ValueError("a t-parameter family needs at least one nonzero slot")
        self.nvars = nvars
        self.degree = degree
        self.slots = clean

    def sorted_slots(self) -> List[Tuple[int, Form]]:
        return sorted(self.slots.items())

    def at_t(self, value) -> Form:
        value = Fraction(value)
        total = Form.zero(self.nvars, self.degree)
        for a, form in self.slots.items():
            total = total + form.scale(value ** a)
        return total

    def __add__(self, other: "TParameterForm") -> "TParameterForm":
        merged: Dict[int, Form] = dict(self.slots)
        for a, form in other.slots.items():
            merged[a] = merged[a] + form if a in merged else form
        merged = {a: f for a, f in merged.items() if not f.is_zero()}
        if not merged:
            raise ValueError("sum of families vanished identically; not representable")
        return TParameterForm(merged)

    def __mul__(self, other: "TParameterForm") -> "TParameterForm":
        acc: Dict[int, Form] = {}
        for a1, f1 in self.slots.items():
            for a2, f2 in other.slots.items():
                key = a1 + a2
                prod = f1 * f2
                acc[key] = acc[key] + prod if key in acc else prod
        acc = {a: f for a, f in acc.items() if not f.is_zero()}
        if not acc:
            # Zero products cannot happen for nonzero forms over the rationals.
            raise AssertionError("product of nonzero families vanished")
        return TParameterForm(acc)

    def to_json_dict(self) -> dict:
        return {"slots": [{"t": a, "form": f.to_json_dict()} for a, f in self.sorted_slots()]}

    @staticmethod
    def from_json_dict(data: Mapping) -> "TParameterForm":
        return TParameterForm({int(s["t"]): Form.from_json_dict(s["form"]) for s in data["slots"]})


def hess_t(family: TParameterForm) -> Optional[TParameterForm]:
    """Exact Hessian of a t-parameter family, as a family again.

    Returns None when the Hessian vanishes identically in t (a family of
    cones), since TParameterForm cannot represent the zero family.
    """
    n = family.nvars
    entries: List[List[Dict[int, Form]]] = [[{} for _ in range(n)] for _ in range(n)]
    for a, form in family.slots.items():
        mat = form.second_partials()
        for i in range(n):
            for j in range(n):
                if not mat[i][j].is_zero():
                    cell = entries[i][j]
                    cell[a] = cell[a] + mat[i][j] if a in cell else mat[i][j]

    def tp_mul(x: Dict[int, Form], y: Dict[int, Form]) -> Dict[int, Form]:
        acc: Dict[int, Form] = {}
        for a1, f1 in x.items():
            for a2, f2 in y.items():
                key = a1 + a2
                prod = f1 * f2
                if key in acc:
                    acc[key] = acc[key] + prod
                else:
                    acc[key] = prod
        return {a: f for a, f in acc.items() if not f.is_zero()}

    def tp_add(x: Dict[int, Form], y: Dict[int, Form]) -> Dict[int, Form]:
        out = dict(x)
        for a, f in y.items():
            out[a] = out[a] + f if a in out else f
        return {a: f for a, f in out.items() if not f.is_zero()}

    def tp_neg(x: Dict[int, Form]) -> Dict[int, Form]:
        return {a: -f for a, f in x.items()}

    class _Cell:
        __slots__ = ("d",)

        def __init__(self, d):
            self.d = d

        def __mul__(self, other):
            return _Cell(tp_mul(self.d, other.d))

        def __add__(self, other):
            return _Cell(tp_add(self.d, other.d))

        def __sub__(self, other):
            return _Cell(tp_add(self.d, tp_neg(other.d)))

        def __neg__(self):
            return _Cell(tp_neg(self.d))

    det = _det_by_expansion([[_Cell(entries[i][j]) for j in range(n)] for i in range(n)])
    if not det.d:
        return None
    return TParameterForm(det.d)


def lowest_t_order(family: Optional[TParameterForm]) -> Optional[Tuple[int, Form]]:
    """Lowest t-exponent with a nonzero coefficient form, or None for None."""
    if family is None:
        return None
    a = min(family.slots)
    return a, family.slots[a]


def hessian_expansion(family: TParameterForm) -> Optional[TParameterForm]:
    """Hessian of x0**d + sum_i t**a_i f_i via the polarized operators.

    Requires three variables, a t**0 slot equal to exactly x0**d, and uses
    ordered pair/triple sums:

        hess = d(d-1) x0**(d-2) * sum_{i,j} t**(a_i+a_j) h12(f_i, f_j)
             + sum_{i,j,k} t**(a_i+a_j+a_k) h3(f_i, f_j, f_k)

    Returns None when the result vanishes identically.  This is the slow dual
    route used to cross-check hess_t.
    """
    if family.nvars != 3:
        raise ValueError("expansion route is defined for three variables only")
    d = family.degree
    lead = family.slots.get(0)
    expected = Form.monomial((d, 0, 0), 1)
    if lead is None or lead != expected:
        raise ValueError("expansion route expects the t**0 slot to be exactly x0**d")
    rest = [(a, f) for a, f in family.sorted_slots() if a != 0]
    scale = Form.monomial((d - 2, 0, 0), d * (d - 1))
    acc: Dict[int, Form] = {}

    def put(a: int, form: Form) -> None:
        if form.is_zero():
            return
        acc[a] = acc[a] + form if a in acc else form

    for ai, fi in rest:
        for aj, fj in rest:
            put(ai + aj, scale * h12(fi, fj))
    for ai, fi in rest:
        for aj, fj in rest:
            for ak, fk in rest:
                put(ai + aj + ak, h3(fi, fj, fk))
    acc = {a: f for a, f in acc.items() if not f.is_zero()}
    if not acc:
        return None
    return TParameterForm(acc)
