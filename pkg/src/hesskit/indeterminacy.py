"""Divisibility properties of ternary Hessians near the cone locus.

Everything here is ternary (r = 2).  A form whose 2x2 lower Hessian block
h12(f) = f11 f22 - f12**2 vanishes identically has the normal shape

    f = x0**d + x0**(d-1) l(x1, x2) + sum_{i>=2} c_i x0**(d-i) m(x1, x2)**i

and its Hessian is divisible by x0**(2d-4), vanishing exactly when l is
proportional to m or every c_i is zero (either way f defines a cone).  The
gated checks push this to polarized combinations H(f,f,g), H(f,g,g)
(divisible by x0**(2d-4)) and H(f,g,h) (divisible by x0**(d-3)) under
vanishing hypotheses on the pairwise h12, and the limit check asserts that
the lowest-order coefficient of Hess(f(t)) along a one-parameter family
through x0**d is divisible by x0**(d-3).  All checks verify their gates
symbolically before asserting anything.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .forms import Form, monomials_of_degree
from .hessians import TParameterForm, h3, h12, hess, hess_t, lowest_t_order


# ---------------------------------------------------------------------------
# the normal form
# ---------------------------------------------------------------------------


def _linear(a, b) -> Form:
    """The linear form a x1 + b x2 in three variables."""
    return Form.from_coeffs(3, 1, {(0, 1, 0): a, (0, 0, 1): b})


@dataclass(frozen=True)
class ConeNormalForm:
    """Data (d, l, m, c2..cd) realizing the h12-degenerate normal shape."""

    d: int
    l: Form
    m: Form
    cs: Tuple[Fraction, ...]  # c_2 ... c_d

    def __post_init__(self):
        if self.d < 3:
            raise ValueError("need degree >= 3")
        if len(self.cs) != self.d - 1:
            raise ValueError("need exactly d-1 coefficients c_2..c_d")
        for g in (self.l, self.m):
            if g.nvars != 3 or g.degree > 1:
                raise ValueError("l and m must be linear in three variables")
            if any(e[0] for e in g.terms):
                raise ValueError("l and m must not involve x0")

    def build(self) -> Form:
        d = self.d
        x0 = Form.variable(3, 0)
        f = x0 ** d + (x0 ** (d - 1)) * self.l
        mp = self.m
        for i, c in enumerate(self.cs, start=2):
            if c:
                f = f + Fraction(c) * (x0 ** (d - i)) * (mp ** i)
        return f

    def degenerate(self) -> bool:
        """True when the construction forces a vanishing Hessian."""
        if all(c == 0 for c in self.cs):
            return True
        return _proportional(self.l, self.m)


def _proportional(u: Form, v: Form) -> bool:
    if u.is_zero() or v.is_zero():
        return True
    ua = u.terms.get((0, 1, 0), Fraction(0))
    ub = u.terms.get((0, 0, 1), Fraction(0))
    va = v.terms.get((0, 1, 0), Fraction(0))
    vb = v.terms.get((0, 0, 1), Fraction(0))
    return ua * vb - ub * va == 0


@dataclass(frozen=True)
class NormalFormReport:
    d: int
    h12_vanishes: bool
    divisible: bool
    hess_zero: bool
    degenerate_data: bool
    iff_holds: bool

    def passed(self) -> bool:
        return self.h12_vanishes and self.divisible and self.iff_holds

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "h12_vanishes": self.h12_vanishes,
            "divisible_by_x0^(2d-4)": self.divisible,
            "hess_zero": self.hess_zero,
            "degenerate_data": self.degenerate_data,
            "iff_holds": self.iff_holds,
            "passed": self.passed(),
        }


def normal_form_check(n: ConeNormalForm) -> NormalFormReport:
    """The three conclusions for a built normal form.

    The vanishing criterion is two-sided: the Hessian is zero exactly when
    the data is degenerate (l proportional to m, or all c_i zero; in both
    cases the curve is a cone).
    """
    f = n.build()
    H = hess(f)
    h12_ok = h12(f).is_zero()
    divisible = H.is_zero() or f_divisible_by_x0(H, 2 * n.d - 4)
    hess_zero = H.is_zero()
    deg = n.degenerate()
    return NormalFormReport(
        d=n.d,
        h12_vanishes=h12_ok,
        divisible=divisible,
        hess_zero=hess_zero,
        degenerate_data=deg,
        iff_holds=hess_zero == deg,
    )


def f_divisible_by_x0(f: Form, power: int) -> bool:
    if power <= 0:
        return True
    return all(e[0] >= power for e in f.terms)


def multiplicity_profile(n: ConeNormalForm) -> dict:
    """Derivative orders of the built form at the point (0:0:1).

    For l = x2 and m = x1 the curve has a point of multiplicity d-1 there;
    every derivative of order <= d-2 vanishes and exactly one derivative of
    order d-1 survives.  The report names the surviving multi-indices so the
    caller can pin which one it is.
    """
    f = n.build()
    d = n.d
    point = (Fraction(0), Fraction(0), Fraction(1))

    def survivors(order: int) -> List[Tuple[int, int, int]]:
        alive = []
        for exps in monomials_of_degree(3, order):
            g = f
            for var, cnt in enumerate(exps):
                for _ in range(cnt):
                    g = g.diff(var)
            if g.evaluate(point) != 0:
                alive.append(exps)
        return alive

    per_order = [survivors(o) for o in range(d)]
    through = -1
    for o, alive in enumerate(per_order):
        if alive:
            break
        through = o
    return {
        "d": d,
        "vanishing_through_order": through,
        "nonzero_at_order_d_minus_1": per_order[d - 1],
    }


# ---------------------------------------------------------------------------
# gated divisibility checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GateReport:
    name: str
    d: int
    case: str
    hypotheses_ok: bool
    applicable: bool
    divisible: Optional[bool]
    value_nonzero: Optional[bool]

    def passed(self) -> bool:
        return (not self.applicable) or bool(self.divisible)

    def to_json_dict(self) -> dict:
        return {
            "check": self.name,
            "d": self.d,
            "case": self.case,
            "hypotheses_ok": self.hypotheses_ok,
            "applicable": self.applicable,
            "divisible": self.divisible,
            "value_nonzero": self.value_nonzero,
            "passed": self.passed(),
        }


def pair_divisibility_check(f: Form, g: Form, case: str = "input") -> GateReport:
    """Gates h12(f,f) = h12(f,g) = 0 and hess(f) = 0, then x0-divisibility.

    Asserts x0**(2d-4) | H(f,f,g); when additionally h12(g,g) = 0, also
    x0**(2d-4) | H(f,g,g).  Gate failure yields a not-applicable verdict,
    never a pass or a fail.
    """
    d = f.degree
    gates = h12(f).is_zero() and h12(f, g).is_zero() and hess(f).is_zero()
    if not gates:
        return GateReport("pair-divisibility", d, case, False, False, None, None)
    power = 2 * d - 4
    ffg = h3(f, f, g)
    ok = f_divisible_by_x0(ffg, power)
    nonzero = not ffg.is_zero()
    if h12(g).is_zero():
        fgg = h3(f, g, g)
        ok = ok and f_divisible_by_x0(fgg, power)
        nonzero = nonzero or not fgg.is_zero()
    return GateReport("pair-divisibility", d, case, True, True, ok, nonzero)


def triple_divisibility_check(f: Form, g: Form, h: Form,
                              case: str = "input") -> GateReport:
    """Five pairwise h12 gates plus hess(f) = 0, then x0**(d-3) | H(f,g,h).

    The gate list deliberately omits h12(h,h); the conclusion only needs
    degeneracy of f, g and their pairings with h.
    """
    d = f.degree
    gates = (h12(f).is_zero() and h12(f, g).is_zero() and h12(g).is_zero()
             and h12(f, h).is_zero() and h12(g, h).is_zero()
             and hess(f).is_zero())
    if not gates:
        return GateReport("triple-divisibility", d, case, False, False, None, None)
    val = h3(f, g, h)
    ok = f_divisible_by_x0(val, d - 3)
    return GateReport("triple-divisibility", d, case, True, True, ok,
                      not val.is_zero())


# ---------------------------------------------------------------------------
# samplers for the gated families
# ---------------------------------------------------------------------------


def _rand_coeff(rng: random.Random, nonzero: bool = False) -> Fraction:
    while True:
        v = rng.randint(-9, 9)
        if v or not nonzero:
            return Fraction(v)


def _rand_binary(rng: random.Random, x: Form, u: Form, degree: int,
                 monic_x: bool = False) -> Form:
    """Random form in the pencil spanned by x and u of the given degree."""
    out = x ** degree if monic_x else Form.zero(3, degree)
    start = 1 if monic_x else 0
    for i in range(start, degree + 1):
        c = _rand_coeff(rng)
        if c:
            out = out + c * (x ** (degree - i)) * (u ** i)
    if out.is_zero():
        out = x ** degree
    return out


def sample_cone(d: int, rng: random.Random,
                x2_free: bool = False) -> Tuple[Form, Form]:
    """A binary-in-(x0, u) cone of degree d with monic x0**d; returns (f, u).

    Cones of this shape satisfy h12(f) = 0 and hess(f) = 0 for every choice
    of the direction u = a x1 + b x2.
    """
    a = _rand_coeff(rng, nonzero=True)
    b = Fraction(0) if x2_free else _rand_coeff(rng)
    u = _linear(a, b)
    x0 = Form.variable(3, 0)
    f = _rand_binary(rng, x0, u, d, monic_x=True)
    return f, u


def _transverse_direction(u: Form) -> Tuple[Fraction, Fraction]:
    """(w1, w2) spanning the kernel of u on the (x1, x2) plane."""
    a = u.terms.get((0, 1, 0), Fraction(0))
    b = u.terms.get((0, 0, 1), Fraction(0))
    return (b, -a)


def sample_gated_pair(d: int, rng: random.Random) -> Tuple[Form, Form, str]:
    """(f, g) passing the first-clause gates, tagged by proof branch.

    Branch "f11-zero": f = x0**d + c1 x0**(d-1) u, any g.
    Branch "directional-g": general binary cone f, g of degree <= 1 along
    the u-transverse direction (kills h12(f, g)).
    Branch "shared-direction": x2-free cone f and a full normal form g with
    m = x1; all mixed h12 pairings vanish term by term.
    """
    branch = rng.choice(["f11-zero", "directional-g", "shared-direction"])
    x0 = Form.variable(3, 0)
    if branch == "f11-zero":
        u = _linear(_rand_coeff(rng, nonzero=True), _rand_coeff(rng))
        f = x0 ** d + _rand_coeff(rng, nonzero=True) * (x0 ** (d - 1)) * u
        g = _rand_dense(rng, d)
        return f, g, branch
    if branch == "directional-g":
        f, u = sample_cone(d, rng)
        w = _transverse_direction(u)
        v = _linear(*w)
        g0 = _rand_binary(rng, x0, u, d)
        g1 = _rand_binary(rng, x0, u, d - 1)
        g = g0 + v * g1
        return f, g, branch
    f, _ = sample_cone(d, rng, x2_free=True)
    g = _normal_form_sample(d, rng).build()
    return f, g, branch


def _rand_dense(rng: random.Random, d: int) -> Form:
    terms = {}
    for exps in monomials_of_degree(3, d):
        c = rng.randint(-9, 9)
        if c and rng.random() < 0.6:
            terms[exps] = Fraction(c)
    if not terms:
        terms[(d, 0, 0)] = Fraction(1)
    return Form.from_coeffs(3, d, terms)


def _normal_form_sample(d: int, rng: random.Random,
                        m: Optional[Form] = None) -> ConeNormalForm:
    l = _linear(_rand_coeff(rng), _rand_coeff(rng))
    m = m if m is not None else _linear(Fraction(1), Fraction(0))
    cs = tuple(_rand_coeff(rng) for _ in range(d - 1))
    return ConeNormalForm(d, l, m, cs)


def sample_gated_triple(d: int, rng: random.Random) -> Tuple[Form, Form, Form, str]:
    """(f, g, h) passing all six triple gates, tagged by proof branch.

    Branch "g11-zero": linear-tail g = x0**d + x0**(d-1) l; f a general
    binary cone; h of degree <= 1 along the transverse direction of f.
    Branch "b-zero-h22": x2-free cone f, shared-direction normal form g,
    h with no x2**2 part.
    Branch "c-zero": f = x0**d + c1 x0**(d-1) u with arbitrary direction,
    shared-direction normal form g, h with no x2**2 part.
    """
    branch = rng.choice(["g11-zero", "b-zero-h22", "c-zero"])
    x0 = Form.variable(3, 0)
    if branch == "g11-zero":
        f, u = sample_cone(d, rng)
        l = _linear(_rand_coeff(rng), _rand_coeff(rng))
        g = x0 ** d + (x0 ** (d - 1)) * l
        w = _transverse_direction(u)
        v = _linear(*w)
        h = _rand_binary(rng, x0, u, d) + v * _rand_binary(rng, x0, u, d - 1)
        return f, g, h, branch
    if branch == "b-zero-h22":
        f, _ = sample_cone(d, rng, x2_free=True)
    else:
        u = _linear(_rand_coeff(rng, nonzero=True), _rand_coeff(rng))
        f = x0 ** d + _rand_coeff(rng, nonzero=True) * (x0 ** (d - 1)) * u
    g = _normal_form_sample(d, rng).build()
    h = _no_x2sq_sample(d, rng)
    return f, g, h, branch


def _no_x2sq_sample(d: int, rng: random.Random) -> Form:
    """Random ternary form of degree d with x2-degree at most one."""
    terms = {}
    for exps in monomials_of_degree(3, d):
        if exps[2] > 1:
            continue
        c = rng.randint(-9, 9)
        if c:
            terms[exps] = Fraction(c)
    if not terms:
        terms[(d, 0, 0)] = Fraction(1)
    return Form.from_coeffs(3, d, terms)


# ---------------------------------------------------------------------------
# limits along one-parameter families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitReport:
    d: int
    status: str  # divisible | not-divisible | inconclusive-limit
    lowest_order: Optional[int]
    required_power: int

    def passed(self) -> bool:
        return self.status != "not-divisible"

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "status": self.status,
            "lowest_order": self.lowest_order,
            "required_power": self.required_power,
        }


def limit_divisibility_check(family: TParameterForm) -> LimitReport:
    """Lowest-order coefficient of hess along the family, x0-divisibility.

    The family must start at x0**d (slot at t-order zero).  A family whose
    Hessian vanishes identically in t has no limit to test.
    """
    slots = family.slots
    d = family.degree
    base = slots.get(0)
    x0d = Form.monomial((d, 0, 0))
    if base != x0d:
        raise ValueError("family must have x0**d as its order-zero slot")
    if d < 4:
        raise ValueError("need degree >= 4")
    H = hess_t(family)
    if H is None:
        return LimitReport(d, "inconclusive-limit", None, d - 3)
    order, lead = lowest_t_order(H)
    ok = f_divisible_by_x0(lead, d - 3)
    return LimitReport(d, "divisible" if ok else "not-divisible", order, d - 3)


def sample_family(d: int, rng: random.Random, max_slots: int = 3,
                  max_exponent: int = 4) -> TParameterForm:
    """Random truncated family x0**d + sum of t-weighted random forms."""
    x0d = Form.monomial((d, 0, 0))
    slots: Dict[int, Form] = {0: x0d}
    nslots = rng.randint(1, max_slots)
    exps = rng.sample(range(1, max_exponent + 1), min(nslots, max_exponent))
    for a in exps:
        g = _rand_dense(rng, d)
        slots[a] = g
    return TParameterForm(slots)


NAMED_FAMILIES = {
    "quartic-powers": lambda: TParameterForm({
        0: Form.monomial((4, 0, 0)),
        1: Form.from_coeffs(3, 4, {(0, 4, 0): 1, (0, 0, 4): 1}),
    }),
    "quartic-quadric": lambda: TParameterForm({
        0: Form.monomial((4, 0, 0)),
        1: (Form.from_coeffs(3, 2, {(1, 1, 0): 1, (0, 0, 2): 1}) ** 2),
    }),
    "quintic-mixed": lambda: TParameterForm({
        0: Form.monomial((5, 0, 0)),
        1: Form.from_coeffs(3, 5, {(0, 5, 0): 1, (0, 0, 5): 1}),
        2: Form.from_coeffs(3, 5, {(0, 3, 2): 1, (1, 2, 2): -2}),
    }),
    "sextic-staircase": lambda: TParameterForm({
        0: Form.monomial((6, 0, 0)),
        1: Form.from_coeffs(3, 6, {(0, 6, 0): 1}),
        2: Form.from_coeffs(3, 6, {(0, 0, 6): 1, (2, 2, 2): 3}),
        3: Form.from_coeffs(3, 6, {(1, 1, 4): -1}),
    }),
}


# ---------------------------------------------------------------------------
# exclusion bookkeeping for the certificate
# ---------------------------------------------------------------------------


def exclusion_gate(d: int) -> dict:
    """Which special values the limit-divisibility bound can exclude.

    The Hessian at q**k has x0-adic valuation 0, at q**k l it is 3, and at
    q**(k-1) l**2 it is 6 (ternary case).  A value can be excluded from the
    indeterminacy limits exactly when its valuation is smaller than d-3, the
    guaranteed divisibility order of every limit.
    """
    if d < 4:
        raise ValueError("need d >= 4")
    k, odd = divmod(d, 2)
    gates = {}
    if not odd:
        gates["hyperbolic-power"] = {
            "point": f"q^{k}",
            "valuation": 0,
            "excluded": d - 3 > 0,
            "needs": "k >= 2",
            "available": k >= 2,
        }
        gates["quadric-double-line"] = {
            "point": f"q^{k - 1}*l^2",
            "valuation": 6,
            "excluded": d - 3 > 6,
            "needs": "k >= 5",
            "available": k >= 5,
        }
    else:
        gates["quadric-line"] = {
            "point": f"q^{k}*l",
            "valuation": 3,
            "excluded": d - 3 > 3,
            "needs": "k >= 3",
            "available": k >= 3,
        }
    for rec in gates.values():
        assert rec["excluded"] == rec["available"]
    return {"d": d, "k": k, "odd": bool(odd), "gates": gates}
