"""Injectivity certificates for the differential of the Hessian map.

The differential at a form f sends a direction g to the first-order part of
hess(f + eps g).  Over the monomial bases of Sym^d and Sym^((r+1)(d-2)) this
is an exact rational matrix; the projective statement quotients the domain by
<f> and the target by <hess f>.  The quotient rank is computed as

    rank [M' | column(hess f)] - 1

where M' drops the column of f's coefficient-largest monomial, a concrete
complement of <f>.  Since the f-column itself is (r+1) times the Hessian
column, the span of [M' | hess] equals the span of [M | hess], making the
choice of complement immaterial; a randomized second complement re-checks
that on demand.

Injectivity at the special points q**k, q**k l, q**(k-1) l**2 is conditional
on an integer condition having no root in a finite m-range; the certificate
evaluates the condition first and claims nothing when it fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import curves
from .forms import Form, dim_sym, monomials_of_degree
from .harmonic import QuadraticForm, dim_harmonic, harmonic_basis, harmonic_decompose
from .hessians import adjugate_second_partials, hess
from .linalg import rank_with_certificate
from .orbit_checks import hyperbolic_q, power_product


# ---------------------------------------------------------------------------
# special points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialPoint:
    """A distinguished orbit point, encoded by its (q-power, l-power)."""

    kind: str  # qk | qkl | qk1l2
    k: int

    def __post_init__(self):
        if self.kind not in ("qk", "qkl", "qk1l2"):
            raise ValueError(f"unknown special point kind {self.kind!r}")
        kmin = 2 if self.kind == "qk1l2" else 1
        if self.k < kmin:
            raise ValueError(f"{self.kind} needs k >= {kmin}")

    @property
    def degree(self) -> int:
        return 2 * self.k + (1 if self.kind == "qkl" else 0)

    @property
    def powers(self) -> Tuple[int, int]:
        if self.kind == "qk":
            return (self.k, 0)
        if self.kind == "qkl":
            return (self.k, 1)
        return (self.k - 1, 2)

    @property
    def condition(self) -> str:
        return {"qk": "evenA", "qkl": "odd", "qk1l2": "evenB"}[self.kind]

    @property
    def condition_m_range(self) -> Tuple[int, int]:
        return (1, self.k) if self.kind == "qk" else (0, self.k)

    def form(self, r: int) -> Form:
        qp, lp = self.powers
        return power_product(r, qp, lp)

    def label(self) -> str:
        qp, lp = self.powers
        qpart = "q" if qp == 1 else f"q^{qp}"
        if lp == 0:
            return qpart
        lpart = "l" if lp == 1 else f"l^{lp}"
        return f"{qpart}*{lpart}"


# ---------------------------------------------------------------------------
# the differential as a matrix
# ---------------------------------------------------------------------------


@dataclass
class DifferentialMatrix:
    nvars: int
    degree: int
    row_monomials: List[Tuple[int, ...]]
    col_monomials: List[Tuple[int, ...]]
    columns: List[Dict[Tuple[int, ...], Fraction]]  # sparse column forms
    hess_column: Dict[Tuple[int, ...], Fraction]

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.row_monomials), len(self.col_monomials))

    def rows_for(self, selected: Sequence[int], with_hess: bool) -> List[List[Fraction]]:
        """Dense row-major matrix over the selected columns."""
        cols = [self.columns[j] for j in selected]
        if with_hess:
            cols = cols + [self.hess_column]
        zero = Fraction(0)
        return [[c.get(mono, zero) for c in cols] for mono in self.row_monomials]


def _image_of_direction(adj, g: Form) -> Form:
    """Sum over i, j of adj[i][j] * d_i d_j g: the jet of det along g."""
    n = g.nvars
    out = None
    for i in range(n):
        gi = g.diff(i)
        for j in range(n):
            gij = gi.diff(j)
            if gij.is_zero():
                continue
            term = adj[i][j] * gij
            out = term if out is None else out + term
    if out is None:
        degree = (g.nvars) * (g.degree - 2) if g.degree >= 2 else 0
        return Form.zero(n, max(degree, 0))
    return out


def differential_matrix(f: Form) -> DifferentialMatrix:
    """Exact matrix of the Hessian differential at f over monomial bases."""
    H = hess(f)
    if H.is_zero():
        raise ValueError("differential is not certified at a vanishing Hessian")
    n, d = f.nvars, f.degree
    target_degree = n * (d - 2)
    adj = adjugate_second_partials(f)
    col_monos = monomials_of_degree(n, d)
    row_monos = monomials_of_degree(n, target_degree)
    columns = []
    for mono in col_monos:
        img = _image_of_direction(adj, Form.monomial(mono))
        columns.append(dict(img.terms))
    return DifferentialMatrix(
        nvars=n, degree=d,
        row_monomials=row_monos, col_monomials=col_monos,
        columns=columns, hess_column=dict(H.terms),
    )


# ---------------------------------------------------------------------------
# rank reports
# ---------------------------------------------------------------------------


@dataclass
class RankReport:
    point: str
    r: int
    d: int
    domain_dim: int
    matrix_shape: Tuple[int, int]
    rank: int
    injective: bool
    method: str
    probe_primes: Tuple[int, ...]
    precondition: Optional[dict] = None
    claim: str = "computed"
    complement_checked: bool = False

    def to_json_dict(self) -> dict:
        out = {
            "point": self.point,
            "r": self.r,
            "d": self.d,
            "domain_dim": self.domain_dim,
            "matrix_shape": list(self.matrix_shape),
            "rank": self.rank,
            "injective": self.injective,
            "method": self.method,
            "probe_primes": list(self.probe_primes),
            "claim": self.claim,
            "complement_checked": self.complement_checked,
        }
        if self.precondition is not None:
            out["precondition"] = self.precondition
        return out


def _largest_coefficient_monomial(f: Form) -> Tuple[int, ...]:
    """The monomial with the largest |coefficient|, canonical order as tie-break."""
    return max(f.terms, key=lambda e: (abs(f.terms[e]), e))


def projective_injectivity(f: Form, label: Optional[str] = None,
                           rng: Optional[random.Random] = None,
                           force_exact: bool = False) -> RankReport:
    """Rank of the induced map on tangent spaces of projective space.

    The domain complement drops f's coefficient-largest monomial; the Hessian
    column is appended so the quotient by <hess f> costs one final rank unit.
    With ``rng`` given, a second computation over a randomized complement
    (different dropped monomial, columns shifted by random multiples of the
    Hessian column) must reproduce the rank.
    """
    M = differential_matrix(f)
    n, d = f.nvars, f.degree
    domain_dim = dim_sym(n, d) - 1
    lead = _largest_coefficient_monomial(f)
    selected = [j for j, mono in enumerate(M.col_monomials) if mono != lead]
    rows = M.rows_for(selected, with_hess=True)
    rank, method, primes = rank_with_certificate(rows, force_exact=force_exact)
    projective_rank = rank - 1

    complement_checked = False
    if rng is not None:
        others = [e for e in f.terms if e != lead]
        drop = rng.choice(others) if others else lead
        sel2 = [j for j, mono in enumerate(M.col_monomials) if mono != drop]
        rows2 = M.rows_for(sel2, with_hess=True)
        hcol = len(sel2)
        for row in rows2:
            h = row[hcol]
            if h:
                for j in range(hcol):
                    row[j] += h * (1 + rng.randrange(3))
        # Deterministic shift per column would cancel rank information only
        # if it collapsed the span; using the hess column keeps the span.
        rank2, _, _ = rank_with_certificate(rows2, force_exact=force_exact)
        if rank2 != rank:
            raise AssertionError("complement choice changed the quotient rank")
        complement_checked = True

    return RankReport(
        point=label or "form",
        r=n - 1, d=d,
        domain_dim=domain_dim,
        matrix_shape=(len(rows), len(rows[0]) if rows else 0),
        rank=projective_rank,
        injective=projective_rank == domain_dim,
        method=method,
        probe_primes=primes,
        complement_checked=complement_checked,
    )


def precondition_report(point: SpecialPoint, r: int) -> dict:
    lo, hi = point.condition_m_range
    fn = curves.CONDITIONS[point.condition][0]
    violations = [m for m in range(lo, hi + 1) if fn(r, point.k, m) == 0]
    return {
        "condition": point.condition,
        "k": point.k,
        "m_range": [lo, hi],
        "violations": violations,
        "holds": not violations,
    }


def verify_special_point_rank(point: SpecialPoint, r: int,
                              rng: Optional[random.Random] = None,
                              force_exact: bool = False) -> RankReport:
    """Conditional injectivity certificate at one special point.

    The integer condition is evaluated first.  When it holds, the exact rank
    must certify injectivity, and a failure raises.  When it is violated the
    rank is still computed and reported, but the claim field records that no
    injectivity statement is made either way.
    """
    pre = precondition_report(point, r)
    f = point.form(r)
    report = projective_injectivity(f, label=point.label(), rng=rng,
                                    force_exact=force_exact)
    report.precondition = pre
    if pre["holds"]:
        report.claim = "injective"
        if not report.injective:
            raise AssertionError(
                f"condition holds at {point.label()} but rank "
                f"{report.rank} < {report.domain_dim}")
    else:
        report.claim = "no-claim"
    return report


# ---------------------------------------------------------------------------
# block structure at q**k
# ---------------------------------------------------------------------------


@dataclass
class BlockReport:
    k: int
    r: int
    blocks: List[dict] = field(default_factory=list)
    all_single_slot: bool = True
    all_scalar: bool = True
    scalars_match: bool = True

    def passed(self) -> bool:
        return self.all_single_slot and self.all_scalar and self.scalars_match

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "blocks": self.blocks,
            "all_single_slot": self.all_single_slot,
            "all_scalar": self.all_scalar,
            "scalars_match": self.scalars_match,
            "passed": self.passed(),
        }


def _taylor_even_c0_c1(r: int, k: int, m: int) -> Tuple[Fraction, Fraction]:
    from .orbit_checks import _predicted_constants
    return _predicted_constants("even", r, k, m)


def block_structure_check(k: int, r: int) -> BlockReport:
    """The differential at q**k acts by a scalar on each harmonic block.

    For each i the directions q**(k-i) h with h harmonic of degree 2i must map
    to lam_i * q**((r+1)(k-1)-i) h with one scalar lam_i for the whole block.
    For i >= 1 that scalar is the first-order coefficient of the even
    perturbation family at m = i; at i = 0 the direction is q**k itself and
    the scalar is (r+1) times the Hessian constant.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    qform = QuadraticForm.canonical_hyperbolic(r)
    f = power_product(r, k, 0)
    adj = adjugate_second_partials(f)
    qpoly = hyperbolic_q(r)
    report = BlockReport(k=k, r=r)
    target_total = (r + 1) * (k - 1)

    for i in range(0, k + 1):
        slot = target_total - i
        basis = harmonic_basis(2 * i, qform) if i else [Form.monomial((0,) * (r + 1))]
        c0, c1 = _taylor_even_c0_c1(r, k, max(i, 1))
        lam = (r + 1) * c0 if i == 0 else c1
        qpow = qpoly ** slot if slot else None
        single = True
        scalar_ok = True
        for h in basis:
            direction = h if i == k else (qpoly ** (k - i)) * h
            img = _image_of_direction(adj, direction)
            slots = harmonic_decompose(img, qform)
            nonzero = [t for t, s in enumerate(slots) if not s.is_zero()]
            if nonzero != [slot]:
                single = False
            expected = lam * (qpow * h if qpow is not None else h)
            if img != expected:
                scalar_ok = False
        report.blocks.append({
            "i": i,
            "block_dim": len(basis),
            "target_slot": slot,
            "scalar": str(lam),
            "single_slot": single,
            "scalar_holds": scalar_ok,
        })
        report.all_single_slot &= single
        report.all_scalar &= scalar_ok
    report.scalars_match = report.all_scalar
    return report


# ---------------------------------------------------------------------------
# multiplication-projection injectivity
# ---------------------------------------------------------------------------


def pijk_injectivity(i: int, k: int, r: int,
                     force_exact: bool = False) -> RankReport:
    """The map h -> top harmonic summand of h * l**k is injective on H_i."""
    if i < 0 or k < 0:
        raise ValueError("need i, k >= 0")
    if k == 0:
        raise ValueError("k = 0 is the identity map; nothing to certify")
    qform = QuadraticForm.canonical_hyperbolic(r)
    basis = harmonic_basis(i, qform)
    lk = Form.monomial((k,) + (0,) * r)
    target_monos = monomials_of_degree(r + 1, i + k)
    zero = Fraction(0)
    cols = []
    for h in basis:
        top = harmonic_decompose(h * lk, qform)[0]
        cols.append(dict(top.terms))
    rows = [[c.get(mono, zero) for c in cols] for mono in target_monos]
    rank, method, primes = rank_with_certificate(rows, force_exact=force_exact)
    dim = dim_harmonic(r + 1, i)
    return RankReport(
        point=f"P(i={i},k={k})",
        r=r, d=i,
        domain_dim=dim,
        matrix_shape=(len(rows), len(cols)),
        rank=rank,
        injective=rank == dim,
        method=method,
        probe_primes=primes,
        claim="injective" if rank == dim else "not-injective",
    )
