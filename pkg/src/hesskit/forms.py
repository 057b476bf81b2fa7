"""Exact sparse arithmetic for homogeneous polynomials over the rationals.

A form in ``nvars`` variables x0..x_{nvars-1} is a dictionary mapping exponent
tuples to nonzero ``Fraction`` coefficients.  Zero coefficients are never
stored, so dictionary equality is polynomial equality.  Nothing in this module
touches floating point.

The canonical term order used everywhere (serialization, matrix column
indexing, leading monomials) is descending lexicographic on exponent tuples
with x0 most significant.  Within a fixed degree this is the usual
degree-lexicographic order.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, factorial
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]

_ZERO = Fraction(0)


def dim_sym(nvars: int, degree: int) -> int:
    """Dimension of the space of degree-``degree`` forms in ``nvars`` variables."""
    if degree < 0:
        return 0
    return comb(degree + nvars - 1, nvars - 1)


def monomials_of_degree(nvars: int, degree: int) -> List[Exponent]:
    """All exponent tuples of the given total degree, in canonical order.

    Canonical order is descending lexicographic, x0 most significant, so the
    first entry is (degree, 0, ..., 0) and the last is (0, ..., 0, degree).
    """
    out: List[Exponent] = []

    def rec(prefix: List[int], remaining: int, slots: int) -> None:
        if slots == 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slots - 1)

    if nvars <= 0:
        raise ValueError("nvars must be positive")
    rec([], degree, nvars)
    return out


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficient must be int, Fraction or string, got {type(c)!r}")


class Form:
    """An exactly represented homogeneous polynomial.

    Instances are immutable by convention: no method mutates ``terms`` after
    construction, and all arithmetic returns new objects.  The zero form keeps
    a nominal degree so degree bookkeeping survives cancellation; two zero
    forms compare equal regardless of nominal degree.
    """

    __slots__ = ("nvars", "degree", "terms")

    def __init__(self, nvars: int, degree: int, terms: Mapping[Exponent, Fraction]):
        if nvars < 1:
            raise ValueError("nvars must be >= 1")
        if degree < 0:
            raise ValueError("degree must be >= 0")
        clean: Dict[Exponent, Fraction] = {}
        for exps, c in terms.items():
            c = _coerce(c)
            if c == 0:
                continue
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} has wrong length for nvars={nvars}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if sum(exps) != degree:
                raise ValueError(f"monomial {exps} is not of degree {degree}")
            clean[tuple(exps)] = c
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Form is immutable")

    # ----- constructors -------------------------------------------------

    @staticmethod
    def zero(nvars: int, degree: int = 0) -> "Form":
        return Form(nvars, degree, {})

    @staticmethod
    def monomial(exps: Sequence[int], coeff=1) -> "Form":
        exps = tuple(exps)
        return Form(len(exps), sum(exps), {exps: _coerce(coeff)})

    @staticmethod
    def variable(nvars: int, index: int) -> "Form":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for nvars={nvars}")
        exps = [0] * nvars
        exps[index] = 1
        return Form(nvars, 1, {tuple(exps): Fraction(1)})

    @staticmethod
    def from_coeffs(nvars: int, degree: int, mapping: Mapping[Sequence[int], object]) -> "Form":
        return Form(nvars, degree, {tuple(k): _coerce(v) for k, v in mapping.items()})

    # ----- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def num_terms(self) -> int:
        return len(self.terms)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), _ZERO)

    def leading_monomial(self) -> Exponent:
        """Largest exponent tuple in canonical order.  Errors on the zero form."""
        if not self.terms:
            raise ValueError("zero form has no leading monomial")
        return max(self.terms)

    def sorted_terms(self) -> List[Tuple[Exponent, Fraction]]:
        return [(e, self.terms[e]) for e in sorted(self.terms, reverse=True)]

    def __iter__(self) -> Iterator[Tuple[Exponent, Fraction]]:
        return iter(self.sorted_terms())

    # ----- ring operations ----------------------------------------------

    def _check_compatible(self, other: "Form") -> None:
        if self.nvars != other.nvars:
            raise ValueError("forms live in different variable counts")

    def __add__(self, other: "Form") -> "Form":
        self._check_compatible(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degrees {self.degree} and {other.degree}")
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, _ZERO) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return Form(self.nvars, self.degree, out)

    def __neg__(self) -> "Form":
        return Form(self.nvars, self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c) -> "Form":
        c = _coerce(c)
        if c == 0:
            return Form.zero(self.nvars, self.degree)
        return Form(self.nvars, self.degree, {e: c * v for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_compatible(other)
        if self.is_zero() or other.is_zero():
            return Form.zero(self.nvars, self.degree + other.degree)
        out: Dict[Exponent, Fraction] = {}
        n = self.nvars
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(e1[i] + e2[i] for i in range(n))
                s = out.get(key, _ZERO) + c1 * c2
                if s == 0:
                    out.pop(key, None)
                else:
                    out[key] = s
        return Form(self.nvars, self.degree + other.degree, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Form":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Form.monomial((0,) * self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base_needed = k > 1
            if base_needed:
                base = base * base
            k >>= 1
        return result

    # ----- calculus -----------------------------------------------------

    def diff(self, index: int) -> "Form":
        """Exact partial derivative with respect to x_index."""
        if not 0 <= index < self.nvars:
            raise ValueError("variable index out of range")
        out: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            k = e[index]
            if k == 0:
                continue
            e2 = list(e)
            e2[index] = k - 1
            out[tuple(e2)] = c * k
        return Form(self.nvars, max(self.degree - 1, 0), out)

    def second_partials(self) -> List[List["Form"]]:
        """The symmetric matrix of second partial derivatives."""
        firsts = [self.diff(i) for i in range(self.nvars)]
        mat: List[List[Form]] = [[None] * self.nvars for _ in range(self.nvars)]  # type: ignore[list-item]
        for i in range(self.nvars):
            for j in range(i, self.nvars):
                fij = firsts[i].diff(j)
                mat[i][j] = fij
                mat[j][i] = fij
        return mat

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point has wrong length")
        pt = [_coerce(p) for p in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v *= pt[i] ** k
            total += v
        return total

    # ----- divisibility -------------------------------------------------

    def divisible_by_power(self, index: int, power: int) -> bool:
        """True when x_index**power divides every term (vacuously true for zero)."""
        return all(e[index] >= power for e in self.terms)

    def divide_by_monomial(self, exps: Sequence[int]) -> "Form":
        """Exact division by the monomial x**exps; raises if not divisible."""
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError("exponent tuple has wrong length")
        drop = sum(exps)
        out: Dict[Exponent, Fraction] = {}
        for e, c in self.terms.items():
            if any(e[i] < exps[i] for i in range(self.nvars)):
                raise ValueError(f"term {e} not divisible by {exps}")
            out[tuple(e[i] - exps[i] for i in range(self.nvars))] = c
        return Form(self.nvars, max(self.degree - drop, 0), out)

    # ----- linear substitution ------------------------------------------

    def substitute_linear(self, matrix: Sequence[Sequence]) -> "Form":
        """Return f(M x): substitute x_i -> sum_j M[i][j] x_j.

        The matrix need not be invertible; the result is the exact composite.
        """
        n = self.nvars
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError("substitution matrix has wrong shape")
        images = []
        for i in range(n):
            row = {(tuple(1 if t == j else 0 for t in range(n))): _coerce(matrix[i][j])
                   for j in range(n) if _coerce(matrix[i][j]) != 0}
            images.append(Form(n, 1, row))
        # Cache powers of each image form; exponents repeat across terms.
        power_cache: List[Dict[int, Form]] = [dict() for _ in range(n)]

        def image_power(i: int, k: int) -> Form:
            cache = power_cache[i]
            if k not in cache:
                cache[k] = images[i] ** k
            return cache[k]

        total = Form.zero(n, self.degree)
        for e, c in self.terms.items():
            prod = Form.monomial((0,) * n, c)
            for i, k in enumerate(e):
                if k:
                    prod = prod * image_power(i, k)
            if prod.degree != self.degree and not prod.is_zero():
                raise AssertionError("substitution degree drift")
            if total.is_zero():
                total = prod
            elif not prod.is_zero():
                total = total + prod
        return total

    # ----- equality / hashing / display ---------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Form({self.nvars} vars, deg {self.degree}, {self.num_terms()} terms)"

    # ----- serialization -------------------------------------------------

    def to_json_dict(self) -> dict:
        """Canonical JSON data: terms sorted in descending canonical order."""
        return {
            "r": self.nvars - 1,
            "d": self.degree,
            "terms": [
                {"e": list(e), "c": f"{c.numerator}/{c.denominator}"}
                for e, c in self.sorted_terms()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), separators=(",", ":"))

    @staticmethod
    def from_json_dict(data: Mapping) -> "Form":
        nvars = int(data["r"]) + 1
        degree = int(data["d"])
        terms = {tuple(t["e"]): Fraction(t["c"]) for t in data["terms"]}
        return Form(nvars, degree, terms)

    @staticmethod
    def from_json(text: str) -> "Form":
        return Form.from_json_dict(json.loads(text))


# ----- convenience builders used throughout the package -----------------


def form_sum(forms: Iterable[Form]) -> Form:
    """Sum a nonempty iterable of compatible forms."""
    total = None
    for f in forms:
        total = f if total is None else total + f
    if total is None:
        raise ValueError("form_sum needs at least one form")
    return total


def multinomial(exps: Sequence[int]) -> int:
    """Multinomial coefficient (sum exps)! / prod(exps_i!)."""
    n = factorial(sum(exps))
    for e in exps:
        n //= factorial(e)
    return n


def random_form(nvars: int, degree: int, rng, coeff_bound: int = 9,
                density: float = 1.0) -> Form:
    """Random form with integer coefficients in [-coeff_bound, coeff_bound].

    ``rng`` is a random.Random; draws are consumed in canonical monomial order
    so a fixed seed pins the exact polynomial.  ``density`` < 1 zeroes a
    matching fraction of monomials (but never all of them).
    """
    terms: Dict[Exponent, Fraction] = {}
    monos = monomials_of_degree(nvars, degree)
    for e in monos:
        if density < 1.0 and rng.random() > density:
            continue
        c = rng.randint(-coeff_bound, coeff_bound)
        if c:
            terms[e] = Fraction(c)
    if not terms:
        e = monos[rng.randrange(len(monos))]
        terms[e] = Fraction(rng.choice([c for c in range(-coeff_bound, coeff_bound + 1) if c]))
    return Form(nvars, degree, terms)
