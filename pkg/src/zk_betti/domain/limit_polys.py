"""
zk-betti - Limit Polynomials

Exact expectations, variances and covariances of reduced homology dimensions
of Y^d(j, p), as integer polynomials in p, by enumerating every subset of the
M candidate d-simplices.

For each popcount s the enumeration totals the statistic over all subsets of
size s; the polynomial is then Sum_s total_s * p^s * (1-p)^(M-s), expanded
with binomial coefficients in exact integers.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import GuardExceeded
from .linalg import DEFAULT_FIELD, FieldSpec
from .models import PolynomialDocument
from .parallel import index_ranges, parallel_map
from .sampler import candidate_masks
from .simplicial import (
    HomologyMethod,
    SimplicialComplex,
    build_skeleton,
    reduced_betti,
    restrict_to_mask,
)

logger = logging.getLogger("zk-betti.limits")

# 2^M homology computations per polynomial.
MAX_ENUMERATED_SIMPLICES = 24

Number = Union[int, float, Fraction]


# ============================================================================
# IntPolynomial
# ============================================================================

@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial in p; ``coeffs[k]`` is the coefficient of p^k.

    Trailing zeros are trimmed, so the zero polynomial has no coefficients.
    """
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = [int(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: Union["IntPolynomial", int]) -> "IntPolynomial":
        if isinstance(other, (int, np.integer)):
            return IntPolynomial(tuple(c * other for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for a, x in enumerate(self.coeffs):
            if x:
                for b, y in enumerate(other.coeffs):
                    out[a + b] += x * y
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def evaluate(self, p: Number) -> Number:
        """Horner evaluation; exact for int and Fraction arguments."""
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * p + c
        return acc

    __call__ = evaluate

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            power = "" if k == 0 else ("p" if k == 1 else f"p^{k}")
            if power and abs(c) == 1:
                body = power
            else:
                body = f"{abs(c)}{'*' + power if power else ''}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def eval_poly(poly: IntPolynomial, p: Number) -> Number:
    return poly.evaluate(p)


def bernstein_expand(totals: Sequence[int], M: int) -> IntPolynomial:
    """Expand Sum_s totals[s] * p^s * (1-p)^(M-s) into monomial coefficients."""
    coeffs = [0] * (M + 1)
    for s, total in enumerate(totals):
        if not total:
            continue
        for t in range(M - s + 1):
            coeffs[s + t] += total * comb(M - s, t) * (-1) ** t
    return IntPolynomial(tuple(coeffs))


# ============================================================================
# Enumeration
# ============================================================================

Observer = Callable[[SimplicialComplex], Tuple[int, ...]]


def _check_enumeration(M: int, override: bool, what: str) -> None:
    if M > MAX_ENUMERATED_SIMPLICES and not override:
        logger.warning(f"Refusing enumeration of 2^{M} complexes for {what}")
        raise GuardExceeded(
            f"{what} enumerates 2^{M} complexes",
            hint=f"limit is {MAX_ENUMERATED_SIMPLICES} candidate simplices; pass override=True",
        )


def _enumerate_span(
    base: SimplicialComplex,
    candidates: Tuple[int, ...],
    observe: Observer,
    width: int,
    span: range,
) -> List[List[int]]:
    """Per-popcount totals of ``observe`` over the candidate subsets indexed by ``span``."""
    M = len(candidates)
    totals = [[0] * width for _ in range(M + 1)]
    for subset in span:
        chosen = frozenset(candidates[t] for t in range(M) if subset >> t & 1)
        K = SimplicialComplex(base.n, base.simplices + (chosen,)) if chosen else base
        row = totals[subset.bit_count()]
        for q, value in enumerate(observe(K)):
            row[q] += value
    return totals


def enumerate_moments(
    n: int,
    d: int,
    candidates: Tuple[int, ...],
    observe: Observer,
    width: int,
    *,
    workers: int = 1,
) -> List[IntPolynomial]:
    """Expected value, as a polynomial in p, of each component of ``observe``.

    The complexes enumerated are the full (d-1)-skeleton on n vertices plus
    every subset of ``candidates``; each candidate is present with
    probability p, independently.
    """
    base = build_skeleton(n, d - 1)
    M = len(candidates)
    spans = index_ranges(1 << M, workers)
    partials = parallel_map(partial(_enumerate_span, base, candidates, observe, width), spans, workers)
    totals = [[0] * width for _ in range(M + 1)]
    for chunk in partials:
        for s, row in enumerate(chunk):
            for q, value in enumerate(row):
                totals[s][q] += value
    return [bernstein_expand([totals[s][q] for s in range(M + 1)], M) for q in range(width)]


def _degree_for(d: int, j: int, i: int) -> int:
    """Homology degree k = j - i - 1 for the two admissible rows i."""
    if i not in (j - d, j - d - 1):
        raise ValueError(f"i={i} must be j-d={j - d} or j-d-1={j - d - 1}")
    return j - i - 1


def _check_dimensions(d: int, j: int) -> None:
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if j < d + 1:
        raise ValueError(f"j={j} must be at least d+1={d + 1}")


def _single_moments(K: SimplicialComplex, k: int, field: FieldSpec, method: HomologyMethod) -> Tuple[int, int]:
    x = reduced_betti(K, k, field, method)
    return x, x * x


def _pair_moments(
    K: SimplicialComplex,
    k: int,
    first: int,
    second: int,
    field: FieldSpec,
    method: HomologyMethod,
) -> Tuple[int, int, int]:
    x1 = reduced_betti(restrict_to_mask(K, first), k, field, method)
    x2 = reduced_betti(restrict_to_mask(K, second), k, field, method)
    return x1, x2, x1 * x2


def _statistic_moments(
    d: int,
    j: int,
    k: int,
    field: FieldSpec,
    method: HomologyMethod,
    workers: int,
    override: bool,
) -> Tuple[IntPolynomial, IntPolynomial]:
    candidates = candidate_masks(j, d)
    _check_enumeration(len(candidates), override, f"Y^{d}({j}, p)")
    first, second = enumerate_moments(
        j, d, candidates, partial(_single_moments, k=k, field=field, method=method), 2, workers=workers
    )
    logger.info(f"Enumerated 2^{len(candidates)} complexes for H~_{k} of Y^{d}({j}, p) over {field}")
    return first, second


# ============================================================================
# Limit, variance and covariance polynomials
# ============================================================================

def limit_poly_f(
    d: int,
    j: int,
    field: FieldSpec = DEFAULT_FIELD,
    *,
    method: HomologyMethod = HomologyMethod.AUTO,
    workers: int = 1,
    override: bool = False,
) -> IntPolynomial:
    """f_j(p) = E dim H~_{d-1}(Y^d(j, p)), the limit of beta^{-(j-d),2j} / C(n, j)."""
    _check_dimensions(d, j)
    return _statistic_moments(d, j, d - 1, field, method, workers, override)[0]


def limit_poly_g(
    d: int,
    j: int,
    field: FieldSpec = DEFAULT_FIELD,
    *,
    method: HomologyMethod = HomologyMethod.AUTO,
    workers: int = 1,
    override: bool = False,
) -> IntPolynomial:
    """g_j(p) = E dim H~_d(Y^d(j, p)), the limit of beta^{-(j-d-1),2j} / C(n, j)."""
    _check_dimensions(d, j)
    return _statistic_moments(d, j, d, field, method, workers, override)[0]


def limit_poly(d: int, j: int, i: int, field: FieldSpec = DEFAULT_FIELD, **kwargs) -> IntPolynomial:
    """f_j when i = j - d, g_j when i = j - d - 1."""
    k = _degree_for(d, j, i)
    return limit_poly_f(d, j, field, **kwargs) if k == d - 1 else limit_poly_g(d, j, field, **kwargs)


def exact_variance_poly(
    d: int,
    j: int,
    i: int,
    field: FieldSpec = DEFAULT_FIELD,
    *,
    method: HomologyMethod = HomologyMethod.AUTO,
    workers: int = 1,
    override: bool = False,
) -> IntPolynomial:
    """a(p) = Var dim H~_{j-i-1}(Y^d(j, p))."""
    _check_dimensions(d, j)
    k = _degree_for(d, j, i)
    mean, second = _statistic_moments(d, j, k, field, method, workers, override)
    return second - mean * mean


def covariance_candidates(d: int, j: int, m: int) -> Tuple[int, Tuple[int, ...], int, int]:
    """Vertex count, relevant candidate d-simplices and the masks of J1, J2.

    J1 = {1..j} and J2 = {j-m+1..2j-m}; only candidates inside J1 or J2 can
    affect either statistic.
    """
    n = 2 * j - m
    first = (1 << j) - 1
    second = ((1 << j) - 1) << (j - m)
    relevant = tuple(c for c in candidate_masks(n, d) if not c & ~first or not c & ~second)
    return n, relevant, first, second


def exact_cov_poly(
    d: int,
    j: int,
    m: int,
    i: int,
    field: FieldSpec = DEFAULT_FIELD,
    *,
    method: HomologyMethod = HomologyMethod.AUTO,
    workers: int = 1,
    override: bool = False,
) -> IntPolynomial:
    """b_m(p) = Cov(X_{J1}, X_{J2}) for two j-sets overlapping in m vertices.

    Zero whenever m <= d: the two full subcomplexes then share no candidate
    d-simplex.
    """
    _check_dimensions(d, j)
    k = _degree_for(d, j, i)
    if not 0 <= m <= j:
        raise ValueError(f"overlap m={m} outside 0..{j}")
    if m <= d:
        return IntPolynomial()
    n, candidates, first, second = covariance_candidates(d, j, m)
    _check_enumeration(len(candidates), override, f"covariance on {n} vertices")
    observe = partial(_pair_moments, k=k, first=first, second=second, field=field, method=method)
    e1, e2, e12 = enumerate_moments(n, d, candidates, observe, 3, workers=workers)
    logger.info(f"Enumerated 2^{len(candidates)} complexes for covariance d={d} j={j} m={m} i={i}")
    return e12 - e1 * e2


def expected_statistic_variance(
    d: int,
    j: int,
    i: int,
    n: int,
    field: FieldSpec = DEFAULT_FIELD,
    **kwargs,
) -> IntPolynomial:
    """Exact Var beta^{-i,2j}(Y^d(n, p)) for finite n.

    Sum over ordered pairs (J1, J2) of j-sets: C(n,j) diagonal terms a(p), and
    C(n,j) C(j,m) C(n-j,j-m) pairs overlapping in m vertices for each
    d+1 <= m <= j-1; smaller overlaps contribute nothing.
    """
    if n < j:
        raise ValueError(f"n={n} is smaller than j={j}")
    total = exact_variance_poly(d, j, i, field, **kwargs) * comb(n, j)
    for m in range(d + 1, j):
        pairs = comb(n, j) * comb(j, m) * comb(n - j, j - m)
        if pairs:
            total = total + exact_cov_poly(d, j, m, i, field, **kwargs) * pairs
    return total


def sup_on_unit_interval(poly: IntPolynomial) -> float:
    """max |poly(p)| over 0 <= p <= 1, from the endpoints and real critical points."""
    if poly.degree <= 0:
        return float(abs(poly.coeffs[0])) if poly.coeffs else 0.0
    points = [0.0, 1.0]
    slope = poly.derivative()
    if slope.degree >= 1:
        roots = np.roots([float(c) for c in reversed(slope.coeffs)])
        points.extend(float(r.real) for r in roots if abs(r.imag) < 1e-9 and 0.0 <= r.real <= 1.0)
    return max(abs(float(poly.evaluate(x))) for x in points)


def variance_bound_constants(d: int, j: int, i: int, field: FieldSpec = DEFAULT_FIELD, **kwargs) -> Dict:
    """Constants A = sup|a| and B_m = sup|b_m| bounding the finite-n variance."""
    return {
        "A": sup_on_unit_interval(exact_variance_poly(d, j, i, field, **kwargs)),
        "B": {m: sup_on_unit_interval(exact_cov_poly(d, j, m, i, field, **kwargs)) for m in range(d + 1, j)},
    }


# ============================================================================
# Documents and published-value audit
# ============================================================================

def polynomial_document(
    poly: IntPolynomial,
    d: int,
    j: int,
    kind: str,
    field: FieldSpec,
    m: Optional[int] = None,
    i: Optional[int] = None,
) -> PolynomialDocument:
    return PolynomialDocument(d=d, j=j, kind=kind, i=i, m=m, field=field.name, coeffs=list(poly.coeffs))


# Published closed forms for d = 1: (1-p)^2 (2+p), p^3 and 2p^3 (3p^3 - 9p^2 - 15p + 7).
PUBLISHED_D1 = {
    ("f", 3): IntPolynomial((2, -3, 0, 1)),
    ("g", 3): IntPolynomial((0, 0, 0, 1)),
    ("g", 4): IntPolynomial((0, 0, 0, 14, -30, -18, 6)),
}


@dataclass
class PublishedComparison:
    kind: str
    j: int
    published: IntPolynomial
    computed: IntPolynomial

    @property
    def matches(self) -> bool:
        return self.published == self.computed

    def as_dict(self) -> Dict:
        return {
            "kind": self.kind,
            "j": self.j,
            "published": list(self.published.coeffs),
            "computed": list(self.computed.coeffs),
            "matches": self.matches,
            "published_at_1": self.published.evaluate(1),
            "computed_at_1": self.computed.evaluate(1),
        }


def published_comparison(field: FieldSpec = DEFAULT_FIELD) -> List[PublishedComparison]:
    """Compare the enumerated d = 1 polynomials with the published closed forms.

    f_3 and g_3 agree. The published g_4 evaluates to -28 at p = 1, which no
    expectation of a dimension can; enumeration gives 4p^3 + 3p^4 - 6p^5 + 2p^6.
    """
    out = []
    for (kind, j), published in PUBLISHED_D1.items():
        computed = limit_poly_f(1, j, field) if kind == "f" else limit_poly_g(1, j, field)
        comparison = PublishedComparison(kind, j, published, computed)
        if not comparison.matches:
            logger.warning(f"Published {kind}_{j} = {published} differs from enumerated {computed}")
        out.append(comparison)
    return out
