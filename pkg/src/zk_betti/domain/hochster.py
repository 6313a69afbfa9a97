"""
zk-betti - Hochster Decomposition

Bigraded Betti numbers of the Stanley-Reisner ring k[K] as sums of reduced
homology of full subcomplexes,

    beta^{-i,2j} = sum over |J| = j of dim H~_{j-i-1}(K_J),

the Betti numbers of the moment-angle complex Z_K obtained by regrading
l = 2j - i, and an independent Taylor-complex computation of the same Tor
ranks used as an oracle.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations, islice
from math import comb
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .errors import GuardExceeded
from .linalg import FieldSpec, IntegerMatrix, rank
from .models import TableDocument, TableEntry
from .parallel import index_ranges, parallel_map
from .simplicial import (
    HomologyMethod,
    SimplicialComplex,
    reduced_betti,
    reduced_betti_numbers,
    restrict_to_mask,
    vertices_of,
)

logger = logging.getLogger("zk-betti.hochster")

# Full tables enumerate all 2^n vertex subsets; Taylor complexes have 2^r basis elements.
MAX_TABLE_VERTICES = 20
MAX_TAYLOR_GENERATORS = 16

Bidegree = Tuple[int, int]


# ============================================================================
# BigradedTable
# ============================================================================

@dataclass
class BigradedTable:
    """Ranks beta^{-i,2j}, keyed by (i, j); absent keys are zero."""
    n: int
    field: FieldSpec
    entries: Dict[Bidegree, int] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {key: value for key, value in self.entries.items() if value}

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def add(self, i: int, j: int, value: int) -> None:
        if value:
            self.entries[(i, j)] = self.entries.get((i, j), 0) + value

    def nonzero(self) -> List[Tuple[int, int, int]]:
        """Nonzero entries as (i, j, beta), sorted by (j, i)."""
        return [(i, j, b) for (i, j), b in sorted(self.entries.items(), key=lambda kv: (kv[0][1], kv[0][0]))]

    def total(self) -> int:
        return sum(self.entries.values())

    def to_document(self) -> TableDocument:
        return TableDocument(
            n=self.n,
            field=self.field.name,
            entries=[TableEntry(i=i, j=j, beta=b) for i, j, b in self.nonzero()],
        )

    @classmethod
    def from_document(cls, doc: TableDocument) -> "BigradedTable":
        return cls(
            n=doc.n,
            field=FieldSpec.parse(doc.field),
            entries={(e.i, e.j): e.beta for e in doc.entries},
        )


# ============================================================================
# Hochster sums
# ============================================================================

def _combination_mask(bits: Tuple[int, ...]) -> int:
    mask = 0
    for b in bits:
        mask |= 1 << b
    return mask


def _subset_sum(
    K: SimplicialComplex,
    j: int,
    degrees: Optional[Set[int]],
    field: FieldSpec,
    method: HomologyMethod,
    span: range,
) -> Dict[Bidegree, int]:
    """Sum reduced homology over the j-subsets with lexicographic index in ``span``.

    ``degrees`` restricts the homology degrees k = j - i - 1 that are summed;
    None means all of them.
    """
    totals: Dict[Bidegree, int] = defaultdict(int)
    subsets = islice(combinations(range(K.n), j), span.start, span.stop)
    single = next(iter(degrees)) if degrees is not None and len(degrees) == 1 else None
    for bits in subsets:
        K_J = restrict_to_mask(K, _combination_mask(bits))
        if single is not None:
            value = reduced_betti(K_J, single, field, method)
            if value:
                totals[(j - single - 1, j)] += value
            continue
        for k, value in reduced_betti_numbers(K_J, field, method).items():
            if value and (degrees is None or k in degrees) and j - k - 1 >= 0:
                totals[(j - k - 1, j)] += value
    return dict(totals)


def _subset_task(K, field, method, task) -> Dict[Bidegree, int]:
    j, degrees, span = task
    return _subset_sum(K, j, degrees, field, method, span)


def _run_subset_sums(
    K: SimplicialComplex,
    plan: Dict[int, Optional[Set[int]]],
    field: FieldSpec,
    method: HomologyMethod,
    workers: int,
) -> BigradedTable:
    tasks = []
    for j, degrees in sorted(plan.items()):
        for span in index_ranges(comb(K.n, j), workers):
            tasks.append((j, degrees, span))
    partials = parallel_map(partial(_subset_task, K, field, method), tasks, workers)
    table = BigradedTable(n=K.n, field=field)
    for chunk in partials:
        for (i, j), value in chunk.items():
            table.add(i, j, value)
    return table


def _check_table_guard(K: SimplicialComplex, override: bool) -> None:
    if K.n > MAX_TABLE_VERTICES and not override:
        logger.warning(f"Refusing full table on {K.n} vertices (limit {MAX_TABLE_VERTICES})")
        raise GuardExceeded(
            f"full bigraded table on n={K.n} vertices enumerates 2^{K.n} subsets",
            hint=f"limit is n <= {MAX_TABLE_VERTICES}; pass override=True or filter by (i, j)",
        )
    if override and K.n > MAX_TABLE_VERTICES:
        logger.info(f"Size guard overridden for n={K.n}")


def bigraded_betti(
    K: SimplicialComplex,
    field: FieldSpec,
    filter: Optional[Iterable[Bidegree]] = None,
    *,
    override: bool = False,
    workers: int = 1,
    method: HomologyMethod = HomologyMethod.AUTO,
) -> BigradedTable:
    """Bigraded Betti numbers of k[K] via Hochster's formula.

    Without ``filter`` the full table is computed (guarded by
    MAX_TABLE_VERTICES). With a filter only the requested (i, j) entries
    are summed, enumerating the j-subsets alone.
    """
    if filter is None:
        _check_table_guard(K, override)
        plan: Dict[int, Optional[Set[int]]] = {j: None for j in range(K.n + 1)}
    else:
        plan = {}
        for i, j in filter:
            if i < 0 or j < 0 or i > j or j > K.n:
                continue
            plan.setdefault(j, set()).add(j - i - 1)
    table = _run_subset_sums(K, plan, field, method, workers)
    logger.info(f"Computed bigraded table for {K!r} over {field}: {len(table.entries)} nonzero entries")
    return table


def betti_number(
    K: SimplicialComplex,
    i: int,
    j: int,
    field: FieldSpec,
    method: HomologyMethod = HomologyMethod.AUTO,
) -> int:
    """A single entry beta^{-i,2j}, summing over the j-subsets only."""
    if i < 0 or j < 0 or i > j or j > K.n:
        return 0
    totals = _subset_sum(K, j, {j - i - 1}, field, method, range(comb(K.n, j)))
    return totals.get((i, j), 0)


def zk_betti_numbers(
    K: SimplicialComplex,
    field: FieldSpec,
    *,
    override: bool = False,
    workers: int = 1,
    table: Optional[BigradedTable] = None,
) -> List[int]:
    """Betti numbers b_l(Z_K) = sum_j beta^{-(2j-l),2j}, trailing zeros trimmed."""
    if table is None:
        table = bigraded_betti(K, field, override=override, workers=workers)
    betti: Dict[int, int] = defaultdict(int)
    for (i, j), value in table.entries.items():
        betti[2 * j - i] += value
    top = max(betti, default=0)
    vector = [betti.get(l, 0) for l in range(top + 1)]
    while len(vector) > 1 and vector[-1] == 0:
        vector.pop()
    return vector


def structural_violations(table: BigradedTable, d: int) -> List[Tuple[int, int, int]]:
    """Nonzero entries that must vanish for a complex between the full
    (d-1)-skeleton and the d-skeleton: j >= 1 with j <= d or i not in {j-d, j-d-1}.
    """
    return [
        (i, j, b)
        for i, j, b in table.nonzero()
        if j >= 1 and (j <= d or i not in (j - d, j - d - 1))
    ]


# ============================================================================
# Stanley-Reisner ideal
# ============================================================================

def minimal_non_face_masks(K: SimplicialComplex) -> List[int]:
    """Bitmasks of the inclusion-minimal non-faces of K."""
    present = set(K.all_masks())
    candidates = {1 << b for b in range(K.n)}
    for mask in present:
        for b in range(K.n):
            if not mask >> b & 1:
                candidates.add(mask | (1 << b))
    minimal = []
    for mask in candidates:
        if mask in present:
            continue
        if mask.bit_count() == 1 or all(
            (mask ^ (1 << b)) in present for b in range(K.n) if mask >> b & 1
        ):
            minimal.append(mask)
    return sorted(minimal, key=vertices_of)


def minimal_non_faces(K: SimplicialComplex) -> List[Tuple[int, ...]]:
    """Minimal non-faces (generators of the Stanley-Reisner ideal), sorted lexicographically."""
    return [vertices_of(mask) for mask in minimal_non_face_masks(K)]


# ============================================================================
# Taylor complex oracle
# ============================================================================

def tor_via_taylor(
    K: SimplicialComplex,
    field: FieldSpec,
    *,
    override: bool = False,
) -> BigradedTable:
    """Tor ranks of k[K] from the Taylor complex of its Stanley-Reisner ideal.

    Basis elements are subsets S of the r generators, in homological degree
    |S| and multidegree lcm(S). After tensoring with k only the faces of S
    with the same lcm survive in the differential, so the complex splits into
    one strand per square-free multidegree U, contributing to beta^{-i,2|U|}.
    """
    generators = minimal_non_face_masks(K)
    r = len(generators)
    if r > MAX_TAYLOR_GENERATORS and not override:
        logger.warning(f"Refusing Taylor complex with {r} generators (limit {MAX_TAYLOR_GENERATORS})")
        raise GuardExceeded(
            f"Taylor complex on {r} generators has 2^{r} basis elements",
            hint=f"limit is r <= {MAX_TAYLOR_GENERATORS}; pass override=True",
        )

    lcm = [0] * (1 << r)
    strands: Dict[int, Dict[int, List[int]]] = defaultdict(lambda: defaultdict(list))
    for s in range(1 << r):
        if s:
            low = (s & -s).bit_length() - 1
            lcm[s] = lcm[s & (s - 1)] | generators[low]
        strands[lcm[s]][s.bit_count()].append(s)

    table = BigradedTable(n=K.n, field=field)
    for U, by_degree in strands.items():
        top = max(by_degree)
        ranks = {i: _taylor_rank(by_degree, lcm, U, i, field) for i in range(1, top + 1)}
        for i, basis in by_degree.items():
            homology = len(basis) - ranks.get(i, 0) - ranks.get(i + 1, 0)
            table.add(i, U.bit_count(), homology)
    logger.info(f"Taylor complex on {r} generators: {len(table.entries)} nonzero entries")
    return table


def _taylor_rank(
    by_degree: Dict[int, List[int]],
    lcm: List[int],
    U: int,
    i: int,
    field: FieldSpec,
) -> int:
    """Rank of the strand-U differential from degree i to degree i - 1."""
    sources = by_degree.get(i, [])
    targets = by_degree.get(i - 1, [])
    if not sources or not targets:
        return 0
    row = {s: idx for idx, s in enumerate(targets)}
    M = IntegerMatrix.zeros(len(targets), len(sources))
    for c, s in enumerate(sources):
        position = 0
        bits = s
        while bits:
            t = bits & -bits
            face = s ^ t
            if lcm[face] == U:
                M.entries[row[face], c] = -1 if position % 2 else 1
            position += 1
            bits ^= t
    return rank(M, field)

