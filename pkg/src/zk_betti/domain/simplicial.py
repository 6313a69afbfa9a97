"""
zk-betti - Simplicial Complexes

Canonical representation of finite simplicial complexes on the labels 1..n,
full-subcomplex restriction, boundary matrices of the augmented chain complex
and reduced homology.

Simplices are stored as n-bit masks (label v is bit v-1), bucketed by
dimension. Public views (faces, facets, boundary matrix layout) use sorted
vertex tuples in lexicographic order.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Sequence, Tuple, Union

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .errors import ComplexError, InvariantViolation
from .linalg import FieldSpec, IntegerMatrix, rank
from .models import ComplexDocument

logger = logging.getLogger("zk-betti.simplicial")

Simplex = Tuple[int, ...]


class HomologyMethod(str, Enum):
    """How reduced homology is computed."""
    AUTO = "auto"    # graph path for dim <= 1, ranks otherwise
    RANK = "rank"    # boundary-matrix ranks over the field
    GRAPH = "graph"  # union-find; only valid for dim <= 1


# ============================================================================
# Bitmask helpers
# ============================================================================

def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask of a set of 1-based vertex labels."""
    mask = 0
    for v in vertices:
        mask |= 1 << (v - 1)
    return mask


def vertices_of(mask: int) -> Simplex:
    """Sorted 1-based labels of the bits set in ``mask``."""
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _submasks(mask: int):
    """All non-empty submasks of ``mask``."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


# ============================================================================
# SimplicialComplex
# ============================================================================

@dataclass(frozen=True)
class SimplicialComplex:
    """Immutable simplicial complex on the vertex labels 1..n.

    ``simplices[k]`` holds the bitmasks of the k-simplices; the tuple is
    trimmed so its length is dim + 1 (empty for the empty complex).
    """
    n: int
    simplices: Tuple[FrozenSet[int], ...]

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "SimplicialComplex":
        """Bucket already downward-closed masks by dimension."""
        buckets: Dict[int, set] = {}
        for mask in masks:
            buckets.setdefault(mask.bit_count() - 1, set()).add(mask)
        top = max(buckets, default=-1)
        return cls(n, tuple(frozenset(buckets.get(k, ())) for k in range(top + 1)))

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def is_empty(self) -> bool:
        return not self.simplices

    def masks(self, k: int) -> FrozenSet[int]:
        if 0 <= k < len(self.simplices):
            return self.simplices[k]
        return frozenset()

    def count(self, k: int) -> int:
        """Number of k-simplices; the empty simplex counts once at k = -1."""
        if k == -1:
            return 1
        return len(self.masks(k))

    @cached_property
    def _sorted_faces(self) -> Tuple[Tuple[Simplex, ...], ...]:
        return tuple(tuple(sorted(vertices_of(m) for m in bucket)) for bucket in self.simplices)

    def faces(self, k: int) -> Tuple[Simplex, ...]:
        """k-simplices as sorted vertex tuples, in lexicographic order."""
        if 0 <= k < len(self.simplices):
            return self._sorted_faces[k]
        return ()

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(bucket) for bucket in self.simplices)

    def vertices(self) -> Simplex:
        return tuple(f[0] for f in self.faces(0))

    def all_masks(self) -> Iterable[int]:
        for bucket in self.simplices:
            yield from bucket

    def contains(self, simplex: Iterable[int]) -> bool:
        mask = mask_of(simplex)
        return mask == 0 or mask in self.masks(mask.bit_count() - 1)

    def facets(self) -> Tuple[Simplex, ...]:
        """Inclusion-maximal simplices, sorted lexicographically."""
        out = []
        for k, bucket in enumerate(self.simplices):
            above = self.masks(k + 1)
            for mask in bucket:
                if not any((mask | (1 << b)) in above for b in range(self.n) if not mask >> b & 1):
                    out.append(vertices_of(mask))
        return tuple(sorted(out))

    def __repr__(self) -> str:
        return f"SimplicialComplex(n={self.n}, f_vector={self.f_vector()})"


# ============================================================================
# Builders
# ============================================================================

def _check_n(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ComplexError(f"vertex count must be a positive integer, got {n!r}")


def _facet_mask(n: int, facet: Iterable[int]) -> int:
    labels = list(facet)
    if not labels:
        raise ComplexError("facets must be non-empty")
    for v in labels:
        if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= n:
            raise ComplexError(f"vertex {v!r} outside 1..{n}")
    if len(set(labels)) != len(labels):
        raise ComplexError(f"duplicate vertex in facet {labels}")
    return mask_of(labels)


def build_complex(n: int, facets: Sequence[Iterable[int]]) -> SimplicialComplex:
    """Downward closure of ``facets`` on the labels 1..n.

    Vertices not covered by a facet stay absent as 0-simplices.
    """
    _check_n(n)
    closure: set = set()
    for facet in facets:
        top = _facet_mask(n, facet)
        if top in closure:
            continue
        closure.update(_submasks(top))
    return SimplicialComplex.from_masks(n, closure)


def build_skeleton(n: int, k: int) -> SimplicialComplex:
    """k-skeleton of the (n-1)-simplex on 1..n; k = -1 is the empty complex."""
    _check_n(n)
    if not -1 <= k <= n - 1:
        raise ComplexError(f"skeleton dimension {k} outside -1..{n - 1}")
    buckets = tuple(
        frozenset(mask_of(c) for c in combinations(range(1, n + 1), size))
        for size in range(1, k + 2)
    )
    return SimplicialComplex(n, buckets)


def restrict_to_mask(K: SimplicialComplex, jmask: int) -> SimplicialComplex:
    """Full subcomplex on the vertex mask ``jmask`` (no validation)."""
    outside = ~jmask
    buckets = []
    for bucket in K.simplices:
        kept = frozenset(m for m in bucket if not m & outside)
        if not kept:
            break
        buckets.append(kept)
    return SimplicialComplex(K.n, tuple(buckets))


def full_subcomplex(K: SimplicialComplex, J: Iterable[int]) -> SimplicialComplex:
    """Simplices of K whose vertices all lie in J; labels are preserved."""
    labels = list(J)
    for v in labels:
        if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= K.n:
            raise ComplexError(f"vertex {v!r} outside 1..{K.n}")
    return restrict_to_mask(K, mask_of(labels))


# ============================================================================
# Chain complex
# ============================================================================

def boundary_matrix(K: SimplicialComplex, k: int) -> IntegerMatrix:
    """Matrix of the reduced boundary map from k-chains to (k-1)-chains.

    Rows follow ``K.faces(k - 1)`` and columns ``K.faces(k)``; for k = 0 the
    single row is the augmentation (all ones).
    """
    if k < 0:
        raise ComplexError(f"boundary dimension must be >= 0, got {k}")
    columns = K.faces(k)
    if k == 0:
        return IntegerMatrix(1, len(columns), np.ones((1, len(columns)), dtype=object))
    rows = K.faces(k - 1)
    index = {face: r for r, face in enumerate(rows)}
    M = IntegerMatrix.zeros(len(rows), len(columns))
    for c, simplex in enumerate(columns):
        for t in range(len(simplex)):
            face = simplex[:t] + simplex[t + 1:]
            M.entries[index[face], c] = -1 if t % 2 else 1
    return M


def _boundary_rank(K: SimplicialComplex, k: int, field: FieldSpec) -> int:
    if k == 0:
        return 1 if K.count(0) else 0
    if K.count(k) == 0 or K.count(k - 1) == 0:
        return 0
    return rank(boundary_matrix(K, k), field)


def graph_reduced_betti(K: SimplicialComplex, k: int) -> int:
    """Reduced Betti number of a complex of dimension <= 1 by union-find."""
    if K.dim > 1:
        raise ComplexError(f"graph homology needs dim <= 1, got dim {K.dim}")
    if K.is_empty:
        return 1 if k == -1 else 0
    if k not in (0, 1):
        return 0
    vertices = K.vertices()
    components = DisjointSet(vertices)
    for a, b in K.faces(1):
        components.merge(a, b)
    if k == 0:
        return components.n_subsets - 1
    return K.count(1) - len(vertices) + components.n_subsets


def reduced_betti_numbers(
    K: SimplicialComplex,
    field: FieldSpec,
    method: HomologyMethod = HomologyMethod.AUTO,
) -> Dict[int, int]:
    """All reduced Betti numbers {k: dim H~_k} for k = -1..dim K."""
    method = HomologyMethod(method)
    top = max(K.dim, -1)
    if method == HomologyMethod.GRAPH or (method == HomologyMethod.AUTO and K.dim <= 1):
        return {k: graph_reduced_betti(K, k) for k in range(-1, top + 1)}
    ranks = [_boundary_rank(K, k, field) for k in range(0, top + 2)]
    betti = {-1: 1 - (ranks[0] if ranks else 0)}
    for k in range(0, top + 1):
        betti[k] = K.count(k) - ranks[k] - ranks[k + 1]
    return betti


def reduced_betti(
    K: SimplicialComplex,
    k: int,
    field: FieldSpec,
    method: HomologyMethod = HomologyMethod.AUTO,
) -> int:
    """dim over ``field`` of the k-th reduced homology of K (k >= -1)."""
    if k < -1:
        raise ComplexError(f"homology degree must be >= -1, got {k}")
    if k > K.dim:
        return 0
    method = HomologyMethod(method)
    if method == HomologyMethod.GRAPH or (method == HomologyMethod.AUTO and K.dim <= 1):
        return graph_reduced_betti(K, k)
    if k == -1:
        return 1 - _boundary_rank(K, 0, field)
    return K.count(k) - _boundary_rank(K, k, field) - _boundary_rank(K, k + 1, field)


def reduced_euler_characteristic(K: SimplicialComplex) -> int:
    """Alternating face count minus one (the empty simplex)."""
    return sum((-1) ** k * n_k for k, n_k in enumerate(K.f_vector())) - 1


def check_complex(K: SimplicialComplex) -> None:
    """Re-verify downward closure and that consecutive boundaries compose to zero."""
    for k in range(1, K.dim + 1):
        below = K.masks(k - 1)
        for mask in K.masks(k):
            for b in range(K.n):
                if mask >> b & 1 and (mask ^ (1 << b)) not in below:
                    raise InvariantViolation(f"face of {vertices_of(mask)} missing from complex")
    for k in range(0, K.dim):
        if not (boundary_matrix(K, k) @ boundary_matrix(K, k + 1)).is_zero():
            raise InvariantViolation(f"boundary maps {k} and {k + 1} do not compose to zero")


# ============================================================================
# Complex file format
# ============================================================================

def dump_complex(K: SimplicialComplex) -> ComplexDocument:
    return ComplexDocument(n=K.n, facets=[list(f) for f in K.facets()])


def complex_from_document(doc: ComplexDocument) -> SimplicialComplex:
    return build_complex(doc.n, doc.facets)


def load_complex(path: Union[str, Path]) -> SimplicialComplex:
    """Load a complex file ``{"n": ..., "facets": [[...], ...]}``."""
    text = Path(path).read_text()
    doc = ComplexDocument.model_validate_json(text)
    K = complex_from_document(doc)
    logger.debug(f"Loaded complex from {path}: {K!r}")
    return K

