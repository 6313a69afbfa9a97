"""
zk-betti - Linial-Meshulam Sampler

Y^d(n, p): the full (d-1)-skeleton on n vertices plus each of the C(n, d+1)
candidate d-simplices, kept independently with probability p.

Candidates are visited in colexicographic order of their sorted vertex
tuples, which for the bit layout used here is increasing mask order. Variate t
of the seed's keystream decides candidate t, so for a fixed seed samples are
monotone in p and the first C(n', d+1) decisions are shared by every n >= n'.
"""

import logging
from functools import lru_cache
from itertools import combinations
from typing import Tuple

import numpy as np

from .crypto import derive_trial_seed, uniform_variates
from .models import LMParams
from .simplicial import SimplicialComplex, build_skeleton

logger = logging.getLogger("zk-betti.sampler")


@lru_cache(maxsize=64)
def candidate_masks(n: int, d: int) -> Tuple[int, ...]:
    """Bitmasks of all d-simplices on 1..n, in colexicographic order."""
    return tuple(sorted(sum(1 << b for b in c) for c in combinations(range(n), d + 1)))


@lru_cache(maxsize=64)
def _skeleton(n: int, k: int) -> SimplicialComplex:
    return build_skeleton(n, k)


def sample_lm(params: LMParams) -> SimplicialComplex:
    """Draw Y^d(n, p) from the keystream of ``params.seed``."""
    base = _skeleton(params.n, params.d - 1)
    candidates = candidate_masks(params.n, params.d)
    variates = uniform_variates(params.seed, len(candidates))
    kept = frozenset(candidates[t] for t in np.flatnonzero(variates < params.p))
    logger.debug(f"Sampled Y^{params.d}({params.n}, {params.p}) seed={params.seed}: {len(kept)}/{len(candidates)} simplices")
    if not kept:
        return base
    return SimplicialComplex(params.n, base.simplices + (kept,))


def sample_stream(params: LMParams, trial: int) -> SimplicialComplex:
    """Sample for one Monte Carlo trial, on the substream derived from (seed, trial)."""
    seed = derive_trial_seed(params.seed, trial)
    return sample_lm(params.model_copy(update={"seed": seed}))
