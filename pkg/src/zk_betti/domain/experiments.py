"""
zk-betti - Monte Carlo Experiments

Seeded experiments on Linial-Meshulam samples:

- convergence of beta^{-i,2j} / C(n, j) to the limit polynomial,
- log-log scaling of the variance of that statistic in n,
- covariance of two full-subcomplex statistics with a fixed overlap,
- an audit of structural zeros and of the Euler identity.

Per-trial values are exact rationals and trials are folded in index order, so
every table is identical for any worker count. All cells of one run share the
master seed, which couples neighbouring cells through common random numbers.
"""

import csv
import io
import logging
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import partial
from math import comb
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .crypto import canonical_json
from .errors import GuardExceeded
from .hochster import bigraded_betti, betti_number, structural_violations
from .limit_polys import IntPolynomial, exact_cov_poly, expected_statistic_variance, limit_poly
from .linalg import DEFAULT_FIELD, FieldSpec
from .models import CovarianceConfig, ExperimentConfig, LMParams
from .parallel import index_ranges, parallel_map
from .sampler import sample_stream
from .simplicial import (
    HomologyMethod,
    SimplicialComplex,
    reduced_betti,
    reduced_betti_numbers,
    reduced_euler_characteristic,
    restrict_to_mask,
)

logger = logging.getLogger("zk-betti.experiments")

# Units: (j-subsets) x (trials) x (simplices in a j-vertex full subcomplex).
DEFAULT_WORK_BUDGET = 2_000_000_000
ACCEPTANCE_RADIUS = 4.0
ABSOLUTE_FLOOR = 0.05


# ============================================================================
# Statistics
# ============================================================================

@dataclass(frozen=True)
class SampleStats:
    """Monte Carlo aggregate of a normalized statistic."""
    trials: int
    mean: float
    variance: float
    std_err: float
    mean_abs_dev: Optional[float] = None

    @classmethod
    def from_values(cls, values: Sequence[Fraction], center: Optional[Fraction] = None) -> "SampleStats":
        """Unbiased aggregate of exact per-trial values (variance 0 for one trial).

        With a ``center``, also reports (1/T) * sum |x_t - center|.
        """
        T = len(values)
        if T == 0:
            raise ValueError("no trials to aggregate")
        mean = sum(values, Fraction(0)) / T
        if T > 1:
            variance = sum(((x - mean) ** 2 for x in values), Fraction(0)) / (T - 1)
        else:
            variance = Fraction(0)
        mad = None if center is None else float(sum((abs(x - center) for x in values), Fraction(0)) / T)
        return cls(
            trials=T,
            mean=float(mean),
            variance=float(variance),
            std_err=math.sqrt(float(variance) / T),
            mean_abs_dev=mad,
        )


def check_work_budget(d: int, n: int, j: int, trials: int, budget: Optional[int] = None) -> int:
    """Estimated cost of ``trials`` evaluations of one beta^{-i,2j}; raises past the budget."""
    budget = DEFAULT_WORK_BUDGET if budget is None else budget
    work = comb(n, j) * trials * (comb(j, d) + comb(j, d + 1))
    if work > budget:
        logger.warning(f"Refusing experiment cell n={n} j={j} trials={trials}: work {work} > {budget}")
        raise GuardExceeded(
            f"cell n={n}, j={j}, trials={trials} needs ~{work} work units (budget {budget})",
            hint="lower n or trials, or raise the budget with --work-budget",
        )
    return work


def _trial_block(
    params: LMParams,
    i: int,
    j: int,
    field: FieldSpec,
    trials: range,
) -> List[int]:
    return [betti_number(sample_stream(params, t), i, j, field) for t in trials]


def estimate_bigraded(
    d: int,
    n: int,
    p: float,
    i: int,
    j: int,
    trials: int,
    seed: int,
    field: FieldSpec = DEFAULT_FIELD,
    *,
    workers: int = 1,
    work_budget: Optional[int] = None,
    center: Optional[Fraction] = None,
) -> SampleStats:
    """Statistics of beta^{-i,2j}(Y^d(n, p)) / C(n, j) over seeded trials.

    ``center`` (normally the limit f_j(p) or g_j(p)) enables the per-trial mean absolute deviation.
    """
    if i not in (j - d, j - d - 1):
        raise ValueError(f"i={i} must be j-d={j - d} or j-d-1={j - d - 1}")
    if n < j:
        raise ValueError(f"n={n} is smaller than j={j}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    check_work_budget(d, n, j, trials, work_budget)
    params = LMParams(n=n, d=d, p=p, seed=seed)
    blocks = parallel_map(partial(_trial_block, params, i, j, field), index_ranges(trials, workers), workers)
    scale = comb(n, j)
    values = [Fraction(beta, scale) for block in blocks for beta in block]
    stats = SampleStats.from_values(values, center)
    logger.debug(f"Cell d={d} n={n} p={p} i={i} j={j}: mean={stats.mean} se={stats.std_err}")
    return stats


# ============================================================================
# Convergence
# ============================================================================

CONVERGENCE_COLUMNS = ("d", "j", "i", "p", "n", "trials", "mean", "std_err", "limit", "abs_dev", "mean_abs_dev")


@dataclass(frozen=True)
class ConvergenceRow:
    d: int
    j: int
    i: int
    p: float
    n: int
    trials: int
    mean: float
    std_err: float
    limit: float
    abs_dev: float
    mean_abs_dev: float

    def as_row(self) -> List[Any]:
        return [getattr(self, name) for name in CONVERGENCE_COLUMNS]

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def within_tolerance(self, radius: float = 3.0, floor: float = ABSOLUTE_FLOOR) -> bool:
        return self.abs_dev <= max(radius * self.std_err, floor)


def run_convergence(config: ExperimentConfig) -> List[ConvergenceRow]:
    """One row per (p, n) cell, p-major, in grid order."""
    field_spec = config.field_spec
    poly = limit_poly(config.d, config.j, config.i, field_spec)
    rows = []
    for p in config.p_grid:
        limit = poly.evaluate(Fraction(p))
        for n in config.n_grid:
            stats = estimate_bigraded(
                config.d, n, p, config.i, config.j, config.trials, config.seed, field_spec,
                workers=config.workers, work_budget=config.work_budget, center=limit,
            )
            rows.append(ConvergenceRow(
                d=config.d, j=config.j, i=config.i, p=p, n=n, trials=stats.trials,
                mean=stats.mean, std_err=stats.std_err, limit=float(limit),
                abs_dev=abs(stats.mean - float(limit)), mean_abs_dev=stats.mean_abs_dev,
            ))
        logger.info(f"Convergence p={p}: {[round(r.mean_abs_dev, 4) for r in rows[-len(config.n_grid):]]}")
    return rows


# ============================================================================
# Variance scaling
# ============================================================================

SCALING_COLUMNS = ("d", "j", "i", "p", "n", "trials", "mean", "variance", "std_err", "exact_variance", "slope")


@dataclass(frozen=True)
class ScalingRow:
    d: int
    j: int
    i: int
    p: float
    n: int
    trials: int
    mean: float
    variance: float
    std_err: float
    exact_variance: Optional[float]
    slope: Optional[float]

    def as_row(self) -> List[Any]:
        return [getattr(self, name) for name in SCALING_COLUMNS]

    def as_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class VarianceFit:
    """Least-squares fit of log(variance) on log(n) for one p."""
    p: float
    slope: Optional[float]
    intercept: Optional[float]
    used: Tuple[int, ...]
    excluded: Tuple[int, ...]
    diagnostic: Optional[str] = None

    def as_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "slope": self.slope,
            "intercept": self.intercept,
            "used": list(self.used),
            "excluded": list(self.excluded),
            "diagnostic": self.diagnostic,
        }


@dataclass
class ScalingReport:
    rows: List[ScalingRow] = field(default_factory=list)
    fits: List[VarianceFit] = field(default_factory=list)

    def fit_for(self, p: float) -> VarianceFit:
        return next(f for f in self.fits if f.p == p)

    def as_dict(self) -> Dict[str, Any]:
        return {"rows": [r.as_dict() for r in self.rows], "fits": [f.as_dict() for f in self.fits]}


def fit_log_log(p: float, ns: Sequence[int], variances: Sequence[float]) -> VarianceFit:
    """Fit log variance = slope * log n + intercept, skipping zero variances."""
    used = [(n, v) for n, v in zip(ns, variances) if v > 0]
    excluded = tuple(n for n, v in zip(ns, variances) if v <= 0)
    if excluded:
        logger.warning(f"p={p}: zero variance at n={list(excluded)}; excluded from the fit")
    if len(used) < 2:
        diagnostic = f"fit refused: {len(used)} of {len(ns)} cells have nonzero variance"
        logger.warning(f"p={p}: {diagnostic}")
        return VarianceFit(p, None, None, tuple(n for n, _ in used), excluded, diagnostic)
    x = np.log([n for n, _ in used])
    y = np.log([v for _, v in used])
    slope, intercept = np.polyfit(x, y, 1)
    return VarianceFit(p, float(slope), float(intercept), tuple(n for n, _ in used), excluded)


def _exact_normalized_variances(config: ExperimentConfig) -> Dict[int, Optional[IntPolynomial]]:
    polys: Dict[int, Optional[IntPolynomial]] = {}
    for n in config.n_grid:
        try:
            polys[n] = expected_statistic_variance(config.d, config.j, config.i, n, config.field_spec)
        except GuardExceeded as e:
            logger.info(f"Exact variance unavailable for n={n}: {e}")
            polys[n] = None
    return polys


def run_variance_scaling(config: ExperimentConfig) -> ScalingReport:
    """Empirical variance of the normalized statistic per (p, n) and a log-log slope per p."""
    if len(config.n_grid) < 3:
        raise ValueError(f"variance scaling needs at least 3 values of n, got {len(config.n_grid)}")
    exact = _exact_normalized_variances(config)
    report = ScalingReport()
    for p in config.p_grid:
        cells = []
        for n in config.n_grid:
            stats = estimate_bigraded(
                config.d, n, p, config.i, config.j, config.trials, config.seed, config.field_spec,
                workers=config.workers, work_budget=config.work_budget,
            )
            poly = exact[n]
            exact_value = None
            if poly is not None:
                exact_value = float(poly.evaluate(Fraction(p)) / comb(n, config.j) ** 2)
            cells.append((n, stats, exact_value))
        fit = fit_log_log(p, [n for n, _, _ in cells], [s.variance for _, s, _ in cells])
        report.fits.append(fit)
        for n, stats, exact_value in cells:
            report.rows.append(ScalingRow(
                d=config.d, j=config.j, i=config.i, p=p, n=n, trials=stats.trials,
                mean=stats.mean, variance=stats.variance, std_err=stats.std_err,
                exact_variance=exact_value, slope=fit.slope,
            ))
        logger.info(f"Variance scaling p={p}: slope={fit.slope}")
    return report


# ============================================================================
# Covariance
# ============================================================================

@dataclass(frozen=True)
class CovarianceResult:
    d: int
    j: int
    i: int
    m: int
    n: int
    p: float
    trials: int
    covariance: float
    std_err: float
    radius: float
    exact: Optional[float]

    @property
    def within(self) -> bool:
        """Empirical covariance lies within the radius of the exact value (or of 0)."""
        target = self.exact if self.exact is not None else 0.0
        return abs(self.covariance - target) <= self.radius

    def as_row(self) -> List[Any]:
        return [getattr(self, name) for name in COVARIANCE_COLUMNS]

    def as_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "within": self.within}


COVARIANCE_COLUMNS = ("d", "j", "i", "m", "n", "p", "trials", "covariance", "std_err", "radius", "exact")


def _pair_block(
    params: LMParams,
    k: int,
    first: int,
    second: int,
    field: FieldSpec,
    trials: range,
) -> List[Tuple[int, int]]:
    out = []
    for t in trials:
        Y = sample_stream(params, t)
        out.append((
            reduced_betti(restrict_to_mask(Y, first), k, field),
            reduced_betti(restrict_to_mask(Y, second), k, field),
        ))
    return out


def run_covariance_check(config: CovarianceConfig) -> CovarianceResult:
    """Empirical Cov(X_{J1}, X_{J2}) for J1 = {1..j}, J2 = {j-m+1..2j-m}."""
    d, j, i, m = config.d, config.j, config.i, config.m
    n = config.vertex_count
    k = j - i - 1
    first = (1 << j) - 1
    second = ((1 << j) - 1) << (j - m)
    params = LMParams(n=n, d=d, p=config.p, seed=config.seed)
    blocks = parallel_map(
        partial(_pair_block, params, k, first, second, config.field_spec),
        index_ranges(config.trials, config.workers),
        config.workers,
    )
    pairs = [pair for block in blocks for pair in block]
    T = len(pairs)
    m1 = Fraction(sum(x for x, _ in pairs), T)
    m2 = Fraction(sum(y for _, y in pairs), T)
    products = [(x - m1) * (y - m2) for x, y in pairs]
    covariance = sum(products, Fraction(0)) / (T - 1)
    spread = np.std(np.array([float(z) for z in products]), ddof=1)
    std_err = float(spread) / math.sqrt(T)

    exact: Optional[float] = None
    try:
        exact = float(exact_cov_poly(d, j, m, i, config.field_spec).evaluate(Fraction(config.p)))
    except GuardExceeded as e:
        logger.info(f"Exact covariance unavailable: {e}")

    result = CovarianceResult(
        d=d, j=j, i=i, m=m, n=n, p=config.p, trials=T,
        covariance=float(covariance), std_err=std_err,
        radius=ACCEPTANCE_RADIUS * std_err, exact=exact,
    )
    logger.info(f"Covariance d={d} j={j} m={m}: {result.covariance:.6g} +/- {result.radius:.3g} (exact {exact})")
    return result


# ============================================================================
# Structural audit
# ============================================================================

@dataclass
class AuditReport:
    d: int
    samples: int = 0
    subcomplexes: int = 0
    structural_violations: List[Dict[str, Any]] = field(default_factory=list)
    euler_mismatches: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.structural_violations and not self.euler_mismatches

    def as_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "ok": self.ok}


def _euler_mismatches(Y: SimplicialComplex, field: FieldSpec) -> Tuple[int, List[int]]:
    """Check Sum (-1)^k b~_k against the face-count Euler characteristic on every full subcomplex."""
    bad = []
    for jmask in range(1 << Y.n):
        K_J = restrict_to_mask(Y, jmask)
        betti = reduced_betti_numbers(K_J, field, HomologyMethod.RANK)
        alternating = sum((-1) ** (k % 2) * b for k, b in betti.items())
        if alternating != reduced_euler_characteristic(K_J):
            bad.append(jmask)
    return 1 << Y.n, bad


def run_structural_audit(
    d: int,
    n_values: Sequence[int],
    samples: int,
    seed: int,
    field: FieldSpec = DEFAULT_FIELD,
    *,
    p_values: Sequence[float] = (0.3, 0.5, 0.7),
) -> AuditReport:
    """Sample Y^d(n, p) and check structural zeros of the bigraded table and the
    Euler identity on every full subcomplex.

    Sample t for a given n uses p = p_values[t % len(p_values)].
    """
    report = AuditReport(d=d)
    for n in n_values:
        for t in range(samples):
            p = p_values[t % len(p_values)]
            Y = sample_stream(LMParams(n=n, d=d, p=p, seed=seed), t)
            table = bigraded_betti(Y, field)
            for i, j, beta in structural_violations(table, d):
                report.structural_violations.append({"n": n, "trial": t, "i": i, "j": j, "beta": beta})
            checked, bad = _euler_mismatches(Y, field)
            report.subcomplexes += checked
            for jmask in bad:
                report.euler_mismatches.append({"n": n, "trial": t, "mask": jmask})
            report.samples += 1
    logger.info(
        f"Audit d={d}: {report.samples} samples, {report.subcomplexes} subcomplexes, "
        f"{len(report.structural_violations)} structural violations, {len(report.euler_mismatches)} Euler mismatches"
    )
    return report


# ============================================================================
# Rendering
# ============================================================================

def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """CSV with a header row; floats carry 17 significant digits."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(v) for v in row])
    return buffer.getvalue()


def render_json(document: Dict[str, Any]) -> bytes:
    return canonical_json(document)


def write_csv(path, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    with open(path, "w", newline="") as f:
        f.write(render_csv(columns, rows))


def write_json(path, document: Dict[str, Any]) -> None:
    with open(path, "wb") as f:
        f.write(render_json(document) + b"\n")
