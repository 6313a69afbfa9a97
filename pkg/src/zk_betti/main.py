"""
zk-betti - Command Line

Subcommands:
- betti / zk: bigraded Betti table and moment-angle Betti numbers of a complex file
- sample: one Linial-Meshulam sample as a complex file
- limit-poly: exact f/g/var/cov polynomials
- converge / var-scale / cov-check: Monte Carlo experiments
- taylor-check / audit: oracle comparison and structural audit

Results go to stdout (or --out) as canonical JSON or CSV; logs go to stderr.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from pydantic import ValidationError

from zk_betti import __version__
from zk_betti.domain import (
    ComplexError,
    CovarianceConfig,
    ExperimentConfig,
    FieldError,
    FieldSpec,
    GuardExceeded,
    InvariantViolation,
    LMParams,
    ZkBettiError,
    bigraded_betti,
    dump_complex,
    exact_cov_poly,
    exact_variance_poly,
    limit_poly_f,
    limit_poly_g,
    load_complex,
    run_convergence,
    run_covariance_check,
    run_structural_audit,
    run_variance_scaling,
    sample_lm,
    sample_stream,
    tor_via_taylor,
    zk_betti_numbers,
)
from zk_betti.domain.experiments import (
    CONVERGENCE_COLUMNS,
    COVARIANCE_COLUMNS,
    SCALING_COLUMNS,
    render_csv,
    render_json,
    write_csv,
    write_json,
)
from zk_betti.domain.limit_polys import polynomial_document, published_comparison
from zk_betti.domain.parallel import default_workers

logger = logging.getLogger("zk-betti")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GUARD = 3
EXIT_INVARIANT = 4

LOG_LEVEL_ENV = "ZK_BETTI_LOG_LEVEL"
UNBOUNDED_BUDGET = (1 << 53) - 1


# ============================================================================
# Logging and output
# ============================================================================

def configure_logging(verbose: int = 0, quiet: bool = False) -> None:
    """Route logs to stderr; flags win over ZK_BETTI_LOG_LEVEL (default WARNING)."""
    level = os.getenv(LOG_LEVEL_ENV, "WARNING").upper()
    if verbose:
        level = "DEBUG" if verbose > 1 else "INFO"
    if quiet:
        level = "ERROR"
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def emit_json(document: Dict[str, Any], out: Optional[str]) -> None:
    if out:
        write_json(out, document)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(render_json(document).decode("utf-8") + "\n")


def emit_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]], out: Optional[str]) -> None:
    if out:
        write_csv(out, columns, rows)
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(render_csv(columns, rows))


def _field(args: argparse.Namespace) -> FieldSpec:
    return FieldSpec.parse(args.field or "f2")


def _workers(args: argparse.Namespace) -> int:
    return args.workers if args.workers is not None else default_workers()


# ============================================================================
# Complex subcommands
# ============================================================================

def cmd_betti(args: argparse.Namespace) -> int:
    K = load_complex(args.complex)
    entries = [tuple(e) for e in args.entry] if args.entry else None
    table = bigraded_betti(
        K, _field(args), entries, override=args.override_guards, workers=_workers(args)
    )
    emit_json(table.to_document().model_dump(mode="json"), args.out)
    return EXIT_OK


def cmd_zk(args: argparse.Namespace) -> int:
    K = load_complex(args.complex)
    field = _field(args)
    betti = zk_betti_numbers(K, field, override=args.override_guards, workers=_workers(args))
    emit_json({"n": K.n, "field": field.name, "betti": betti}, args.out)
    return EXIT_OK


def cmd_sample(args: argparse.Namespace) -> int:
    params = LMParams(n=args.n, d=args.d, p=args.p, seed=args.seed)
    K = sample_stream(params, args.trial) if args.trial is not None else sample_lm(params)
    emit_json(dump_complex(K).model_dump(mode="json"), args.out)
    return EXIT_OK


def cmd_limit_poly(args: argparse.Namespace) -> int:
    field = _field(args)
    d, j = args.d, args.j
    options = {"override": args.override_guards, "workers": _workers(args)}
    i = args.i
    if args.kind == "f":
        poly = limit_poly_f(d, j, field, **options)
    elif args.kind == "g":
        poly = limit_poly_g(d, j, field, **options)
    else:
        i = j - d if i is None else i
        if args.kind == "var":
            poly = exact_variance_poly(d, j, i, field, **options)
        else:
            if args.m is None:
                raise ValueError("--m is required for kind=cov")
            poly = exact_cov_poly(d, j, args.m, i, field, **options)
    doc = polynomial_document(poly, d, j, args.kind, field, m=args.m, i=i if args.kind in ("var", "cov") else None)
    emit_json(doc.model_dump(mode="json", exclude_none=True), args.out)
    return EXIT_OK


def cmd_taylor_check(args: argparse.Namespace) -> int:
    K = load_complex(args.complex)
    field = _field(args)
    hochster = bigraded_betti(K, field, override=args.override_guards, workers=_workers(args))
    taylor = tor_via_taylor(K, field, override=args.override_guards)
    agree = hochster.entries == taylor.entries
    emit_json({
        "agree": agree,
        "hochster": hochster.to_document().model_dump(mode="json"),
        "taylor": taylor.to_document().model_dump(mode="json"),
    }, args.out)
    if not agree:
        raise InvariantViolation("Hochster and Taylor tables differ")
    return EXIT_OK


# ============================================================================
# Experiment subcommands
# ============================================================================

def _load_config_file(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return data


def _merged_config(args: argparse.Namespace, keys: Sequence[str]) -> Dict[str, Any]:
    """Config-file values overlaid with the flags given on the command line."""
    merged = _load_config_file(args.config)
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if args.workers is not None or "workers" not in merged:
        merged["workers"] = _workers(args)
    return merged


EXPERIMENT_KEYS = ("d", "j", "i", "p_grid", "n_grid", "trials", "seed", "field", "work_budget")
COVARIANCE_KEYS = ("d", "j", "i", "m", "n", "p", "trials", "seed", "field")


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    merged = _merged_config(args, EXPERIMENT_KEYS)
    if args.override_guards and args.work_budget is None:
        merged["work_budget"] = UNBOUNDED_BUDGET
    return ExperimentConfig.model_validate(merged)


def _config_summary(config) -> Dict[str, Any]:
    return config.model_dump(mode="json", exclude={"workers"})


def cmd_converge(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    rows = run_convergence(config)
    if args.format == "csv":
        emit_csv(CONVERGENCE_COLUMNS, [r.as_row() for r in rows], args.out)
    else:
        emit_json({"config": _config_summary(config), "rows": [r.as_dict() for r in rows]}, args.out)
    return EXIT_OK


def cmd_var_scale(args: argparse.Namespace) -> int:
    config = _experiment_config(args)
    report = run_variance_scaling(config)
    if args.format == "csv":
        emit_csv(SCALING_COLUMNS, [r.as_row() for r in report.rows], args.out)
    else:
        emit_json({"config": _config_summary(config), **report.as_dict()}, args.out)
    return EXIT_OK


def cmd_cov_check(args: argparse.Namespace) -> int:
    config = CovarianceConfig.model_validate(_merged_config(args, COVARIANCE_KEYS))
    result = run_covariance_check(config)
    if args.format == "csv":
        emit_csv(COVARIANCE_COLUMNS, [result.as_row()], args.out)
    else:
        emit_json({"config": _config_summary(config), "result": result.as_dict()}, args.out)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    field = _field(args)
    reports = [
        run_structural_audit(d, args.n_values, args.samples, args.seed, field)
        for d in args.d
    ]
    published = [c.as_dict() for c in published_comparison(field)]
    emit_json({
        "seed": str(args.seed),
        "field": field.name,
        "audits": [r.as_dict() for r in reports],
        "published_d1": published,
    }, args.out)
    if not all(r.ok for r in reports):
        raise InvariantViolation("structural audit found violations")
    return EXIT_OK


# ============================================================================
# Parser
# ============================================================================

def _entry(text: str) -> List[int]:
    try:
        i, j = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected I,J, got {text!r}")
    return [i, j]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="coefficient field: q or f<prime> (default: f2)")
    common.add_argument("--workers", type=int, default=None, help="parallel workers (default: all CPUs)")
    common.add_argument("--override-guards", action="store_true", help="run past size and budget guards")
    common.add_argument("--out", default=None, help="write the result to a file instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0, help="log INFO (-vv for DEBUG)")
    common.add_argument("-q", "--quiet", action="store_true", help="log errors only")
    return common


def _experiment_flags(parser: argparse.ArgumentParser) -> None:
    defaults = ExperimentConfig()
    parser.add_argument("--config", default=None, help="JSON config file; flags override its values")
    parser.add_argument("--d", type=int, default=None, help=f"dimension (default: {defaults.d})")
    parser.add_argument("--j", type=int, default=None, help=f"full-subcomplex size (default: {defaults.j})")
    parser.add_argument("--i", type=int, default=None, help=f"homological index (default: {defaults.i})")
    parser.add_argument("--p-grid", dest="p_grid", type=float, nargs="+", default=None,
                        help=f"probabilities (default: {defaults.p_grid})")
    parser.add_argument("--n-grid", dest="n_grid", type=int, nargs="+", default=None,
                        help=f"vertex counts (default: {defaults.n_grid})")
    parser.add_argument("--trials", type=int, default=None, help=f"trials per cell (default: {defaults.trials})")
    parser.add_argument("--seed", type=int, default=None, help=f"master seed (default: {defaults.seed})")
    parser.add_argument("--work-budget", dest="work_budget", type=int, default=None,
                        help="work units allowed per cell")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zk-betti",
        description="Bigraded Betti numbers of Stanley-Reisner rings and random complex experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    p = sub.add_parser("betti", parents=[common], help="bigraded Betti table of a complex file")
    p.add_argument("complex", help='complex file {"n": ..., "facets": [...]}')
    p.add_argument("--entry", type=_entry, action="append", default=None,
                   help="only compute beta^{-i,2j} for I,J (repeatable)")
    p.set_defaults(handler=cmd_betti)

    p = sub.add_parser("zk", parents=[common], help="Betti numbers of the moment-angle complex")
    p.add_argument("complex")
    p.set_defaults(handler=cmd_zk)

    p = sub.add_parser("sample", parents=[common], help="sample a Linial-Meshulam complex")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trial", type=int, default=None, help="use the substream of this trial")
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("limit-poly", parents=[common], help="exact limit/variance/covariance polynomial")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--kind", choices=("f", "g", "var", "cov"), required=True)
    p.add_argument("--i", type=int, default=None, help="row for var/cov (default: j-d)")
    p.add_argument("--m", type=int, default=None, help="overlap size for cov")
    p.set_defaults(handler=cmd_limit_poly)

    p = sub.add_parser("converge", parents=[common], help="convergence to the limit polynomial")
    _experiment_flags(p)
    p.set_defaults(handler=cmd_converge)

    p = sub.add_parser("var-scale", parents=[common], help="log-log variance scaling in n")
    _experiment_flags(p)
    p.set_defaults(handler=cmd_var_scale)

    cov = CovarianceConfig()
    p = sub.add_parser("cov-check", parents=[common], help="covariance of two overlapping j-sets")
    p.add_argument("--config", default=None, help="JSON config file; flags override its values")
    p.add_argument("--d", type=int, default=None, help=f"dimension (default: {cov.d})")
    p.add_argument("--j", type=int, default=None, help=f"j-set size (default: {cov.j})")
    p.add_argument("--i", type=int, default=None, help=f"homological index (default: {cov.i})")
    p.add_argument("--m", type=int, default=None, help=f"overlap (default: {cov.m})")
    p.add_argument("--n", type=int, default=None, help="vertex count (default: 2j-m)")
    p.add_argument("--p", type=float, default=None, help=f"probability (default: {cov.p})")
    p.add_argument("--trials", type=int, default=None, help=f"trials (default: {cov.trials})")
    p.add_argument("--seed", type=int, default=None, help=f"master seed (default: {cov.seed})")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(handler=cmd_cov_check)

    p = sub.add_parser("taylor-check", parents=[common], help="compare Hochster and Taylor tables")
    p.add_argument("complex")
    p.set_defaults(handler=cmd_taylor_check)

    p = sub.add_parser("audit", parents=[common], help="structural zeros and Euler identity on samples")
    p.add_argument("--d", type=int, nargs="+", default=[1, 2])
    p.add_argument("--n-values", dest="n_values", type=int, nargs="+", default=[4, 6, 8])
    p.add_argument("--samples", type=int, default=50, help="samples per (d, n)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_audit)

    return parser


# ============================================================================
# Entry Point
# ============================================================================

def _describe_validation(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(x) for x in err["loc"]) or "config"
        parts.append(f"{loc}: {err['msg']}")
    return "invalid parameters: " + "; ".join(parts)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.verbose, args.quiet)

    try:
        return args.handler(args)
    except GuardExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except InvariantViolation as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except ValidationError as e:
        print(f"error: {_describe_validation(e)}", file=sys.stderr)
        return EXIT_USAGE
    except (ComplexError, FieldError, ZkBettiError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
