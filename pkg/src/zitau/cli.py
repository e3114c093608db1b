"""Command-line interface.

Subcommands::

    zitau estimate data.csv [--header]
    zitau bounds --zip-x 0.8,2 --zip-y 0.8,2 [--exact | --denuit]
    zitau bounds --p1 0.3 --p2 0.3 --denuit
    zitau bounds --input data.csv [--header]
    zitau true-tau --zip-x 0.8,2 --zip-y 0.8,8 --rho 0.5
    zitau simulate config.ini [--out DIR] [--workers K]

Exit codes: 0 success, 2 usage, 3 data validation, 4 numeric/degenerate.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import BoundsReport, denuit_bounds, estimate_bounds, exact_tau_a_bounds
from .distributions import (
    DEFAULT_TAIL_TOL,
    FrechetCopula,
    PairedSample,
    ZipMargin,
    joint_pmf_grid,
)
from .errors import (
    DegenerateError,
    DomainError,
    InsufficientDataError,
    InvalidCdfError,
    PrecisionError,
    ZitauError,
)
from .estimators import EstimateReport, estimate
from .montecarlo import (
    REPLICATE_COLUMNS,
    SimResult,
    SimScenario,
    run_scenario,
    table1_scenarios,
    table2_scenarios,
)
from .oracle import true_tau

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class UsageError(ZitauError):
    pass


class DataError(ZitauError):
    pass


def read_pairs_csv(path, header: bool = False) -> PairedSample:
    """Read two comma-separated integer columns.

    Rows are numbered from 1 after the optional header line; blank lines are
    skipped.
    """
    xs, ys = [], []
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    if header and lines:
        lines = lines[1:]
    for row_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise DataError(f"row {row_no}: expected 2 columns, got {len(fields)}")
        vals = []
        for f in fields:
            try:
                v = int(f)
            except ValueError:
                raise DataError(f"row {row_no}: {f!r} is not an integer") from None
            if v < 0:
                raise DataError(f"row {row_no}: negative count {v}")
            vals.append(v)
        xs.append(vals[0])
        ys.append(vals[1])
    if len(xs) < 2:
        raise InsufficientDataError(f"need at least 2 rows, got {len(xs)}")
    return PairedSample(np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64))


def write_pairs_csv(sample: PairedSample, path, header: bool = False):
    with open(path, "w", newline="") as fh:
        if header:
            fh.write("x,y\n")
        for x, y in sample.pairs:
            fh.write(f"{x},{y}\n")


def estimate_to_dict(r: EstimateReport) -> dict:
    z = r.stats
    return {
        "n": z.n,
        "tau_hat": r.tau_hat,
        "tau_b": r.tau_b,
        "tau11_hat": r.tau11_hat,
        "tau_h_hat": r.tau_h_hat,
        "tau_a_hat": r.tau_a_hat,
        "p00": z.p00,
        "p01": z.p01,
        "p10": z.p10,
        "p11": z.p11,
        "counts": {"n00": z.n00, "n01": z.n01, "n10": z.n10, "n11": z.n11},
        "p1_star": r.cross.p1_star,
        "p1_dagger": r.cross.p1_dagger,
        "p2_star": r.cross.p2_star,
        "p2_dagger": r.cross.p2_dagger,
        "warnings": list(r.warnings),
    }


def bounds_to_dict(b: BoundsReport) -> dict:
    return {
        "kind": b.kind,
        "lower": b.lower,
        "upper": b.upper,
        "p1": b.p1,
        "p2": b.p2,
        "s_tilde": b.s_tilde,
        "t_tilde": b.t_tilde,
        "s_tilde_prime": b.s_tilde_prime,
        "t_tilde_prime": b.t_tilde_prime,
        "pU_t11": b.pU_t11,
        "pL_t11": b.pL_t11,
        "warnings": list(b.warnings),
    }


def _emit(obj: dict, fmt: str, out):
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
        return

    def walk(d, prefix=""):
        for k, v in d.items():
            if isinstance(v, dict):
                walk(v, f"{prefix}{k}.")
            elif isinstance(v, float):
                out.write(f"{prefix}{k}: {v:.12g}\n")
            else:
                out.write(f"{prefix}{k}: {v}\n")

    walk(obj)


def _margin(text: str) -> ZipMargin:
    try:
        pi_s, lam_s = text.split(",")
        return ZipMargin(float(pi_s), float(lam_s))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected PI,LAMBDA, got {text!r}: {exc}")


def cmd_estimate(args, out) -> int:
    sample = read_pairs_csv(args.input, header=args.header)
    report = estimate(sample, tau11_method=args.tau11)
    bounds = estimate_bounds(sample, tie_normalization=args.tie_normalization)
    _emit({"estimate": estimate_to_dict(report), "bounds": bounds_to_dict(bounds)},
          args.format, out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    sources = [
        args.zip_x is not None or args.zip_y is not None,
        args.p1 is not None or args.p2 is not None,
        args.input is not None,
    ]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --zip-x/--zip-y, --p1/--p2 or --input")
    if args.input is not None:
        if args.exact or args.denuit:
            raise UsageError("--exact/--denuit apply to known margins only")
        sample = read_pairs_csv(args.input, header=args.header)
        rep = estimate_bounds(sample, tie_normalization=args.tie_normalization)
    elif args.p1 is not None or args.p2 is not None:
        if args.p1 is None or args.p2 is None:
            raise UsageError("--p1 and --p2 must be given together")
        if args.exact:
            raise UsageError("exact bounds need full margins (--zip-x/--zip-y)")
        rep = denuit_bounds(args.p1, args.p2)
    else:
        if args.zip_x is None or args.zip_y is None:
            raise UsageError("--zip-x and --zip-y must be given together")
        if args.denuit and args.exact:
            raise UsageError("choose one of --exact and --denuit")
        if args.denuit:
            rep = denuit_bounds(args.zip_x.zero_prob(), args.zip_y.zero_prob())
        else:
            rep = exact_tau_a_bounds(args.zip_x, args.zip_y, args.tail_tol)
    _emit(bounds_to_dict(rep), args.format, out)
    return EXIT_OK


def cmd_true_tau(args, out) -> int:
    grid = joint_pmf_grid(args.zip_x, args.zip_y, FrechetCopula(args.rho), args.tail_tol)
    _emit({
        "true_tau": true_tau(grid),
        "rho": args.rho,
        "tail_tol": args.tail_tol,
        "truncation_order": grid.truncation_order,
        "tail_mass": grid.tail_mass,
    }, args.format, out)
    return EXIT_OK


# --- simulate -----------------------------------------------------------

_SIM_KEYS = {"seed", "reps", "n", "tables", "workers", "tail_tol", "replicates"}
_SCENARIO_KEYS = {"pi_f", "pi_g", "lambda_f", "lambda_g", "rho"}
_TABLES = ("table1", "table2")


@dataclass(frozen=True)
class RunConfig:
    seed: int
    reps: int = 1000
    n: int = 150
    tables: tuple[str, ...] = _TABLES
    workers: int = 1
    tail_tol: float = DEFAULT_TAIL_TOL
    replicates: bool = False
    scenarios: tuple[tuple[str, dict], ...] = ()


def load_config(path) -> RunConfig:
    """Parse an INI simulation config; unknown sections and keys are errors."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            cp.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None

    problems = []
    if "simulate" not in cp:
        raise UsageError("config needs a [simulate] section")
    sim = cp["simulate"]
    unknown = sorted(set(sim) - _SIM_KEYS)
    if unknown:
        problems.append(f"[simulate]: unknown keys {', '.join(unknown)}")
    scenarios = []
    for name in cp.sections():
        if name == "simulate":
            continue
        if not name.startswith("scenario "):
            problems.append(f"unknown section [{name}]")
            continue
        sec = cp[name]
        bad = sorted(set(sec) - _SCENARIO_KEYS)
        if bad:
            problems.append(f"[{name}]: unknown keys {', '.join(bad)}")
        missing = sorted(_SCENARIO_KEYS - set(sec))
        if missing:
            problems.append(f"[{name}]: missing keys {', '.join(missing)}")
        if not bad and not missing:
            try:
                scenarios.append((name[len("scenario "):].strip(),
                                  {k: float(sec[k]) for k in sorted(_SCENARIO_KEYS)}))
            except ValueError as exc:
                problems.append(f"[{name}]: {exc}")
    if problems:
        raise UsageError("invalid config: " + "; ".join(problems))

    try:
        tables = tuple(t.strip() for t in sim.get("tables", ",".join(_TABLES)).split(",") if t.strip())
        bad_tables = [t for t in tables if t not in _TABLES]
        if bad_tables:
            raise UsageError(f"invalid config: unknown tables {', '.join(bad_tables)}")
        if "seed" not in sim:
            raise UsageError("invalid config: [simulate] needs a seed")
        return RunConfig(
            seed=sim.getint("seed"),
            reps=sim.getint("reps", 1000),
            n=sim.getint("n", 150),
            tables=tables,
            workers=sim.getint("workers", 1),
            tail_tol=sim.getfloat("tail_tol", DEFAULT_TAIL_TOL),
            replicates=sim.getboolean("replicates", False),
            scenarios=tuple(scenarios),
        )
    except ValueError as exc:
        raise UsageError(f"invalid config: {exc}") from None


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    path.write_text(buf.getvalue())


_SCEN_COLS = ["lambda_f", "lambda_g", "pi_f", "pi_g", "rho", "n", "reps", "seed"]
TABLE1_COLUMNS = _SCEN_COLS + [
    "true_tau", "mean_tau_h", "mse100_tau_h", "mean_tau_a", "mse100_tau_a",
    "mean_tau_b", "mse100_tau_b", "mean_tau_hat", "mse100_tau_hat", "n_flagged",
]
TABLE2_COLUMNS = _SCEN_COLS + [
    "bounds_h_lower", "bounds_h_upper", "bounds_a_lower", "bounds_a_upper",
    "exact_a_lower", "exact_a_upper", "n_flagged",
]


def _scen_values(s: SimScenario):
    return [s.lambda_f, s.lambda_g, s.pi_f, s.pi_g, s.rho, s.n, s.reps, s.base_seed]


def _table1_row(r: SimResult):
    return _scen_values(r.scenario) + [
        r.true_tau, r.mean_tau_h, r.mse100_tau_h, r.mean_tau_a, r.mse100_tau_a,
        r.mean_tau_b, r.mse100_tau_b, r.mean_tau_hat, r.mse100_tau_hat, r.n_flagged,
    ]


def _table2_row(r: SimResult):
    return _scen_values(r.scenario) + [
        *r.mean_bounds_h, *r.mean_bounds_a, *r.exact_bounds_a, r.n_flagged,
    ]


def run_config(cfg: RunConfig, out_dir: Path, workers: int | None = None) -> list[Path]:
    """Run every table in ``cfg`` and write CSV files; returns the paths."""
    workers = cfg.workers if workers is None else workers
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    replicate_rows = []

    def go(label, scenarios, row_fn, columns, filename):
        results = [run_scenario(s, workers, keep_replicates=cfg.replicates) for s in scenarios]
        path = out_dir / filename
        _write_csv(path, columns, [row_fn(r) for r in results])
        written.append(path)
        if cfg.replicates:
            for i, r in enumerate(results):
                for rep, vals in enumerate(r.replicates):
                    replicate_rows.append([label, i, rep, *_scen_values(r.scenario)[:5],
                                           *[float(v) for v in vals[:-1]], int(vals[-1])])

    if "table1" in cfg.tables:
        go("table1", [
            SimScenario(s.pi_f, s.pi_g, s.lambda_f, s.lambda_g, s.rho, n=s.n,
                        reps=s.reps, base_seed=s.base_seed, stream_key=s.stream_key,
                        tail_tol=cfg.tail_tol)
            for s in table1_scenarios(cfg.seed, cfg.reps, cfg.n)
        ], _table1_row, TABLE1_COLUMNS, "table1.csv")
    if "table2" in cfg.tables:
        go("table2", [
            SimScenario(s.pi_f, s.pi_g, s.lambda_f, s.lambda_g, s.rho, n=s.n,
                        reps=s.reps, base_seed=s.base_seed, stream_key=s.stream_key,
                        tail_tol=cfg.tail_tol)
            for s in table2_scenarios(cfg.seed, cfg.reps, cfg.n)
        ], _table2_row, TABLE2_COLUMNS, "table2.csv")
    if cfg.scenarios:
        custom = [
            SimScenario(p["pi_f"], p["pi_g"], p["lambda_f"], p["lambda_g"], p["rho"],
                        n=cfg.n, reps=cfg.reps, base_seed=cfg.seed, stream_key=(3, i),
                        tail_tol=cfg.tail_tol)
            for i, (_, p) in enumerate(cfg.scenarios)
        ]
        go("scenarios", custom,
           lambda r: _table1_row(r) + [*r.mean_bounds_h, *r.mean_bounds_a, *r.exact_bounds_a],
           TABLE1_COLUMNS + TABLE2_COLUMNS[len(_SCEN_COLS):-1],
           "scenarios.csv")
    if cfg.replicates:
        path = out_dir / "replicates.csv"
        _write_csv(path, ["table", "row", "rep", "lambda_f", "lambda_g", "pi_f", "pi_g", "rho",
                          *REPLICATE_COLUMNS], replicate_rows)
        written.append(path)
    return written


def cmd_simulate(args, out) -> int:
    cfg = load_config(args.config)
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be at least 1")
    paths = run_config(cfg, Path(args.out), args.workers)
    for p in paths:
        out.write(f"wrote {p}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zitau",
        description="Kendall's tau estimators and bounds for paired counts with excess zeros.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    def tie_norm(p):
        p.add_argument("--tie-normalization", choices=("sample", "subsample"),
                       default="sample",
                       help="denominator of the tie frequency in estimated bounds")

    p = sub.add_parser("estimate", help="estimate tau and its bounds from a CSV file")
    p.add_argument("input", help="CSV with two non-negative integer columns")
    p.add_argument("--header", action="store_true", help="skip the first line")
    p.add_argument("--tau11", choices=("tau_b", "standard"), default="tau_b",
                   help="estimator of tau on the both-positive rows")
    tie_norm(p)
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bounds", help="attainable bounds of tau")
    p.add_argument("--zip-x", type=_margin, metavar="PI,LAMBDA")
    p.add_argument("--zip-y", type=_margin, metavar="PI,LAMBDA")
    p.add_argument("--p1", type=float, help="P(X = 0)")
    p.add_argument("--p2", type=float, help="P(Y = 0)")
    p.add_argument("--input", help="CSV sample for plug-in bounds")
    p.add_argument("--header", action="store_true")
    p.add_argument("--exact", action="store_true", help="sharp bounds for known margins")
    p.add_argument("--denuit", action="store_true", help="bounds from zero probabilities only")
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    tie_norm(p)
    common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("true-tau", help="exact tau of two ZIP margins under a Frechet copula")
    p.add_argument("--zip-x", type=_margin, required=True, metavar="PI,LAMBDA")
    p.add_argument("--zip-y", type=_margin, required=True, metavar="PI,LAMBDA")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--tail-tol", type=float, default=DEFAULT_TAIL_TOL)
    common(p)
    p.set_defaults(func=cmd_true_tau)

    p = sub.add_parser("simulate", help="run a Monte Carlo campaign from an INI config")
    p.add_argument("config")
    p.add_argument("--out", default=".", help="output directory (default: .)")
    p.add_argument("--workers", type=int, default=None, help="override config workers")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"zitau: usage error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        err.write(f"zitau: invalid parameter: {exc}\n")
        return EXIT_USAGE
    except (DataError, InsufficientDataError) as exc:
        err.write(f"zitau: data error: {exc}\n")
        return EXIT_DATA
    except OSError as exc:
        err.write(f"zitau: data error: {exc}\n")
        return EXIT_DATA
    except (DegenerateError, PrecisionError, InvalidCdfError) as exc:
        err.write(f"zitau: numeric error: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
