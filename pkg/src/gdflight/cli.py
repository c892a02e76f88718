"""Command-line front end: simulate flights, tabulate laws, run checks.

Exit status: 0 success, 2 invalid input, 3 numerical failure, 4 a
verification test rejected.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import __version__
from . import density as dens
from .errors import DomainError, NumericError
from .flight import FlightConfig, SolvableModel, default_threads, sample_batch
from .sampling import GDParams, RngStream, sample_gd
from .verify import (
    TestReport,
    chi2_gd,
    empirical_cf,
    isotropy_check,
    ks_test,
    pairwise_ks,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_REJECTED = 0, 2, 3, 4
EDGE_CLAMP = 1e-9
SUITES = ("solvable-first", "solvable-second", "conditional", "two-step", "unconditional", "gd")


@dataclass
class Table:
    columns: list
    rows: list
    failed: bool = False


def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_grid(text: str) -> np.ndarray:
    """'min:max:points' with both ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must look like min:max:points, got {text!r}")
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1 or hi < lo:
        raise DomainError(f"grid needs points >= 1 and max >= min, got {text!r}")
    return np.linspace(lo, hi, count) if count > 1 else np.array([lo])


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return "" if v is None else str(v)


def _json_value(v) -> str:
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g") if math.isfinite(v) else "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return json.dumps(v)


def render(table: Table, fmt: str, meta: dict) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_fmt(v) for v in row])
        return buf.getvalue()
    rows = [
        "{" + ", ".join(f"{json.dumps(c)}: {_json_value(v)}" for c, v in zip(table.columns, row)) + "}"
        for row in table.rows
    ]
    return '{"meta": ' + json.dumps(meta, sort_keys=True) + ', "rows": [' + ", ".join(rows) + "]}\n"


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, required=True, help="space dimension")
    common.add_argument("--c", type=float, default=1.0, help="speed")
    common.add_argument("--t", type=float, default=1.0, help="time horizon")
    common.add_argument("--family", choices=["X", "Y", "Z"], help="solvable model family")
    common.add_argument("--h", type=int)
    common.add_argument("--i", type=int, default=0)
    common.add_argument("--j", type=int, default=1)
    common.add_argument("--a", type=_floats, help="GD parameters a_1..a_n")
    common.add_argument("--b", type=_floats, help="GD parameters b_1..b_n")
    common.add_argument("--n", type=int, help="number of direction changes")
    common.add_argument("--lambda", dest="lam", type=float, help="rate of the fractional Poisson changes")
    common.add_argument("--count", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", "-o", help="output file (default: standard output)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default from GDFLIGHT_THREADS)")

    laws = argparse.ArgumentParser(add_help=False)
    laws.add_argument("--two-step", action="store_true", help="one change of direction, Beta(a1, b1) first step")
    laws.add_argument("--a1", type=float)
    laws.add_argument("--b1", type=float)
    laws.add_argument("--method", default="auto", help="two-step representation")
    laws.add_argument("--grid", default=None, help="min:max:points")

    parser = argparse.ArgumentParser(prog="gdflight", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gdflight {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", parents=[common], help="draw terminal positions")
    p = sub.add_parser("density", parents=[common, laws], help="position density on a grid of r")
    p.add_argument("--radial", action="store_true", help="density of |X| instead of X")
    p = sub.add_parser("cdf", parents=[common, laws], help="P(|X| < z) on a grid of z")
    p.add_argument("--form", choices=["beta", "binomial"], default="beta")
    sub.add_parser("cf", parents=[common, laws], help="characteristic function on a grid of |alpha|")
    p = sub.add_parser("moments", parents=[common], help="E|X|^p, analytic and Monte Carlo")
    p.add_argument("--p", type=_floats, default=(1.0, 2.0, 3.0))
    p = sub.add_parser("verify", parents=[common, laws], help="statistical checks against simulation")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--level", type=float, default=0.01)
    return parser


def _model(args) -> SolvableModel | None:
    if args.family is None:
        return None
    if args.h is None:
        raise DomainError("--family needs --h")
    if args.family == "X":
        return SolvableModel.first_type(args.h, args.i, args.j)
    if args.family == "Y":
        return SolvableModel.second_y(args.h, args.i)
    return SolvableModel.second_z(args.h, args.j)


def _raw_params(args) -> GDParams | None:
    if args.a is None and args.b is None:
        return None
    if args.a is None or args.b is None:
        raise DomainError("give both --a and --b")
    return GDParams(args.a, args.b, args.t)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise DomainError(f"{args.command} needs " + ", ".join("--" + ("lambda" if n == "lam" else n) for n in missing))


def _meta(args) -> dict:
    echo = {k: (list(v) if isinstance(v, tuple) else v) for k, v in vars(args).items() if k not in ("output", "threads")}
    return {"config": echo, "version": __version__}


# ---------------------------------------------------------------------------
# commands


def cmd_simulate(args, cfg) -> Table:
    _need(args, "count", "seed")
    model, params = _model(args), _raw_params(args)
    if args.lam is not None:
        if model is None:
            raise DomainError("unconditional simulation needs --family")
        batch = sample_batch(cfg, args.count, args.seed, lam=args.lam, model=model, workers=args.threads)
    else:
        _need(args, "n")
        batch = sample_batch(cfg, args.count, args.seed, n=args.n, model=model, params=params, workers=args.threads)
    cols = [f"x_{k + 1}" for k in range(cfg.d)] + ["r", "on_sphere", "n_changes"]
    radii = batch.radii
    rows = [
        [*batch.x[k], radii[k], bool(batch.on_sphere[k]), int(batch.n_changes[k])] for k in range(len(batch))
    ]
    return Table(cols, rows)


def _law_source(args, cfg):
    """Return (position density, radial law) for the selected model."""
    if args.two_step:
        _need(args, "a1", "b1")
        law = dens.law_two_step(cfg.d, args.a1, args.b1, cfg, args.method)
        return (lambda r: dens.density_two_step(cfg.d, args.a1, args.b1, cfg, r, args.method)), law
    if args.lam is not None:
        return (lambda r: dens.density_unconditional(cfg.d, args.lam, cfg, r)), dens.law_unconditional(cfg.d, args.lam, cfg)
    model = _model(args)
    if model is not None:
        _need(args, "n")
        law = dens.law_solvable(model, cfg.d, args.n, cfg)
        return law.position_density, law
    params = _raw_params(args)
    if params is not None:
        fn = lambda r: dens.density_general_numeric(cfg.d, params, cfg, r)  # noqa: E731
        return fn, dens.radial_law(fn, cfg.d, cfg.reach)
    raise DomainError("choose a law: --two-step, --lambda, --family or --a/--b")


def _grid(args, hi):
    return parse_grid(args.grid if args.grid is not None else f"0:{hi}:101")


def cmd_density(args, cfg) -> Table:
    fn, law = _law_source(args, cfg)
    r = _grid(args, cfg.reach)
    if np.any(r < 0):
        raise DomainError("radii must be >= 0")
    r_eval = np.minimum(r, cfg.reach * (1.0 - EDGE_CLAMP))
    values = law.density_at(r_eval) if args.radial else np.atleast_1d(fn(r_eval))
    return Table(["r", "radial_density" if args.radial else "density"], [[a, v] for a, v in zip(r, values)])


def cmd_cdf(args, cfg) -> Table:
    model = _model(args)
    z = _grid(args, cfg.reach)
    if np.any(z < 0) or np.any(z > cfg.reach):
        raise DomainError(f"z must lie in [0, {cfg.reach}]")
    if model is not None and not args.two_step and args.lam is None:
        _need(args, "n")
        if model.family.value == "X":
            f = lambda v: dens.cdf_solvable_first(cfg.d, args.n, model.j, cfg, v, args.form)  # noqa: E731
        else:
            f = lambda v: dens.cdf_solvable_second(model.h, cfg.d, args.n, cfg, v, args.form)  # noqa: E731
        values = [f(float(v)) for v in z]
    else:
        _, law = _law_source(args, cfg)
        # below c*t only the continuous part has accumulated
        values = [law.cdf_at(float(v)) if v < cfg.reach else 1.0 for v in z]
    return Table(["z", "cdf"], [[a, v] for a, v in zip(z, values)])


def cmd_cf(args, cfg) -> Table:
    model, params = _model(args), _raw_params(args)
    _need(args, "grid")
    alpha = parse_grid(args.grid)
    if model is not None:
        _need(args, "n")
        values = np.atleast_1d(dens.cf_conditional(model, cfg.d, args.n, alpha, cfg))
    elif params is not None:
        values = [dens.cf_general_numeric(cfg.d, params, float(q), cfg) for q in alpha]
    else:
        raise DomainError("cf needs --family or --a/--b")
    return Table(["alpha", "cf"], [[a, v] for a, v in zip(alpha, values)])


def cmd_moments(args, cfg) -> Table:
    _need(args, "lam")
    rows = []
    radii = None
    if args.count is not None:
        _need(args, "seed")
        model = _model(args) or SolvableModel.second_z(2, 1)
        radii = sample_batch(cfg, args.count, args.seed, lam=args.lam, model=model, workers=args.threads).radii
    for p in args.p:
        exact = dens.radial_moment(cfg.d, args.lam, cfg, p)
        if radii is None:
            rows.append([p, exact, None, None])
        else:
            v = radii**p
            rows.append([p, exact, v.mean(), v.std(ddof=1) / math.sqrt(len(v))])
    return Table(["p", "analytic", "monte_carlo", "std_err"], rows)


def _z_report(name, estimate, se, exact, n, level) -> TestReport:
    z = (estimate - exact) / se if se > 0 else (0.0 if estimate == exact else math.inf)
    return TestReport(name, z, 2.0 * stats.norm.sf(abs(z)), n, level)


def _suite_reports(args, cfg) -> list[TestReport]:
    _need(args, "seed")
    count = args.count or 100_000
    level = args.level
    draw = lambda **kw: sample_batch(cfg, count, args.seed, workers=args.threads, **kw)  # noqa: E731
    if args.suite == "solvable-first":
        _need(args, "n")
        ring = [(0, 0), (0, 1), (1, 1), (1, 0)]
        radii = {
            SolvableModel.first_type(h, i, args.j).label(): draw(n=args.n, model=SolvableModel.first_type(h, i, args.j)).radii
            for h, i in ring
        }
        labels = list(radii)
        return [
            pairwise_ks({labels[k]: radii[labels[k]], labels[(k + 1) % 4]: radii[labels[(k + 1) % 4]]}, level)[0]
            for k in range(4)
        ]
    if args.suite == "solvable-second":
        _need(args, "n", "h")
        models = [SolvableModel.second_y(args.h, 0), SolvableModel.second_y(args.h, 1), SolvableModel.second_z(args.h, args.j)]
        return pairwise_ks({m.label(): draw(n=args.n, model=m).radii for m in models}, level)
    if args.suite == "conditional":
        _need(args, "n")
        model = _model(args)
        if model is None:
            raise DomainError("the conditional suite needs --family")
        batch = draw(n=args.n, model=model)
        reports = [ks_test(batch, dens.law_solvable(model, cfg.d, args.n, cfg), level, name=f"ks {model.label()}")]
        reports.append(isotropy_check(batch, args.seed, level))
        freqs = np.array([0.5, 1.0, 2.0, 3.5, 5.0]) / cfg.reach
        exact = dens.cf_conditional(model, cfg.d, args.n, freqs, cfg)
        for q, (est, se), ex in zip(freqs, empirical_cf(batch, freqs), exact):
            reports.append(_z_report(f"cf |alpha|={q:.6g}", est, se, ex, len(batch), level))
        return reports
    if args.suite == "two-step":
        _need(args, "a1", "b1")
        batch = draw(n=1, params=GDParams((args.a1,), (args.b1,), cfg.t))
        return [ks_test(batch, dens.law_two_step(cfg.d, args.a1, args.b1, cfg), level, name="ks two-step")]
    if args.suite == "unconditional":
        _need(args, "lam")
        model = _model(args) or SolvableModel.second_z(2, 1)
        batch = draw(lam=args.lam, model=model)
        atom = dens.atom_unconditional(cfg.d, args.lam * cfg.t)
        freq = batch.on_sphere.mean()
        reports = [_z_report("atom", freq, math.sqrt(atom * (1 - atom) / count), atom, count, level)]
        reports.append(ks_test(batch, dens.law_unconditional(cfg.d, args.lam, cfg), level, name="ks continuous part"))
        radii = batch.radii
        for p in (1.0, 2.0, 3.0):
            v = radii**p
            exact = dens.radial_moment(cfg.d, args.lam, cfg, p)
            reports.append(_z_report(f"moment p={p:g}", v.mean(), v.std(ddof=1) / math.sqrt(count), exact, count, level))
        return reports
    params = _raw_params(args)
    if params is None:
        raise DomainError("the gd suite needs --a and --b")
    tau = sample_gd(params, RngStream(args.seed), count)
    return [chi2_gd(params, tau, level=level)]


def cmd_verify(args, cfg) -> Table:
    reports = _suite_reports(args, cfg)
    cols = ["test", "statistic", "p_value", "n_samples", "level", "verdict"]
    return Table(cols, [[r.as_row()[c] for c in cols] for r in reports], failed=not all(r.passed for r in reports))


COMMANDS = {
    "simulate": cmd_simulate,
    "density": cmd_density,
    "cdf": cmd_cdf,
    "cf": cmd_cf,
    "moments": cmd_moments,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_threads()
    try:
        cfg = FlightConfig(args.d, args.c, args.t)
        table = COMMANDS[args.command](args, cfg)
    except DomainError as exc:
        print(f"gdflight: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"gdflight: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(table, args.format, _meta(args))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if table.failed:
        print("gdflight: verification failed", file=sys.stderr)
        return EXIT_REJECTED
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
