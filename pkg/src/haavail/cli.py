"""Command-line front end.

Subcommands: ``solve``, ``sweep``, ``simulate``, ``validate``. Parameters
resolve as baseline defaults, then ``--params`` JSON file, then flags.

Exit codes: 0 ok, 1 input error, 2 solver error, 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .metrics import (
    DEFAULT_GRID_POINTS,
    DEFAULT_GRID_RANGE,
    SWEEP_FIXED,
    availability,
    default_ratio_grid,
    downtime_sweep,
    solve,
    validate_all,
)
from .model import (
    BASELINE,
    JSON_KEYS,
    STATE_DESCRIPTIONS,
    STATES,
    ModelParams,
    ParameterError,
    is_down,
    validate_params,
)
from .montecarlo import MODES, PERIODIC_CLOCK, RNG_ALGORITHM, SMP_SEMANTICS, SimConfig, simulate
from .numerics import ConvergenceError, SingularMatrixError
from .smp import smp_state_probabilities

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2
EXIT_VALIDATION = 3

SWEEP_COLUMNS = ["ratio", "lambda", "lambda_s", "downtime_ctmc_min_yr",
                 "downtime_smp_min_yr", "difference_min_yr"]

# flag dest -> JSON key
_PARAM_FLAGS = {
    "lam": ("--lambda", "lambda"),
    "lam_s": ("--lambda-s", "lambda_s"),
    "mu": ("--mu", "mu"),
    "beta": ("--beta", "beta"),
    "c": ("--c", "c"),
    "c_s": ("--cs", "c_s"),
    "T": ("--T", "T"),
}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for solver errors here
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return f"{x:.17g}"


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("model parameters (rates per hour, T in hours)")
    g.add_argument("--params", metavar="FILE", help="JSON file with keys " + ", ".join(JSON_KEYS))
    for dest, (flag, key) in _PARAM_FLAGS.items():
        g.add_argument(flag, dest=dest, type=float, default=None, help=f"override '{key}'")


def resolve_params(args: argparse.Namespace) -> ModelParams:
    values = BASELINE.to_json_dict()
    if getattr(args, "params", None):
        path = Path(args.params)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise InputError(f"{path}: expected a JSON object")
        values = ModelParams.from_json_dict(data).to_json_dict()
    for dest, (_, key) in _PARAM_FLAGS.items():
        v = getattr(args, dest, None)
        if v is not None:
            values[key] = v
    return validate_params(ModelParams.from_json_dict(values))


def _manifest(command: str, params: ModelParams | None, output: str | None,
              seed: int | None = None, extra: dict | None = None) -> list[tuple[str, str]]:
    stamp = os.environ.get("SOURCE_DATE_EPOCH", "unset")
    items = [("command", command), ("tool", f"haavail {__version__}")]
    if params is not None:
        items += [(k, fmt(v)) for k, v in params.to_json_dict().items()]
    if seed is not None:
        items += [("seed", str(seed)), ("rng", RNG_ALGORITHM)]
    for k, v in (extra or {}).items():
        items.append((k, v))
    items += [("timestamp", stamp), ("output", output or "-")]
    return items


def write_csv(path: str, manifest, header: Sequence[str], rows) -> None:
    buf = io.StringIO(newline="")
    for k, v in manifest:
        buf.write(f"# {k}={v}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, float) else x for x in row])
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def _param_line(p: ModelParams) -> str:
    return " ".join(f"{k}={v:g}" for k, v in p.to_json_dict().items())


# -- solve -------------------------------------------------------------------

def cmd_solve(args) -> int:
    p = resolve_params(args)
    rep = solve(p, args.model, closed_form=args.closed_form)
    ss = rep.state_probs
    out = [f"model: {rep.model} ({ss.source.value})", f"parameters: {_param_line(p)}", "",
           f"{'state':<6}{'status':<8}{'probability':<26}description"]
    for s in STATES:
        out.append(f"{s:<6}{'down' if is_down(s) else 'up':<8}{fmt(ss.prob(s)):<26}"
                   f"{STATE_DESCRIPTIONS[s]}")
    out += ["", f"sum of probabilities: {fmt(ss.total)}",
            f"availability: {fmt(rep.availability)}",
            f"downtime (minutes/year): {fmt(rep.downtime_min_per_year)}"]
    print("\n".join(out))
    if args.output:
        rows = [(f"pi_{s}", ss.prob(s)) for s in STATES]
        rows += [("availability", rep.availability),
                 ("downtime_min_yr", rep.downtime_min_per_year)]
        write_csv(args.output,
                  _manifest(f"solve {args.model}", p, args.output,
                            extra={"source": ss.source.value}),
                  ["quantity", "value"], rows)
    return EXIT_OK


# -- sweep -------------------------------------------------------------------

def _ratio_grid(args) -> list[float]:
    if args.ratios:
        try:
            grid = [float(x) for x in args.ratios.split(",") if x.strip()]
        except ValueError as exc:
            raise InputError(f"invalid --ratios: {exc}") from exc
    else:
        if args.points < 1:
            raise InputError("--points must be >= 1")
        if not 0 < args.min_ratio < args.max_ratio and args.points > 1:
            raise InputError("need 0 < --min-ratio < --max-ratio")
        grid = default_ratio_grid(args.points, args.min_ratio, args.max_ratio)
    if not grid or any(not r > 0 for r in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
        raise InputError("ratio grid must be positive and strictly increasing")
    return grid


def cmd_sweep(args) -> int:
    grid = _ratio_grid(args)
    if not args.T > 0:
        raise ParameterError("T must be positive")
    fixed = {"c": args.c, "c_s": args.c_s, "mu": args.mu, "beta": args.beta}
    result = downtime_sweep(grid, T=args.T, fixed=fixed)
    rows = [(r.ratio, r.params.lambda_active, r.params.lambda_standby,
             r.downtime_ctmc, r.downtime_smp, r.difference) for r in result.rows]
    if args.output:
        extra = {k: fmt(v) for k, v in fixed.items()}
        extra.update(T=fmt(args.T), lambda_s="lambda/4", points=str(len(grid)))
        write_csv(args.output, _manifest("sweep", None, args.output, extra=extra),
                  SWEEP_COLUMNS, rows)
        print(f"wrote {len(rows)} rows to {args.output}")
    else:
        widths = [14, 14, 14, 22, 22, 22]
        print("".join(h.ljust(w) for h, w in zip(SWEEP_COLUMNS, widths)))
        for row in rows:
            print("".join(f"{x:<{w}.10g}" for x, w in zip(row, widths)))
    return EXIT_OK


# -- simulate ----------------------------------------------------------------

def _mode(value: str) -> str:
    aliases = {"smp": SMP_SEMANTICS, "periodic": PERIODIC_CLOCK}
    mode = aliases.get(value, value)
    if mode not in MODES:
        raise argparse.ArgumentTypeError(f"mode must be smp or periodic, got {value!r}")
    return mode


def _sim_config(args, p: ModelParams) -> SimConfig:
    try:
        return SimConfig(p, horizon=args.horizon, seed=args.seed, mode=args.mode,
                         replications=args.reps, max_transitions=args.max_transitions)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_simulate(args) -> int:
    p = resolve_params(args)
    cfg = _sim_config(args, p)
    res = simulate(cfg)
    smp = smp_state_probabilities(p)
    a_smp = availability(smp)
    gap = res.availability - a_smp
    lo, hi = res.ci
    out = [f"mode: {res.mode}  seed: {res.seed}  horizon/replication: {res.horizon:g} h  "
           f"replications: {res.replications}",
           f"rng: {res.rng_algorithm}",
           f"parameters: {_param_line(p)}",
           f"transitions: {int(res.transitions.sum())}", "",
           f"{'state':<6}{'occupancy':<26}{'ci_half_width':<26}smp_probability"]
    for s in STATES:
        out.append(f"{s:<6}{fmt(res.occupancy[s - 1]):<26}"
                   f"{fmt(float(res.occupancy_half_width[s - 1])):<26}{fmt(smp.prob(s))}")
    out += ["", f"availability estimate: {fmt(res.availability)} +/- {fmt(res.ci_half_width)}",
            f"95% CI: [{fmt(lo)}, {fmt(hi)}]",
            f"analytic smp availability: {fmt(a_smp)} "
            f"({'inside' if res.contains(a_smp) else 'outside'} CI)"]
    if res.mode == PERIODIC_CLOCK:
        out.append(f"periodic - smp availability gap: {fmt(gap)}")
    print("\n".join(out))
    if args.output:
        rows = [(f"occupancy_{s}", float(res.occupancy[s - 1]),
                 float(res.occupancy_half_width[s - 1]), smp.prob(s)) for s in STATES]
        rows.append(("availability", res.availability, res.ci_half_width, a_smp))
        rows.append(("availability_minus_smp", gap, res.ci_half_width, 0.0))
        extra = {"mode": res.mode, "horizon": fmt(res.horizon),
                 "replications": str(res.replications)}
        write_csv(args.output, _manifest("simulate", p, args.output, seed=res.seed, extra=extra),
                  ["quantity", "estimate", "ci_half_width", "analytic_smp"], rows)
    return EXIT_OK


# -- validate ----------------------------------------------------------------

def cmd_validate(args) -> int:
    p = resolve_params(args)
    if args.horizon <= 0 or args.reps < 1:
        raise InputError("need --horizon > 0 and --reps >= 1")
    report = validate_all(p, seed=args.seed, horizon=args.horizon, replications=args.reps)
    out = [f"parameters: {_param_line(p)}", ""]
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        note = f"  {c.note}" if c.note else ""
        out.append(f"[{status}] {c.name}: {c.value:.6g} (tolerance {c.tolerance:.6g}){note}")
    out += [f"note: {n}" for n in report.notes]
    out.append("")
    out.append(f"{'source':<14}" + "".join(f"{'pi_' + str(s):<24}" for s in STATES) + "availability")
    for src, ss in report.sources.items():
        out.append(f"{src.value:<14}" + "".join(f"{fmt(x):<24}" for x in ss.probs)
                   + fmt(availability(ss)))
    out.append("")
    out.append("validation " + ("passed" if report.passed else "FAILED"))
    print("\n".join(out))
    if args.output:
        rows = [(c.name, c.value, c.tolerance, "true" if c.passed else "false")
                for c in report.checks]
        write_csv(args.output, _manifest("validate", p, args.output, seed=args.seed),
                  ["check", "value", "tolerance", "passed"], rows)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="haavail", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"haavail {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve", help="steady-state availability of one model")
    sp.add_argument("model", choices=("ctmc", "smp"))
    sp.add_argument("--closed-form", action="store_true", help="use the closed-form solution")
    _add_param_flags(sp)
    sp.add_argument("--output", help="write results as CSV")
    sp.set_defaults(func=cmd_solve)

    sw = sub.add_parser("sweep", help="downtime of both models over mu/lambda ratios")
    sw.add_argument("--ratios", help="comma-separated mu/lambda values (overrides the grid)")
    sw.add_argument("--points", type=int, default=DEFAULT_GRID_POINTS)
    sw.add_argument("--min-ratio", type=float, default=DEFAULT_GRID_RANGE[0])
    sw.add_argument("--max-ratio", type=float, default=DEFAULT_GRID_RANGE[1])
    sw.add_argument("--T", type=float, default=BASELINE.T)
    sw.add_argument("--c", type=float, default=SWEEP_FIXED["c"])
    sw.add_argument("--cs", dest="c_s", type=float, default=SWEEP_FIXED["c_s"])
    sw.add_argument("--mu", type=float, default=SWEEP_FIXED["mu"])
    sw.add_argument("--beta", type=float, default=SWEEP_FIXED["beta"])
    sw.add_argument("--output", help="write CSV here instead of printing a table")
    sw.set_defaults(func=cmd_sweep)

    sm = sub.add_parser("simulate", help="Monte Carlo estimate of availability")
    _add_param_flags(sm)
    sm.add_argument("--seed", type=int, default=0)
    sm.add_argument("--horizon", type=float, default=1e6, help="hours per replication")
    sm.add_argument("--reps", type=int, default=10)
    sm.add_argument("--mode", type=_mode, default=SMP_SEMANTICS, help="smp or periodic")
    sm.add_argument("--max-transitions", type=int, default=None,
                    help="transition budget per replication")
    sm.add_argument("--output")
    sm.set_defaults(func=cmd_simulate)

    va = sub.add_parser("validate", help="cross-check closed forms, numerics and simulation")
    _add_param_flags(va)
    va.add_argument("--seed", type=int, default=0)
    va.add_argument("--horizon", type=float, default=1e6, help="hours per replication")
    va.add_argument("--reps", type=int, default=10)
    va.add_argument("--output")
    va.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SingularMatrixError, ConvergenceError, ArithmeticError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
