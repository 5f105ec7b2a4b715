"""Command-line front end.

Subcommands:
  bound      recursive and closed-form age bounds for one (n, f)
  simulate   Monte-Carlo age estimate for one configuration
  exact      exact subset-age recursion for a small ring
  animal     exhaustive minimal-incoming-edge check against the formula
  threshold  domination threshold for the envelope's rational term
  sweep      run a full experiment grid and write CSV or JSON

All results go to stdout as JSON; failures print a machine-readable error
record to stderr and exit nonzero.
"""

import argparse
import json
import math
import sys

from .bounds import (
    DominationCriterion,
    Rates,
    closed_form_bound,
    domination_threshold,
    recursive_bound,
    scaling_exponent,
)
from .exact import solve_exact
from .experiments import ExperimentSpec, run_experiment
from .ring import (
    NeighborFunction,
    RingTopology,
    brute_force_min_incoming,
    eval_f,
    min_incoming_edges_formula,
    EXHAUSTIVE_CAP,
)
from .sim import SimConfig, simulate

_CLI_KIND = {
    "fig4": "fig4",
    "table1": "table1",
    "bound-compare": "bound_compare",
    "oracle-matrix": "oracle_matrix",
    "animal": "animal",
}


def _add_rates(p: argparse.ArgumentParser):
    p.add_argument("--lambda-e", dest="lambda_e", type=float, default=1.0,
                   help="source self-update rate (default 1)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0,
                   help="total dissemination rate per node (default 1)")


def _add_neighbor(p: argparse.ArgumentParser):
    p.add_argument("--f-kind", choices=("const", "power", "full", "nlog2", "explicit"),
                   default="power", help="connectivity radius rule (default power)")
    p.add_argument("--d", type=int, help="radius for --f-kind const")
    p.add_argument("--alpha", type=float, help="exponent for --f-kind power")
    p.add_argument("--f-value", type=int, help="radius for --f-kind explicit")


def _neighbor_from_args(args) -> NeighborFunction:
    if args.f_kind == "const":
        if args.d is None:
            raise ValueError("--f-kind const requires --d")
        return NeighborFunction.constant(args.d)
    if args.f_kind == "power":
        if args.alpha is None:
            raise ValueError("--f-kind power requires --alpha")
        return NeighborFunction.power(args.alpha)
    if args.f_kind == "full":
        return NeighborFunction.fully_connected()
    if args.f_kind == "nlog2":
        return NeighborFunction.n_over_log_sq()
    if args.f_value is None:
        raise ValueError("--f-kind explicit requires --f-value")
    return NeighborFunction.explicit(args.f_value)


def _parse_log_base(text: str) -> float:
    if text in ("e", "ln"):
        return math.e
    base = float(text)
    return base


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok)


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringage",
        description="Version age of gossip on generalized rings: "
                    "simulation, exact recursion, and bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="recursive and closed-form bounds for one ring")
    p.add_argument("--n", type=int, required=True)
    _add_neighbor(p)
    _add_rates(p)
    p.add_argument("--emit-vector", action="store_true",
                   help="include the full u vector in the output")

    p = sub.add_parser("simulate", help="Monte-Carlo age estimate")
    p.add_argument("--n", type=int, required=True)
    _add_neighbor(p)
    _add_rates(p)
    p.add_argument("--horizon", type=float, default=2000.0)
    p.add_argument("--warmup", type=float, default=0.2)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--batches", type=int, default=20)

    p = sub.add_parser("exact", help="exact subset-age recursion (small n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    _add_rates(p)
    p.add_argument("--full", action="store_true",
                   help="emit the whole subset table, not just v1")

    p = sub.add_parser("animal", help="exhaustive minimal-incoming-edge check")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--j", type=int, help="one subset size")
    g.add_argument("--all", action="store_true", help="every subset size 1..n")
    p.add_argument("--cap", type=int, default=EXHAUSTIVE_CAP)
    p.add_argument("--include-disconnected", action="store_true")

    p = sub.add_parser("threshold", help="domination threshold of the envelope terms")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--factor", type=float, default=10.0)
    p.add_argument("--log-base", type=_parse_log_base, default=math.e,
                   help="'e' or a numeric base (default e)")
    p.add_argument("--use-coefficients", action="store_true",
                   help="compare the envelope's actual terms, coefficients included")

    p = sub.add_parser("sweep", help="run a full experiment grid")
    p.add_argument("--experiment", choices=sorted(_CLI_KIND), required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=1)
    _add_rates(p)
    p.add_argument("--n-list", type=_int_list, help="comma-separated n override")
    p.add_argument("--alpha-list", type=_float_list, help="comma-separated alpha override")
    p.add_argument("--horizon", type=float)
    p.add_argument("--warmup", type=float)
    p.add_argument("--reps", type=int)
    p.add_argument("--batches", type=int)
    p.add_argument("--factor", type=float, default=10.0)
    p.add_argument("--log-base", type=_parse_log_base, default=math.e)
    p.add_argument("--use-coefficients", action="store_true")
    return parser


def _cmd_bound(args) -> dict:
    rates = Rates(args.lambda_e, args.lam)
    f = eval_f(_neighbor_from_args(args), args.n)
    report = recursive_bound(args.n, f, rates,
                             keep_vector=True if args.emit_vector else None)
    out = {
        "n": report.n,
        "f": report.f,
        "ratio": report.ratio,
        "u1": report.u1,
        "x_sum": report.x_sum,
        "y_sum": report.y_sum,
        "z_sum": report.z_sum,
        "closed_form": report.closed_form,
    }
    if args.emit_vector:
        out["u"] = [float(v) for v in report.u]
    return out


def _cmd_simulate(args) -> dict:
    cfg = SimConfig(
        n=args.n,
        neighbor=_neighbor_from_args(args),
        rates=Rates(args.lambda_e, args.lam),
        horizon=args.horizon,
        warmup_fraction=args.warmup,
        replications=args.reps,
        seed=args.seed,
        batches=args.batches,
    )
    est = simulate(cfg)
    return {
        "mean": est.mean,
        "ci_halfwidth": est.ci_halfwidth,
        "stderr": est.stderr,
        "effective_horizon": est.effective_horizon,
        "events_processed": est.events_processed,
        "config": est.config,
    }


def _cmd_exact(args) -> dict:
    sol = solve_exact(args.n, args.f, Rates(args.lambda_e, args.lam))
    out = {"n": sol.n, "f": sol.f, "v1": sol.v1}
    if args.full:
        out["table"] = sol.as_dict()
    return out


def _cmd_animal(args) -> dict:
    topo = RingTopology(args.n, args.f)
    sizes = range(1, args.n + 1) if args.all else [args.j]
    rows = []
    for j in sizes:
        brute, witness = brute_force_min_incoming(
            topo, j, cap=args.cap, include_disconnected=args.include_disconnected)
        formula = min_incoming_edges_formula(args.n, args.f, j)
        rows.append({
            "j": j,
            "brute_min": brute,
            "formula_min": formula,
            "equal": brute == formula,
            "witness": sorted(witness),
            "contiguous_attains": topo.incoming_edge_count(range(j)) == brute,
        })
    return {"n": args.n, "f": args.f, "rows": rows}


def _cmd_threshold(args) -> dict:
    criterion = DominationCriterion(
        factor=args.factor,
        log_base=args.log_base,
        use_coefficients=args.use_coefficients,
    )
    return {
        "alpha": args.alpha,
        "threshold": domination_threshold(args.alpha, criterion),
        "scaling_exponent": scaling_exponent(args.alpha),
        "criterion": {
            "factor": criterion.factor,
            "log_base": criterion.log_base,
            "use_coefficients": criterion.use_coefficients,
        },
    }


def _cmd_sweep(args) -> dict:
    spec = ExperimentSpec(
        kind=_CLI_KIND[args.experiment],
        out=args.out,
        fmt=args.format,
        seed=args.seed,
        rates=Rates(args.lambda_e, args.lam),
        n_list=args.n_list,
        alpha_list=args.alpha_list,
        horizon=args.horizon,
        warmup=args.warmup,
        replications=args.reps,
        batches=args.batches,
        factor=args.factor,
        log_base=args.log_base,
        use_coefficients=args.use_coefficients,
    )
    rows = run_experiment(spec)
    return {"experiment": spec.kind, "rows": len(rows), "out": args.out,
            "format": args.format}


_COMMANDS = {
    "bound": _cmd_bound,
    "simulate": _cmd_simulate,
    "exact": _cmd_exact,
    "animal": _cmd_animal,
    "threshold": _cmd_threshold,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = _COMMANDS[args.command](args)
    except Exception as exc:  # noqa: BLE001 - the CLI contract is a JSON error record
        record = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(record), file=sys.stderr)
        return 1
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
