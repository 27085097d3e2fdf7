"""Command-line interface.

Exit codes: 0 success, 1 error, 2 diagnostics report violations,
3 an analytic coverage check failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import BoundsPair, DistDidEstimate, cs_bounds, dist_did
from .checks import CLEAN_FIXTURES, fixture, sample_checks, step_checks
from .dgp.config import dump_config, load_config
from .dgp.models import example_presets, build
from .io import InputError, ingest, new_document, step_json, write_document, write_step_csv
from .simulation import analytic_coverage, run_replications
from .welfare import DEFAULT_TAILS, policy_table, swtt_report

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION, EXIT_COVERAGE = 0, 1, 2, 3


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _pair(text: str) -> tuple:
    vals = _floats(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError("expected u_lo,u_hi")
    return tuple(vals)


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _load(args):
    return ingest(args.input, delimiter=args.delimiter, panel=args.panel)


def _sample_meta(sample) -> dict:
    return {"counts": dict(sample.counts), "p_hat": sample.p, "q_hat": sample.q}


def bounds_section(b: BoundsPair) -> dict:
    sup = b.diagnostics["support"]
    return {
        "eval_points": b.eval_points,
        "raw_lb": b.raw_lb,
        "raw_ub": b.raw_ub,
        "lb_values": b.lb_values,
        "ub_values": b.ub_values,
        "lb": step_json(b.lb),
        "ub": step_json(b.ub),
        "diagnostics": {
            "crossings": b.diagnostics["crossings"],
            "incomplete": b.diagnostics["incomplete"],
            "support": sup.as_dict() if sup is not None else None,
        },
    }


def distdid_section(dd: DistDidEstimate) -> dict:
    return {"points": dd.points, "raw": dd.values, "rearranged": dd.rearranged_values,
            "violations": dd.monotone_violations}


def _violations(b: BoundsPair, dd: DistDidEstimate | None) -> bool:
    return b.has_violations or bool(dd is not None and dd.monotone_violations)


def _grid(args):
    return np.asarray(args.grid, dtype=float) if args.grid else None


def _export_csv(args, b: BoundsPair, dd: DistDidEstimate) -> None:
    if args.csv_dir:
        d = Path(args.csv_dir)
        write_step_csv(b.lb, d / "lb.csv")
        write_step_csv(b.ub, d / "ub.csv")
        write_step_csv(dd.rearranged, d / "distdid.csv")


def _emit(doc: dict, args) -> None:
    text = write_document(doc, args.out, args.command)
    if text is not None:
        sys.stdout.write(text)


def cmd_bounds(args) -> int:
    sample = _load(args)
    b = cs_bounds(sample, _grid(args))
    dd = dist_did(sample)
    doc = new_document("bounds", _config_echo(args))
    doc["metadata"].update(_sample_meta(sample))
    doc["bounds"] = bounds_section(b)
    doc["distdid"] = distdid_section(dd)
    _export_csv(args, b, dd)
    _emit(doc, args)
    return EXIT_VIOLATION if _violations(b, dd) else EXIT_OK


def cmd_welfare(args) -> int:
    sample = _load(args)
    b = cs_bounds(sample, _grid(args))
    dd = dist_did(sample)
    families = set(args.families)
    tails = args.tails if "tail" in families else []
    ranges = args.range if "range" in families else []
    dom = args.dominance_grid if "dominance" in families else None
    rep = swtt_report(sample.h1, b, dd, tails=tails, ranges=ranges, dominance_grid=dom,
                      sample=sample)
    rows = [r for r in rep.rows if r["scope"] != "overall" or r["quantity"] in families]
    doc = new_document("welfare", _config_echo(args))
    doc["metadata"].update(_sample_meta(sample))
    doc["bounds"] = {"diagnostics": bounds_section(b)["diagnostics"]}
    doc["welfare"] = {"rows": rows, "dominance": rep.dominance,
                      "distdid_violations": rep.distdid_violations}
    _emit(doc, args)
    return EXIT_VIOLATION if _violations(b, dd) else EXIT_OK


def cmd_params(args) -> int:
    sample = _load(args)
    b = cs_bounds(sample, _grid(args))
    dd = dist_did(sample)
    doc = new_document("params", _config_echo(args))
    doc["metadata"].update(_sample_meta(sample))
    doc["bounds"] = {"diagnostics": bounds_section(b)["diagnostics"]}
    doc["policy"] = policy_table(sample.h1, b, dd, args.mw, args.wbar, args.zero)
    _emit(doc, args)
    return EXIT_VIOLATION if _violations(b, dd) else EXIT_OK


def _specs(args) -> dict:
    if args.dgp:
        return {Path(args.dgp).stem: load_config(args.dgp)}
    presets = example_presets()
    names = list(presets) if args.preset == "all" else [args.preset]
    for n in names:
        if n not in presets:
            raise InputError(f"unknown preset {n!r}; choose from {sorted(presets)} or 'all'")
    return {n: presets[n] for n in names}


def cmd_simulate(args) -> int:
    specs = _specs(args)
    doc = new_document("simulate", _config_echo(args))
    doc["metadata"]["dgp_configs"] = {k: dump_config(s) for k, s in specs.items()}
    results, failed = {}, False
    for name, spec in specs.items():
        if args.analytic:
            res = analytic_coverage(build(spec))
            failed |= not res["covered"]
        else:
            reps = run_replications(spec, args.n, args.seed, args.replications,
                                    alpha=args.alpha, workers=args.workers)
            res = {"replications": reps,
                   "within_band": sum(r["within_band"] for r in reps),
                   "total": len(reps)}
        results[name] = res
    doc["simulate"] = {"mode": "analytic" if args.analytic else "sampled", "results": results}
    _emit(doc, args)
    return EXIT_COVERAGE if failed else EXIT_OK


def _read_steps(path) -> dict:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if "points" in data:
        return {"steps": data}
    if "steps" in data and isinstance(data["steps"], dict):
        return data["steps"]
    raise InputError(f"{path}: expected an object with points/cumprobs or a 'steps' map")


def cmd_validate(args) -> int:
    groups = {}
    if args.steps:
        for name, d in _read_steps(args.steps).items():
            groups[name] = step_checks(d.get("points", []), d.get("cumprobs", []))
    if args.input:
        groups[Path(args.input).name] = sample_checks(_load(args))
    if args.fixture or not (args.steps or args.input):
        names = args.fixture or list(CLEAN_FIXTURES)
        for name in names:
            groups[f"fixture:{name}"] = sample_checks(fixture(name))
    lines, all_ok = [], True
    for group, checks in groups.items():
        for c in checks:
            all_ok &= c.passed
            lines.append(f"{'PASS' if c.passed else 'FAIL'}  {group:<24} {c.name:<34} {c.detail}".rstrip())
    sys.stdout.write("\n".join(lines) + "\n")
    if args.out:
        doc = new_document("validate", _config_echo(args))
        doc["validate"] = {g: [c.as_dict() for c in cs] for g, cs in groups.items()}
        write_document(doc, args.out, "validate")
    return EXIT_OK if all_ok else EXIT_VIOLATION


def _data_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--input", required=required, help="CSV with columns y,d,t and optional w")
    p.add_argument("--delimiter", default=",", help="field delimiter (default ',')")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--panel", action="store_true", help="balanced panel: p from t=0 rows")
    mode.add_argument("--repeated", dest="panel", action="store_false",
                      help="repeated cross-sections: p pooled over periods (default)")


def _out_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="JSON output path (default: $CSBOUNDS_OUTPUT_DIR/<command>.json or stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csbounds", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="counterfactual CDF bounds and DistDiD")
    _data_flags(p)
    p.add_argument("--grid", type=_floats, help="comma-separated evaluation points (default: support of g1)")
    p.add_argument("--csv-dir", help="also write lb.csv, ub.csv, distdid.csv here")
    _out_flag(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("welfare", help="ATT and Gini welfare effects")
    _data_flags(p)
    p.add_argument("--grid", type=_floats)
    p.add_argument("--tails", type=_floats, default=list(DEFAULT_TAILS),
                   help="lower-tail cutoffs u (default 0.01,0.025,0.05,0.10,0.25,0.50)")
    p.add_argument("--range", type=_pair, action="append", default=[],
                   help="quantile range u_lo,u_hi; repeatable")
    p.add_argument("--families", nargs="+", default=["mean", "gini", "tail", "range", "dominance"],
                   choices=["mean", "gini", "tail", "range", "dominance"])
    p.add_argument("--dominance-grid", type=_floats,
                   default=[round(0.05 * k, 2) for k in range(1, 21)])
    _out_flag(p)
    p.set_defaults(func=cmd_welfare)

    p = sub.add_parser("params", help="employment share changes around a minimum wage")
    _data_flags(p)
    p.add_argument("--grid", type=_floats)
    p.add_argument("--mw", type=float, required=True, help="new minimum wage")
    p.add_argument("--wbar", type=float, required=True, help="upper wage cutoff")
    p.add_argument("--zero", type=float, default=0.0, help="unemployment wage value (default 0)")
    _out_flag(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("simulate", help="coverage runs on analytic DGPs")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--dgp", help="key=value DGP config file")
    src.add_argument("--preset", default="all", help="named example DGP, or 'all' (default)")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--analytic", action="store_true", help="exact cells, no sampling")
    how.add_argument("--n", type=int, help="draws per cell")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replications", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.001, help="DKW band level")
    _out_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="run invariant checks and print a table")
    _data_flags(p, required=False)
    p.add_argument("--steps", help="JSON with raw points/cumprobs arrays to check")
    p.add_argument("--fixture", action="append", help="built-in fixture name; repeatable")
    _out_flag(p)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be positive")
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"csbounds: error: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
