"""Command-line front end: ``spacert <verb> ...``.

Structured output is JSON on stdout unless ``--csv`` is given. The exit
code is nonzero when a claim fails or an input is rejected.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import claims, gaussian, io, maps, separability, spa


def _parse_values(text: str) -> list:
    """``"2,3,4"`` or ``"0.1:0.5:0.1"`` (inclusive end)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("range step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + i * step, 12) for i in range(max(count, 0))]
    if not text:
        return []
    out = []
    for item in text.split(","):
        item = item.strip()
        out.append(int(item) if item.lstrip("-").isdigit() else float(item))
    return out


def parse_grid(items: list[str] | None) -> dict[str, list]:
    grid = {}
    for item in items or []:
        if "=" not in item:
            raise ValueError(f"grid entries look like name=values, got {item!r}")
        name, values = item.split("=", 1)
        grid[name.strip()] = _parse_values(values.strip())
    return grid


def _emit(doc, as_csv: bool = False) -> None:
    if as_csv:
        rows = doc if isinstance(doc, list) else [doc]
        keys = sorted({k for row in rows for k in row})
        writer = csv.DictWriter(sys.stdout, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in row.items()})
    else:
        print(json.dumps(doc, sort_keys=True, indent=2, default=claims._json_default))


def _cmd_claim(args) -> int:
    if args.claim_cmd == "list":
        _emit(claims.list_claims(), args.csv)
        return 0
    ids = list(claims.REGISTRY) if args.id == "all" else [args.id]
    records = []
    for cid in ids:
        try:
            rec = claims.run_claim(cid, seed=args.seed)
        except KeyError as exc:
            print(f"error: {exc.args[0]}", file=sys.stderr)
            return 2
        records.append(rec)
    docs = [json.loads(r.to_json(timing=args.timing)) for r in records]
    if args.csv:
        _emit([{"id": d["id"], "passed": d["passed"], "measured": d["measured"], "expected": d["expected"],
                "tolerance": d["tolerance"]} for d in docs], True)
    else:
        _emit(docs[0] if len(docs) == 1 else docs)
    return 0 if all(r.passed for r in records) else 1


def _cmd_sweep(args) -> int:
    grid = parse_grid(args.grid)
    header, rows = claims.sweep_rows(args.target, grid)
    if args.out:
        claims.sweep(args.target, grid, args.out)
    table = [dict(zip(header, row)) for row in rows]
    if args.csv:
        print(claims.sweep(args.target, grid), end="")
    else:
        _emit({"header": header, "rows": table})
    return 0


def _cmd_spa(args) -> int:
    lmap = maps.parse_map_spec(args.map_spec)
    if args.channel:
        res = spa.spa_with_channel(lmap, maps.parse_map_spec(args.channel))
    else:
        res = spa.spa_standard(lmap)
    certificate = None
    name, _, params = args.map_spec.partition(":")
    if name.strip() in ("tau", "tau_normalized") and not args.channel:
        kv = dict(item.split("=", 1) for item in params.split(",") if "=" in item)
        certificate = separability.tau_spa_certificate(int(kv["m"]), int(kv["k"])).certificate
    doc = io.spa_result_to_json(res)
    doc["eb_verdict"] = io.verdict_to_json(separability.eb_verdict(res.approx, certificate))
    doc["map"] = lmap.label
    if args.csv:
        _emit({k: doc[k] for k in ("map", "p_star", "lambda_min", "method")} | {"status": doc["eb_verdict"]["status"]},
              True)
    else:
        _emit(doc)
    return 0


def _cmd_gaussian(args) -> int:
    rows = []
    for n in range(1, args.modes + 1) if args.all_modes else [args.modes]:
        suite = gaussian.transposition_suite(n)
        ch = gaussian.transposition_channel(n, suite.p_star)
        rows.append({"n": n, "p_star": suite.p_star, "eb_certified_at_p_star": suite.eb_certified,
                     "channel": io.channel_to_json(ch)})
    if args.csv:
        _emit([{k: r[k] for k in ("n", "p_star", "eb_certified_at_p_star")} for r in rows], True)
    else:
        _emit(rows[0] if len(rows) == 1 else rows)
    return 0 if all(r["eb_certified_at_p_star"] for r in rows) else 1


def _cmd_verdict(args) -> int:
    rho = io.read_matrix(args.state)
    dims = tuple(int(x) for x in args.dims.split(",")) if args.dims else None
    verdict = separability.state_verdict(rho, dims)
    _emit(io.verdict_to_json(verdict), args.csv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spacert", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="emit CSV instead of JSON")
    common.add_argument("--seed", type=int, default=claims.DEFAULT_SEED, help="seed for sampled certificates")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p_claim = sub.add_parser("claim", help="run or list registered claims")
    claim_sub = p_claim.add_subparsers(dest="claim_cmd", required=True)
    p_run = claim_sub.add_parser("run", parents=[common], help="run a claim by id ('all' for every claim)")
    p_run.add_argument("id")
    p_run.add_argument("--timing", action="store_true", help="include runtime_ms in the record")
    claim_sub.add_parser("list", parents=[common], help="list claim ids")

    p_sweep = sub.add_parser("sweep", parents=[common], help="closed form vs numerics over a grid")
    p_sweep.add_argument("target", help="pTr, pRed, pBH or wmk (or transposition, reduction, breuer_hall, tau)")
    p_sweep.add_argument("--grid", action="append", help="name=v1,v2,... or name=start:stop:step; repeatable")
    p_sweep.add_argument("--out", help="write the CSV table to this path")

    p_spa = sub.add_parser("spa", parents=[common], help="approximate a catalog map")
    p_spa.add_argument("map_spec", help='e.g. "tau:m=3,k=1" or "breuer_hall:m=4,U=default"')
    p_spa.add_argument("--channel", help='mixing channel spec, e.g. "werner_channel:m=4,mu=0.25"')

    p_gauss = sub.add_parser("gaussian", parents=[common], help="Gaussian transposition results")
    p_gauss.add_argument("which", choices=["transposition"])
    p_gauss.add_argument("--modes", type=int, default=1)
    p_gauss.add_argument("--all-modes", action="store_true", help="report every mode count from 1 to --modes")

    p_verdict = sub.add_parser("verdict", parents=[common], help="separability verdict for a state in matrix JSON")
    p_verdict.add_argument("state")
    p_verdict.add_argument("--dims", help="m,n")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"claim": _cmd_claim, "sweep": _cmd_sweep, "spa": _cmd_spa, "gaussian": _cmd_gaussian,
                "verdict": _cmd_verdict}
    try:
        return handlers[args.cmd](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
