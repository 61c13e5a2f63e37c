"""Command-line front end.

Subcommands:

  process   run the colony-merging process on a periodic configuration and
            write culture snapshot / trace / render artifacts
  verify    run a named verification suite and write a JSON report
  tools     exchange / periodic / lef utilities with JSON in and out

Exit codes: 0 success (process: stable), 1 usage or input error, 2 process
diverged, 3 process budget exhausted, 4 failed verification checks.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys

from . import __version__
from .cultures import run_process, verify_stable
from .exchange import exchange_classes
from .periodic import lef_embed, totally_periodic_2d
from .render import ascii_render, svg_render
from .subshifts import (
    Pattern,
    PeriodicConfig,
    SpecError,
    BudgetError,
    parse_spec,
)
from .verify import SUITES, demo_config, run_suite

log = logging.getLogger("shiftlab")


def _setup_logging():
    level = os.environ.get("SHIFTLAB_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR), format="%(name)s %(levelname)s %(message)s")


def _dump(path, data):
    if isinstance(data, str):
        payload = data
    else:
        payload = json.dumps(data, sort_keys=True, indent=1) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def _load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def cmd_process(args):
    if args.demo:
        spec, config = demo_config()
        inputs = {"demo": args.demo}
    else:
        if not args.spec or not args.config:
            print("process needs --spec and --config (or --demo)", file=sys.stderr)
            return 1
        spec = parse_spec(_load_json(args.spec))
        config = PeriodicConfig.from_json(_load_json(args.config))
        inputs = {"spec": args.spec, "config": args.config}
    budget = "auto" if args.steps == "auto" else int(args.steps)
    result = run_process(spec, config, budget=budget)
    digests = {}
    if args.snapshot:
        digests["snapshot"] = _dump(args.snapshot, result.culture.to_json())
    if args.trace:
        digests["trace"] = _dump(args.trace, result.trace_json())
    if args.render:
        if args.render.endswith(".svg"):
            art = svg_render(result.culture, config, width=args.render_width, height=args.render_height, spec=spec)
        else:
            art = ascii_render(result.culture, config, width=args.render_width, height=args.render_height, spec=spec)
        digests["render"] = _dump(args.render, art)
    if result.status == "stable":
        report = verify_stable(result.culture, config)
        log.info("stable culture; brain lattice %s", report.brain_lattice.basis)
    if args.manifest:
        manifest = {
            "command": "process",
            "version": __version__,
            "inputs": inputs,
            "parameters": {"steps": args.steps, "render_width": args.render_width, "render_height": args.render_height},
            "seed": None,
            "status": result.status,
            "outputs": digests,
        }
        _dump(args.manifest, manifest)
    print(f"status: {result.status} (steps: {result.steps}, colonies: {result.culture.colony_count()})")
    return {"stable": 0, "diverged": 2, "budget": 3}[result.status]


def cmd_verify(args):
    try:
        checks = run_suite(args.suite)
    except KeyError as e:
        print(str(e), file=sys.stderr)
        return 1
    failed = [c for c in checks if not c["ok"]]
    report = {
        "suite": args.suite,
        "version": __version__,
        "checks": checks,
        "passed": len(checks) - len(failed),
        "failed": len(failed),
    }
    if args.report:
        _dump(args.report, report)
    for c in checks:
        print(("PASS" if c["ok"] else "FAIL"), c["suite"] + ":" + c["name"], "-", c["claim"])
    print(f"{report['passed']}/{len(checks)} checks passed")
    return 0 if not failed else 4


def cmd_tools(args):
    if args.tool == "exchange":
        spec = parse_spec(_load_json(args.spec))
        domain = tuple((int(v),) for v in args.domain.split(","))
        table = exchange_classes(spec, domain)
        out = table.to_json()
        out["min_class_size"] = table.min_class_size()
    elif args.tool == "periodic":
        spec = parse_spec(_load_json(args.spec))
        pattern = Pattern.from_json(_load_json(args.pattern))
        cfg = totally_periodic_2d(spec, pattern)
        out = cfg.to_json()
    elif args.tool == "lef":
        from .autos import identity_map, shift_map, symbol_map
        from .subshifts import full_shift

        fs2 = full_shift("01", 2)
        ident = identity_map(fs2)
        swap = symbol_map(fs2, {"0": "1", "1": "0"})
        sh = shift_map(fs2, (1, 0))
        shinv = shift_map(fs2, (-1, 0))
        res = lef_embed(fs2, [(ident, ident), (swap, swap), (sh, shinv), (shinv, sh)])
        out = {
            "model_size": res.report["model_size"],
            "lattice": res.report["lattice"],
            "images": [list(p) for p in res.images],
            "report": {k: v for k, v in res.report.items() if k != "composable_pairs"},
        }
    else:
        print(f"unknown tool {args.tool!r}", file=sys.stderr)
        return 1
    if args.out:
        _dump(args.out, out)
    else:
        print(json.dumps(out, sort_keys=True, indent=1))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="shiftlab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("process", help="run the colony-merging process")
    p.add_argument("--spec", help="subshift spec JSON file")
    p.add_argument("--config", help="periodic configuration JSON file")
    p.add_argument("--demo", choices=["6x5"], help="use the built-in 6x5 three-symbol demo")
    p.add_argument("--steps", default="auto", help="firing-step budget or 'auto'")
    p.add_argument("--render", help="write an ASCII (.txt) or SVG (.svg) render")
    p.add_argument("--render-width", type=int, default=18)
    p.add_argument("--render-height", type=int, default=8)
    p.add_argument("--snapshot", help="write the culture snapshot JSON")
    p.add_argument("--trace", help="write the merge trace JSON")
    p.add_argument("--manifest", help="write the run manifest JSON")
    p.set_defaults(func=cmd_process)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--report", help="write the report JSON")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("tools", help="exchange / periodic / lef utilities")
    t.add_argument("tool", choices=["exchange", "periodic", "lef"])
    t.add_argument("--spec", help="subshift spec JSON file")
    t.add_argument("--domain", help="comma-separated cells for exchange, e.g. 0,1")
    t.add_argument("--pattern", help="pattern JSON file for periodic")
    t.add_argument("--out", help="output JSON file")
    t.set_defaults(func=cmd_tools)
    return ap


def main(argv=None):
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, BudgetError, FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
