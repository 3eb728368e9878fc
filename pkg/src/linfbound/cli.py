"""Command-line entry point.

Global flags may also be set through environment variables ``LINF_SEED``,
``LINF_OUT``, ``LINF_THREADS`` and ``LINF_FORMAT``; explicit flags win.
Exit status is 0 on success, 2 on invalid input and 1 on anything else.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .binomial import all_intervals
from .bounds import ALL_METHODS, BoundResult, BoundSpec, compute_bound, parse_method
from .config import load_config, preset_configs
from .distributions import InvalidArgument, mle, read_counts_csv, read_distribution_csv, write_distribution_csv
from .ingest import load_frequency_csv, to_distribution, tokenize_corpus
from .montecarlo import CoverageReport, topk_experiment, run_coverage
from .plots import line_plot
from .theory import run_all_checks

ENV_PREFIX = "LINF_"
EXIT_INVALID = 2


def _env(name, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="linfbound", description="Sup-norm confidence bounds for the multinomial MLE.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--seed", type=int, default=None, help="base seed (overrides config files)")
    ap.add_argument("--out", default=None, help="output directory (default: results)")
    ap.add_argument("--threads", type=int, default=None, help="worker threads (default: CPU count)")
    ap.add_argument("--format", choices=("csv", "json"), default=None, help="tabular output format")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="evaluate bounds on a counts file")
    b.add_argument("counts", help="CSV with header symbol,count")
    b.add_argument("--delta", type=float, default=0.05)
    b.add_argument("--method", default="all", help="comma-separated method names or 'all'")
    b.add_argument("--m", default="auto", help="even moment order or 'auto'")
    b.add_argument("--truth", default=None, help="probability CSV of the true distribution (oracle bounds)")

    for name, helptext in (("coverage", "Monte Carlo coverage experiment"),
                           ("topk", "top-k selective inference experiment")):
        c = sub.add_parser(name, help=helptext)
        g = c.add_mutually_exclusive_group(required=True)
        g.add_argument("config", nargs="?", help="key = value config file")
        g.add_argument("--preset", help="fig1, fig2, smoke or fig3-census")
        c.add_argument("--reps", type=int, default=None, help="override replicate count")

    ci = sub.add_parser("binom-ci", help="binomial confidence intervals")
    ci.add_argument("y", type=int)
    ci.add_argument("n", type=int)
    ci.add_argument("--delta", type=float, default=0.05)

    sub.add_parser("verify-theory", help="run the numerical theory checks")

    ig = sub.add_parser("ingest", help="build a distribution from a frequency table or text corpus")
    ig.add_argument("path")
    ig.add_argument("--mode", choices=("counts", "proportions", "corpus"), default="counts")
    return ap


def _resolve_globals(args) -> None:
    args.seed = args.seed if args.seed is not None else (int(_env("SEED")) if _env("SEED") else None)
    args.out = Path(args.out or _env("OUT", "results"))
    threads = args.threads if args.threads is not None else _env("THREADS")
    args.threads = max(1, int(threads)) if threads else (os.cpu_count() or 1)
    args.format = args.format or _env("FORMAT", "json")
    if args.format not in ("csv", "json"):
        raise InvalidArgument(f"format must be csv or json, got {args.format!r}")


class Manifest:
    def __init__(self, command: str, args):
        self.data = {"command": command, "version": __version__, "seed": args.seed,
                     "started": _now(), "configs": [], "artifacts": []}

    def add_config(self, cfg):
        self.data["configs"].append({"hash": cfg.config_hash, "config": cfg.echo()})

    def add(self, path: Path):
        self.data["artifacts"].append(str(path))

    def write(self, out: Path, status: str) -> Path:
        out.mkdir(parents=True, exist_ok=True)
        self.data["finished"] = _now()
        self.data["status"] = status
        path = out / "manifest.json"
        path.write_text(json.dumps(self.data, indent=2), encoding="utf-8")
        return path


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


# ---------------------------------------------------------------------------
# subcommands

def cmd_bounds(args) -> int:
    counts, _ = read_counts_csv(args.counts)
    phat = mle(counts)
    n = phat.n
    truth = read_distribution_csv(args.truth) if args.truth else None
    if truth is not None and truth.support_size != len(counts):
        raise InvalidArgument("truth and counts have different support sizes")
    names = list(ALL_METHODS) if args.method.strip().lower() == "all" else \
        [parse_method(s) for s in args.method.split(",") if s.strip()]
    m = "auto" if args.m == "auto" else int(args.m)
    results = []
    for meth in names:
        spec = BoundSpec(meth, args.delta, m=m if meth.uses_m else "auto")
        if len(names) == 1:
            results.append(compute_bound(spec, n, phat, truth).to_dict())
            continue
        reason = spec.applicable(n)
        if reason is None and meth.needs_truth and truth is None:
            reason = "oracle bound; pass --truth"
        if reason is None and meth.uses_m and spec.resolve_m(n) > n:
            reason = f"m exceeds n={n}"
        if reason:
            results.append({"method": meth.value, "skipped": reason})
        else:
            results.append(compute_bound(spec, n, phat, truth).to_dict())
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(BoundResult.CSV_FIELDS + ("skipped",))
        for r in results:
            w.writerow([r.get(k, "") for k in BoundResult.CSV_FIELDS] + [r.get("skipped", "")])
        sys.stdout.write(buf.getvalue())
    else:
        print(json.dumps(results, indent=2))
    return 0


def _configs(args):
    overrides = {}
    if args.reps is not None:
        overrides["reps"] = str(args.reps)
    if args.seed is not None:
        overrides["seed"] = str(args.seed)
    if args.preset:
        return preset_configs(args.preset, overrides)
    cfg = load_config(args.config)
    if overrides:
        cfg = dataclasses.replace(cfg, reps=int(overrides.get("reps", cfg.reps)),
                                  seed=int(overrides.get("seed", cfg.seed)))
    return [cfg]


def report_plot(report: CoverageReport) -> str:
    series = {}
    for spec in report.config.methods:
        name = spec.method.value
        cells = [c for c in report.cells if c.method == name and not c.skipped]
        if cells:
            series[name] = ([c.n for c in cells], [c.mean_radius for c in cells])
    ns = sorted({c.n for c in report.cells if not c.skipped})
    oracle = {c.n: c.oracle_quantile for c in report.cells if not c.skipped}
    if ns:
        series["oracle"] = (ns, [oracle[n] for n in ns])
    if report.references:
        series["selective lb"] = ([r.n for r in report.references], [r.selective_lb for r in report.references])
    return line_plot(series, title=f"{report.config.label} (delta={report.config.delta_rule})",
                     ylabel="mean radius", logx=True, logy=True)


def _run_experiments(args, runner) -> int:
    manifest = Manifest(args.command, args)
    status = "ok"
    try:
        for cfg in _configs(args):
            manifest.add_config(cfg)
            report = runner(cfg, threads=args.threads)
            formats = (args.format, "json") if args.format == "csv" else ("json",)
            for path in report.write(args.out, cfg.label, formats):
                manifest.add(path)
            svg = args.out / f"{cfg.label}-{cfg.config_hash}.svg"
            svg.write_text(report_plot(report), encoding="utf-8")
            manifest.add(svg)
            skipped = sum(1 for c in report.cells if c.skipped)
            print(f"{cfg.label}: {len(report.cells) - skipped} cells, {skipped} skipped "
                  f"[{cfg.config_hash}]")
    except Exception:
        status = "error"
        raise
    finally:
        print(f"manifest: {manifest.write(args.out, status)}")
    return 0


def cmd_coverage(args) -> int:
    return _run_experiments(args, run_coverage)


def cmd_topk(args) -> int:
    def runner(cfg, threads):
        if cfg.k is None:
            raise InvalidArgument("top-k config needs k")
        return topk_experiment(cfg, threads=threads)
    return _run_experiments(args, runner)


def cmd_binom_ci(args) -> int:
    print(json.dumps(all_intervals(args.y, args.n, args.delta), indent=2))
    return 0


def cmd_verify_theory(args) -> int:
    manifest = Manifest("verify-theory", args)
    report = run_all_checks(seed=args.seed or 0)
    text = json.dumps(report, indent=2)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "verify-theory.json"
    path.write_text(text, encoding="utf-8")
    manifest.add(path)
    manifest.write(args.out, "ok")
    print(text)
    return 0


def cmd_ingest(args) -> int:
    manifest = Manifest("ingest", args)
    if args.mode == "corpus":
        table = tokenize_corpus(args.path)
    else:
        table = load_frequency_csv(args.path, args.mode)
    dist = to_distribution(table)
    stem = Path(args.path).stem
    args.out.mkdir(parents=True, exist_ok=True)
    jpath = args.out / f"{stem}-table.json"
    jpath.write_text(table.to_json(), encoding="utf-8")
    cpath = args.out / f"{stem}-distribution.csv"
    write_distribution_csv(dist, cpath)
    for p in (jpath, cpath):
        manifest.add(p)
    manifest.write(args.out, "ok")
    print(json.dumps({"entries": len(table), "total": table.total, "top_mass": dist.top,
                      "table": str(jpath), "distribution": str(cpath)}, indent=2))
    return 0


COMMANDS = {
    "bounds": cmd_bounds,
    "coverage": cmd_coverage,
    "topk": cmd_topk,
    "binom-ci": cmd_binom_ci,
    "verify-theory": cmd_verify_theory,
    "ingest": cmd_ingest,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve_globals(args)
        return COMMANDS[args.command](args)
    except (InvalidArgument, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
