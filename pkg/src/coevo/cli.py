"""Command-line entry point: ``coevo simulate | sweep | ingest | validate``.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from coevo import ingest as ing
from coevo.config import SimulationConfig, fit_exponential, load_config
from coevo.errors import ConfigError, DataError, InvariantViolation
from coevo.experiments import SWEEP_PARAMETERS, SweepSpec, run_sweep
from coevo.metrics import fit_linear_through_origin
from coevo.outputs import write_csv, write_manifest, write_metric_outputs, emit_outputs
from coevo.simulation import run_simulation

log = logging.getLogger("coevo")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config(args) -> SimulationConfig:
    cfg = load_config(args.config) if args.config else SimulationConfig()
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    return cfg


def cmd_simulate(args) -> int:
    cfg = _config(args)
    result = run_simulation(cfg)
    manifest = emit_outputs(result, args.out, formats=(args.format,) if args.format == "json" else ("csv",))
    print(f"{result.n_papers} papers, {result.n_authors} authors, {len(manifest)} files -> {args.out}")
    return EXIT_OK


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad value list {text!r}") from exc


def cmd_sweep(args) -> int:
    spec = SweepSpec(args.param, tuple(args.values), args.replicas, _config(args), args.fixed_k)
    report = run_sweep(spec, workers=args.workers)
    emit_outputs(report, args.out, formats=(args.format,) if args.format == "json" else ("csv",))
    for v in report.values:
        print(f"{spec.parameter}={v.value:g}: mean IF(5-13)={v.mean_if:.4f} final avg h={v.mean_final_h:.4f}")
    return EXIT_OK


def cmd_ingest(args) -> int:
    metadata, meta_rejects = ing.load_metadata(args.metadata)
    pairs, pair_rejects = ing.load_pairs(args.pairs)
    if args.rejects:
        ing.write_rejects([*meta_rejects, *pair_rejects], args.rejects)
    kept, stats = ing.filter_pairs_with_stats(pairs, metadata)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for quantity, name in (("team_size", "team_size_sampler.json"), ("reference_count", "reference_sampler.json")):
        sampler = ing.build_interval_histograms(metadata, kept, args.intervals, quantity, args.split)
        path = out / name
        path.write_text(json.dumps(sampler.to_dict(), indent=2) + "\n")
        files.append(path)
    growth = {}
    try:
        alpha, beta, k = ing.fit_growth(metadata)
        growth = {"alpha": alpha, "beta": beta, "k": k}
    except DataError as exc:
        log.warning("growth fit skipped: %s", exc)
    stats.update(metadata_rejects=len(meta_rejects), pair_rejects=len(pair_rejects), papers=len(metadata))
    for name, doc in (("growth.json", growth), ("filter.json", stats)):
        path = out / name
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        files.append(path)
    ledger = ing.build_ledger(metadata, kept)
    files.extend(write_metric_outputs(ledger, out))
    write_manifest(out, files)
    print(f"{len(metadata)} papers, {stats['retained']} pairs kept ({stats['dropped']} dropped) -> {out}")
    return EXIT_OK


def _read_series(path: Path) -> dict[str, dict[float, float]]:
    """Column name -> {x: value} for a CSV whose first column is the x axis."""
    if not path.exists():
        return {}
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    out: dict[str, dict[float, float]] = {h: {} for h in header[1:]}
    for row in body:
        x = float(row[0])
        for h, cell in zip(header[1:], row[1:]):
            if cell != "":
                out[h][x] = float(cell)
    return out


def _regroup_yearly(series: dict[str, dict[float, float]], groups: int) -> dict[str, dict[float, float]]:
    """Collapse calendar years into ``groups`` consecutive equal-duration intervals."""
    cum = series.get("cumulative_papers", {})
    years = sorted(cum)
    if len(years) <= groups:
        return series
    counts = np.diff([0.0] + [cum[y] for y in years])
    bounds = np.array_split(np.arange(len(years)), groups)
    out: dict[str, dict[float, float]] = {name: {} for name in series}
    for gi, idx in enumerate(bounds, start=1):
        last = years[idx[-1]]
        for name, col in series.items():
            if name.startswith("cumulative"):
                out[name][gi] = col.get(last, math.nan)
            else:
                vals = np.array([col.get(years[i], math.nan) for i in idx])
                w = counts[idx]
                ok = ~np.isnan(vals) & (w > 0)
                out[name][gi] = float(np.average(vals[ok], weights=w[ok])) if ok.any() else math.nan
    return out


def _growth_from_yearly(series: dict[str, dict[float, float]]) -> dict[str, float]:
    cum_p = series.get("cumulative_papers", {})
    cum_a = series.get("cumulative_authors", {})
    years = sorted(cum_p)
    if len(years) < 2:
        return {}
    _, beta = fit_exponential(range(1, len(years) + 1), [cum_p[y] for y in years])
    k = fit_linear_through_origin([cum_p[y] for y in years], [cum_a[y] for y in years])
    return {"beta": beta, "k": k}


def cmd_validate(args) -> int:
    sim, emp = Path(args.sim), Path(args.empirical)
    for d in (sim, emp):
        if not (d / "impact_factor.csv").exists():
            raise DataError(f"{d} does not look like a simulate/ingest output directory")
    rows = []

    def overlay(figure, sim_series, emp_series):
        for name in sorted(set(sim_series) | set(emp_series)):
            s, e = sim_series.get(name, {}), emp_series.get(name, {})
            for x in sorted(set(s) | set(e)):
                rows.append((figure, name, x, s.get(x, math.nan), e.get(x, math.nan)))

    sim_yearly = _read_series(sim / "yearly_series.csv")
    emp_yearly_raw = _read_series(emp / "yearly_series.csv")
    n_sim_years = len(sim_yearly.get("cumulative_papers", {}))
    emp_yearly = _regroup_yearly(emp_yearly_raw, n_sim_years) if n_sim_years else emp_yearly_raw
    overlay("yearly", sim_yearly, emp_yearly)
    for name in ("team_size", "references", "productivity", "collaborators", "citations", "h_index"):
        overlay(
            "distribution",
            {name: _read_series(sim / "distributions" / f"{name}.csv").get("density", {})},
            {name: _read_series(emp / "distributions" / f"{name}.csv").get("density", {})},
        )
    overlay("impact_factor", _read_series(sim / "impact_factor.csv"), _read_series(emp / "impact_factor.csv"))
    overlay("average_h", _read_series(sim / "average_h.csv"), _read_series(emp / "average_h.csv"))
    overlay("h_distribution", _read_series(sim / "h_distribution.csv"), _read_series(emp / "h_distribution.csv"))
    g_sim, g_emp = _growth_from_yearly(sim_yearly), _growth_from_yearly(emp_yearly_raw)
    for name in ("beta", "k"):
        rows.append(("growth", name, math.nan, g_sim.get(name, math.nan), g_emp.get(name, math.nan)))
    write_csv(Path(args.out), ["figure", "quantity", "x", "simulated", "empirical"], rows)
    print(f"{len(rows)} overlay rows -> {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coevo", description="Coauthorship/citation coevolution simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run one simulation")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="seed-replicated parameter sweep")
    p.add_argument("--config")
    p.add_argument("--param", required=True, choices=SWEEP_PARAMETERS)
    p.add_argument("--values", required=True, type=_float_list)
    p.add_argument("--replicas", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--fixed-k", type=float, dest="fixed_k")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ingest", help="ingest APS-style metadata and citation pairs")
    p.add_argument("--metadata", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--intervals", type=int, default=13)
    p.add_argument("--split", choices=("equal_count", "equal_duration"), default="equal_count")
    p.add_argument("--rejects")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="overlay simulated and empirical outputs")
    p.add_argument("--sim", required=True)
    p.add_argument("--empirical", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
