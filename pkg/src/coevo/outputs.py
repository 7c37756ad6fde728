"""CSV/JSON exports and the sha256 manifest.

Every writer produces byte-identical files for identical inputs: rows are
emitted in id order and floats are written with ``repr`` precision.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from coevo import metrics
from coevo.coauthor import collaborator_count
from coevo.errors import DataError
from coevo.experiments import SweepReport
from coevo.ingest import write_aps_files
from coevo.ledger import Ledger
from coevo.simulation import RunResult

DISTRIBUTION_NAMES = ("citations", "productivity", "collaborators", "team_size", "references", "h_index")


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return ""
        return repr(x)
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def write_distribution(path: Path, values: np.ndarray, bins_per_decade: int = 5) -> Path:
    """Log-binned density of the positive values (zeros cannot sit on a log axis)."""
    positive = np.asarray(values)[np.asarray(values) > 0]
    return write_csv(path, ["bin_center", "density"], metrics.log_binned_distribution(positive, bins_per_decade))


def write_metric_outputs(ledger: Ledger, out_dir: Path, include_zero_h: bool = True) -> list[Path]:
    """Indicator files shared by simulated and ingested ledgers."""
    out_dir = Path(out_dir)
    files = [
        write_csv(out_dir / "impact_factor.csv", ["year", "IF"], sorted(metrics.impact_factor_series(ledger).items())),
        write_csv(out_dir / "h_distribution.csv", ["h", "count"], metrics.h_index_distribution(ledger).items()),
    ]
    ids, h = metrics.author_h_indices(ledger)
    files.append(write_csv(out_dir / "author_h.csv", ["author_id", "h"], zip(ids.tolist(), h.tolist())))
    files.append(
        write_csv(
            out_dir / "average_h.csv",
            ["year", "average_h"],
            sorted(metrics.average_h_series(ledger, include_zero_h).items()),
        )
    )
    series = {q: metrics.yearly_series(ledger, q) for q in metrics.YEARLY_QUANTITIES}
    rows = [[y + 1] + [series[q][y] for q in metrics.YEARLY_QUANTITIES] for y in range(ledger.n_years)]
    files.append(write_csv(out_dir / "yearly_series.csv", ["year", *metrics.YEARLY_QUANTITIES], rows))
    for name, values in metrics.final_distributions(ledger).items():
        files.append(write_distribution(out_dir / "distributions" / f"{name}.csv", values))
    return files


def sha256_of(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_dir: Path, files: Iterable[Path]) -> dict[str, str]:
    out_dir = Path(out_dir)
    manifest = {str(Path(f).relative_to(out_dir).as_posix()): sha256_of(f) for f in files}
    manifest = dict(sorted(manifest.items()))
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest


def _emit_run(result: RunResult, out_dir: Path, formats: Sequence[str]) -> list[Path]:
    cfg = result.config
    files = []
    config_path = out_dir / "config.json"
    config_path.write_text(json.dumps(cfg.to_dict(), indent=2, sort_keys=True) + "\n")
    files.append(config_path)

    corpus, registry, ledger = result.corpus, result.registry, result.ledger
    files.append(
        write_csv(
            out_dir / "papers.csv",
            ["paper_id", "month", "team_size", "quality", "n_refs", "n_cites"],
            ((p.paper_id, p.month, len(p.team), p.quality, len(p.references), p.citations_received) for p in corpus),
        )
    )
    files.append(
        write_csv(
            out_dir / "citations.csv",
            ["citing_id", "cited_id", "month"],
            ((p.paper_id, ref, p.month) for p in corpus for ref in p.references),
        )
    )
    files.append(
        write_csv(
            out_dir / "authors.csv",
            ["author_id", "q_factor", "productivity", "k_i", "collaborators"],
            (
                (a.author_id, a.q_factor, len(a.paper_ids), registry.collaboration_count(a.author_id),
                 collaborator_count(registry.matrix, a.author_id))
                for a in registry
            ),
        )
    )
    files.append(write_csv(out_dir / "coauthor_edges.csv", ["author_i", "author_j", "weight"], registry.matrix.edges()))
    files.extend(write_metric_outputs(ledger, out_dir, cfg.include_zero_h))
    if ledger.months_per_year == 12:
        files.extend(write_aps_files(ledger, out_dir))
    if "json" in formats:
        doc = {
            "config": cfg.to_dict(),
            "seed": result.seed,
            "n_papers": result.n_papers,
            "n_authors": result.n_authors,
            "impact_factor": {str(k): v for k, v in sorted(result.impact_factor.items())},
            "average_h": {str(k): v for k, v in sorted(result.average_h.items())},
            "h_distribution": {str(k): v for k, v in metrics.h_index_distribution(ledger).items()},
        }
        path = out_dir / "result.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        files.append(path)
    return files


def _value_dirname(parameter: str, value: float) -> str:
    return f"{parameter}={value:g}"


def _emit_sweep(report: SweepReport, out_dir: Path, formats: Sequence[str]) -> list[Path]:
    spec = report.spec
    files = []
    spec_path = out_dir / "sweep.json"
    spec_path.write_text(
        json.dumps(
            {
                "parameter": spec.parameter,
                "values": list(spec.values),
                "replicas": spec.replicas,
                "fixed_k": spec.fixed_k,
                "base_config": spec.base_config.to_dict(),
            },
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )
    files.append(spec_path)
    files.append(
        write_csv(
            out_dir / "sweep_summary.csv",
            ["value", "newcomer_prob", "mean_IF_window", "mean_final_average_h", "mean_authors", "mean_newcomers"],
            (
                (v.value, v.config.newcomer_prob, v.mean_if, v.mean_final_h, v.mean_authors, v.mean_newcomers)
                for v in report.values
            ),
        )
    )
    for v in report.values:
        sub = out_dir / _value_dirname(spec.parameter, v.value)
        if_by_year, h_by_year = v.if_by_year(), v.h_by_year()
        years = sorted(set(if_by_year) | set(h_by_year))
        nan2 = (math.nan, math.nan)
        files.append(
            write_csv(
                sub / "yearly.csv",
                ["year", "IF_mean", "IF_sd", "average_h_mean", "average_h_sd"],
                ((y, *if_by_year.get(y, nan2), *h_by_year.get(y, nan2)) for y in years),
            )
        )
        files.append(
            write_csv(
                sub / "runs.csv",
                ["seed", "mean_IF_window", "final_average_h", "n_authors", "mean_newcomers", "mean_team_size"],
                (
                    (r.seed, r.mean_if(), r.final_average_h, r.n_authors, r.mean_newcomers, r.mean_team_size)
                    for r in v.runs
                ),
            )
        )
        for name in DISTRIBUTION_NAMES:
            files.append(write_distribution(sub / "distributions" / f"{name}.csv", v.pooled(name)))
        h_counts = np.bincount(v.pooled("h_index").astype(np.int64))
        files.append(
            write_csv(sub / "h_distribution.csv", ["h", "count"], ((h, int(c)) for h, c in enumerate(h_counts) if c))
        )
    if "json" in formats:
        doc = {
            "parameter": spec.parameter,
            "values": [
                {
                    "value": v.value,
                    "IF": {str(y): list(s) for y, s in v.if_by_year().items()},
                    "average_h": {str(y): list(s) for y, s in v.h_by_year().items()},
                }
                for v in report.values
            ],
        }
        path = out_dir / "report.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        files.append(path)
    return files


def emit_outputs(
    result: RunResult | SweepReport, out_dir: str | Path, formats: Sequence[str] = ("csv",)
) -> dict[str, str]:
    """Write every export for a run or sweep and return the manifest (file -> sha256)."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise DataError(f"cannot write to {out_dir}: {exc}") from exc
    if isinstance(result, SweepReport):
        files = _emit_sweep(result, out_dir, formats)
    else:
        files = _emit_run(result, out_dir, formats)
    return write_manifest(out_dir, files)
