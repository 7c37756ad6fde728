"""Run the five parameter sweeps and write one export directory per sweep.

    python scripts/run_sweeps.py --out runs/sweeps --replicas 10 --workers 4

Values default to the desk-scale sets; ``--full`` uses the wider grids
(five team sizes, four newcomer probabilities).
"""

import argparse
from pathlib import Path

from coevo import SimulationConfig
from coevo.experiments import SweepSpec, run_sweep
from coevo.outputs import emit_outputs

DESK = {
    "theta": (24, 48, 96),
    "mean_references": (5, 10, 20),
    "team_size_fixed_p": (1.6, 2.6, 5.2),
    "newcomer_prob": (0.1, 0.192, 0.4),
    "team_size_fixed_k": (1.6, 2.6, 5.2),
}
FULL = {
    **DESK,
    "team_size_fixed_p": (1.1, 1.6, 2.6, 5.2, 10.1),
    "newcomer_prob": (0.1, 0.192, 0.4, 0.767),
    "team_size_fixed_k": (1.1, 1.6, 2.6, 5.2, 10.1),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--replicas", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--fixed-k", type=float, default=0.679, dest="fixed_k")
    ap.add_argument("--full", action="store_true")
    ap.add_argument("--only", choices=sorted(DESK), action="append", help="restrict to these sweeps")
    args = ap.parse_args()

    grid = FULL if args.full else DESK
    base = SimulationConfig(seed=args.seed)
    for parameter in args.only or grid:
        fixed_k = args.fixed_k if parameter == "team_size_fixed_k" else None
        spec = SweepSpec(parameter, grid[parameter], args.replicas, base, fixed_k)
        report = run_sweep(spec, workers=args.workers)
        emit_outputs(report, args.out / parameter)
        print(f"== {parameter}")
        print(f"{'value':>8} {'p':>7} {'IF(5-13)':>9} {'avg h':>7} {'authors':>8}")
        for v in report.values:
            print(
                f"{v.value:>8g} {v.config.newcomer_prob:>7.3f} {v.mean_if:>9.4f} "
                f"{v.mean_final_h:>7.4f} {v.mean_authors:>8.1f}"
            )


if __name__ == "__main__":
    main()
