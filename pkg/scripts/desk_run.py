"""One default-scale run with a printed summary of its headline numbers.

    python scripts/desk_run.py --seed 0 --out runs/desk
"""

import argparse
import time

import numpy as np

from coevo import SimulationConfig, run_simulation
from coevo.config import build_schedule, load_config, schedule_growth_rate
from coevo.experiments import top_h_linearity
from coevo.metrics import coefficient_of_variation, yearly_series
from coevo.outputs import emit_outputs


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config", help="JSON config; defaults to the built-in desk-scale config")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="write the full export here")
    args = ap.parse_args()

    cfg = load_config(args.config) if args.config else SimulationConfig()
    start = time.perf_counter()
    result = run_simulation(cfg, seed=args.seed)
    elapsed = time.perf_counter() - start
    led = result.ledger

    print(f"run time          {elapsed:.2f} s")
    print(f"papers / authors  {result.n_papers} / {result.n_authors}")
    print(f"schedule growth   {schedule_growth_rate(build_schedule(cfg)):.4f} per year")
    print(f"team size         {led.team_sizes.mean():.3f} mean")
    print(f"newcomers/paper   {result.newcomers.mean():.3f}")
    print(f"references/paper  {np.mean(yearly_series(led, 'mean_reference_count')):.3f} (mean of yearly means)")
    print("IF by year        " + " ".join(f"{k}:{v:.2f}" for k, v in sorted(result.impact_factor.items())))
    print("avg h by year     " + " ".join(f"{k}:{v:.2f}" for k, v in sorted(result.average_h.items())))
    for name, values in result.distributions.items():
        print(f"{name:<17} max {values.max():>5}  median {np.median(values):>5}  CV {coefficient_of_variation(values):.2f}")
    print("top-3 h R^2       " + " ".join(f"{r:.3f}" for r in top_h_linearity(result)))
    if args.out:
        manifest = emit_outputs(result, args.out)
        print(f"{len(manifest)} files -> {args.out}")


if __name__ == "__main__":
    main()
