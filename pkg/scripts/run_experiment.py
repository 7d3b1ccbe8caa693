"""Run one configuration and print the KS table next to the written report.

    python scripts/run_experiment.py scripts/theorem1.cfg --threads 2
"""

import argparse
import logging
from pathlib import Path

from stable_limits.config import load_config
from stable_limits.experiment import run_convergence_experiment
from stable_limits.report import emit_report, save_raw


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("config")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--output-dir")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    report = run_convergence_experiment(cfg, threads=args.threads)
    out = Path(args.output_dir or cfg.output_dir)
    path = emit_report(report, "csv", out)
    save_raw(report, out / "raw.npz")

    print(f"{'n':>7} {'t':>5} {'quantity':>9} {'ks':>8} {'thr':>8} {'pass':>5} {'b1_gap':>10} {'c22_gap':>10}")
    for r in report.rows:
        print(
            f"{r['n']:>7} {r['t']:>5.2f} {r['quantity']:>9} {r['ks_stat']:>8.4f} {r['ks_threshold']:>8.4f}"
            f" {str(r['pass']):>5} {r['b1_gap']:>10.2e} {r['c22_gap']:>10.2e}"
        )
    print(f"wrote {path} ({report.wall_clock:.1f}s)")


if __name__ == "__main__":
    main()
