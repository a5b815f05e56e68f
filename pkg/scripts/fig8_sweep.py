#!/usr/bin/env python3
"""Mean sum rate of A-UP, NF, UCGD and OMA against users per BS.

    python scripts/fig8_sweep.py --beta 0.13 --seeds 0 1 2 --out results/fig8.csv
"""

import argparse
import csv
import sys
from dataclasses import replace

from noma_pairlab.netsim import SimConfig, run_experiment
from noma_pairlab.pairing import SplitPolicy


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--beta", type=float, default=0.13)
    p.add_argument("--users", type=int, nargs="+", default=[8, 16, 32])
    p.add_argument("--seeds", type=int, nargs="+", default=[0])
    p.add_argument("--realizations", type=int, default=80)
    p.add_argument("--split", default="grid:101")
    p.add_argument("--out", default="-")
    args = p.parse_args()

    base = SimConfig(beta=args.beta, realizations=args.realizations,
                     split_policy=SplitPolicy.parse(args.split))
    f = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(f)
    w.writerow(["n_users", "seed", "algorithm", "mean_asr", "std_asr", "mean_user_rate"])
    for n in args.users:
        for seed in args.seeds:
            res = run_experiment(replace(base, users_per_bs=n, seed=seed))
            for alg, s in res.items():
                w.writerow([n, seed, alg, f"{s.mean_asr:.6f}", f"{s.std_asr:.6f}", f"{s.mean_user_rate:.6f}"])
            f.flush()
    if f is not sys.stdout:
        f.close()


if __name__ == "__main__":
    main()
