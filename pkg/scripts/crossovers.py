#!/usr/bin/env python3
"""Where NOMA stops beating OMA for one user pair, swept over beta and alpha.

Prints the closed-form bounds next to the sign changes found on the sweep grid,
for both the log-rate and the discrete-rate model.
"""

import argparse

import numpy as np

from noma_pairlab import alpha_lower_positivity, alpha_lower_strong, alpha_upper, beta_upper_at_alpha, db_to_linear
from noma_pairlab.sweeps import alpha_sweep, beta_sweep, sign_changes


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--gamma-s-db", type=float, default=10.48)
    p.add_argument("--gamma-w-db", type=float, default=4.69)
    p.add_argument("--alpha", type=float, default=0.32, help="fixed split for the beta sweep")
    p.add_argument("--beta", type=float, default=0.02, help="fixed residual for the alpha sweep")
    p.add_argument("--points", type=int, default=2001)
    args = p.parse_args()

    gs, gw = float(db_to_linear(args.gamma_s_db)), float(db_to_linear(args.gamma_w_db))
    print(f"pair: gamma_s={gs:.4f} gamma_w={gw:.4f} (linear)")
    print(f"  alpha_upper            {alpha_upper(gw):.4f}")
    print(f"  alpha_lower_positivity {alpha_lower_positivity(gs, gw):.4f}")
    print(f"  alpha_lower_strong     {alpha_lower_strong(gs, args.beta):.4f}  (beta={args.beta})")
    print(f"  beta_upper_at_alpha    {beta_upper_at_alpha(gs, gw, args.alpha):.4f}  (alpha={args.alpha})")

    betas = np.linspace(0, 1, args.points)
    alphas = np.linspace(0, 1, args.points + 2)[1:-1]
    for model in ("lr", "dr"):
        b = beta_sweep(gs, gw, args.alpha, betas, model)
        a = alpha_sweep(gs, gw, args.beta, alphas, model)
        print(f"[{model}] sum-rate sign change in beta: {sign_changes(betas, [r.asr_noma - r.asr_oma for r in b])}")
        print(f"[{model}] weak-user sign change in alpha: {sign_changes(alphas, [r.r_w_noma - r.r_w_oma for r in a])}")
        print(f"[{model}] strong-user sign change in alpha: {sign_changes(alphas, [r.r_s_noma - r.r_s_oma for r in a])}")


if __name__ == "__main__":
    main()
