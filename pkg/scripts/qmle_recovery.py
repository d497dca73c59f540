"""Monte Carlo recovery of GARCH(1,1) parameters by Gaussian QMLE.

    python scripts/qmle_recovery.py --seeds 20 --T 10000
"""

import argparse
import time

import numpy as np

from minkgarch.garch import GarchParams, SimConfig, fit_qmle, simulate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--T", type=int, default=10_000)
    ap.add_argument("--kappa", type=float, default=0.05)
    ap.add_argument("--alpha", type=float, default=0.10)
    ap.add_argument("--beta", type=float, default=0.85)
    args = ap.parse_args()

    true = GarchParams(args.kappa, args.alpha, args.beta)
    rows = []
    t0 = time.perf_counter()
    for seed in range(args.seeds):
        fit = fit_qmle(simulate(true, SimConfig(seed=seed, T=args.T)))
        p = fit.params
        rows.append((p.kappa, p.alpha, p.beta))
        print(f"seed {seed:3d}  kappa {p.kappa:.4f}  alpha {p.alpha:.4f}  beta {p.beta:.4f}  loglik {fit.loglik:.2f}")
    est = np.array(rows)
    bias = est.mean(axis=0) - np.array([true.kappa, true.alpha, true.beta])
    rmse = np.sqrt(((est - np.array([true.kappa, true.alpha, true.beta])) ** 2).mean(axis=0))
    print(f"bias  {bias}\nrmse  {rmse}\nelapsed {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
