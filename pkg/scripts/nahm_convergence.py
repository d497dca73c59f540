"""RK4 convergence of the canonical Nahm trajectory against f(s) = 1/(1 - s).

    python scripts/nahm_convergence.py --s-end 0.9
"""

import argparse

from minkgarch.dynamics import canonical_profile, canonical_triple, integrate_nahm, lax_drift, random_triple


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--s-end", type=float, default=0.9)
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()

    exact = 1.0 / (1.0 - args.s_end)
    prev = None
    for step in (4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4):
        traj = integrate_nahm(canonical_triple(), 0.0, args.s_end, step)
        err = abs(canonical_profile(traj.final) - exact) / exact
        ratio = "" if prev is None else f"  ratio {prev / err:.2f}"
        print(f"step {step:.1e}  rel err {err:.3e}{ratio}")
        prev = err

    traj = integrate_nahm(random_triple(args.seed, norm=1.0), 0.0, 0.5, 1e-3)
    for k, d in lax_drift(traj).items():
        print(f"lax drift k={k:+.2f}: {d:.2e}")


if __name__ == "__main__":
    main()
