"""Grid refinement of the sine-Gordon kink residual and the light-cone identity.

    python scripts/soliton_refinement.py --k 1 2 --p 0.5
"""

import argparse

from minkgarch.dynamics import SolitonParams, lightcone_identity_error, sine_gordon_residual, soliton_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=float, nargs="+", default=[1.0, 2.0])
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--extent", type=float, default=5.0)
    args = ap.parse_args()

    box = (-args.extent, args.extent, -args.extent, args.extent)
    for k in args.k:
        params = SolitonParams(k, args.p)
        prev = None
        for h in (0.04, 0.02, 0.01, 0.005):
            res = sine_gordon_residual(soliton_grid(params, box, h), k).max_abs
            cone = lightcone_identity_error(params, box, h)
            ratio = "" if prev is None else f"  ratio {prev / res:.3f}"
            print(f"k {k:g}  h {h:.3f}  residual {res:.3e}{ratio}  light-cone {cone:.3e}")
            prev = res


if __name__ == "__main__":
    main()
