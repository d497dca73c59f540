"""Command-line entry point.

Exit codes: 0 success, 2 data/model error, 3 usage error, 4 numerical
blow-up. JSON output is key-sorted and embeds the resolved configuration;
CSV output starts with a ``# config: {...}`` comment line carrying the same
record.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, dynamics, garch, minkowski, series, stylized
from .errors import BlowUp, DataError

EXIT_OK, EXIT_DATA, EXIT_USAGE, EXIT_BLOWUP = 0, 2, 3, 4
CLUSTERING_BETA_BOUND = 0.5


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _finite(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--output", type=Path, default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--input", type=Path, required=True)
    data.add_argument("--kind", choices=("prices", "returns"), default="prices",
                      help="prices: date,price CSV; returns: one value per line")

    parser = _Parser(prog="minkgarch", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", parents=[common], help="prices CSV to returns and moments")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--returns-kind", choices=("log", "simple"), default="log")

    p = sub.add_parser("fit", parents=[common, data], help="GARCH(1,1) quasi-MLE")
    p.add_argument("--multistarts", type=_positive_int, default=8)
    p.add_argument("--max-iter", type=_positive_int, default=2000)
    p.add_argument("--tol", type=_finite, default=1e-8)

    p = sub.add_parser("simulate", parents=[common], help="simulate GARCH(1,1) returns")
    p.add_argument("--kappa", type=_finite, default=0.05)
    p.add_argument("--alpha", type=_finite, default=0.10)
    p.add_argument("--beta", type=_finite, default=0.85)
    p.add_argument("--T", type=_positive_int, default=10000)
    p.add_argument("--burn-in", type=int, default=0)

    p = sub.add_parser("stylized", parents=[common, data], help="absolute-return ACF, power law, embedding")
    p.add_argument("--max-lag", type=int, default=50)
    p.add_argument("--raw", action="store_true", help="un-normalized embedding")
    p.add_argument("--output-dir", type=Path, default=None,
                   help="write acf.csv, power_law.json and embedding.csv here")

    p = sub.add_parser("minkowski", parents=[common], help="metric-coefficient GARCH flow")
    p.add_argument("--input", type=Path, default=None, help="shocks, one per line (squared internally)")
    p.add_argument("--squared", action="store_true", help="input already holds squared shocks")
    p.add_argument("--steps", type=int, default=10, help="number of zero shocks when no --input")
    p.add_argument("--g0", type=_finite, default=-1.0)
    p.add_argument("--alpha0", type=_finite, default=0.05)
    p.add_argument("--alpha1", type=_finite, default=0.2)
    p.add_argument("--beta", type=_finite, default=0.7)
    p.add_argument("--extract", action="store_true", help="also recover squared shocks from the path")

    p = sub.add_parser("soliton", parents=[common], help="sine-Gordon kink residual check")
    p.add_argument("--k", type=_finite, default=1.0)
    p.add_argument("--p", type=_finite, default=0.5)
    p.add_argument("--delta", type=_finite, default=0.0)
    p.add_argument("--grid-h", type=_finite, default=0.01)
    p.add_argument("--extent", type=_finite, default=5.0, help="half-width of the D and S ranges")
    p.add_argument("--no-refine", action="store_true", help="skip the h/2 refinement run")

    p = sub.add_parser("nahm", parents=[common], help="Nahm flow and Lax isospectrality")
    p.add_argument("--step", type=_finite, default=1e-3)
    p.add_argument("--s-from", type=_finite, default=0.0)
    p.add_argument("--s-to", type=_finite, default=0.5)
    p.add_argument("--norm", type=_finite, default=1.0, help="Frobenius norm of the random triple")
    p.add_argument("--canonical", action="store_true", help="start from -(i/2) sigma_i scaled by --norm")
    p.add_argument("--k", type=_finite, nargs="+", default=[-1.0, 0.5, 1.0])
    return parser


# ---------------------------------------------------------------------------


def _config(args) -> dict:
    flags = {}
    for key, value in sorted(vars(args).items()):
        if key in ("command", "seed", "output", "output_dir"):  # destinations are not config
            continue
        flags[key] = str(value) if isinstance(value, Path) else value
    return {"command": args.command, "seed": args.seed, "version": __version__, "flags": flags}


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


def _csv_with_config(args, body: str) -> str:
    return "# config: " + json.dumps(_config(args), sort_keys=True) + "\n" + body


def _emit(args, text: str) -> None:
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None


def _load_returns(args) -> series.ReturnSeries:
    text = _read(args.input)
    if args.kind == "prices":
        return series.log_returns(series.parse_price_csv(text))
    return series.parse_returns(text)


def cmd_ingest(args) -> int:
    prices = series.parse_price_csv(_read(args.input))
    make = series.log_returns if args.returns_kind == "log" else series.simple_returns
    rets = make(prices)
    if (args.format or "csv") == "csv":
        _emit(args, _csv_with_config(args, series.serialize_returns(rets)))
        return EXIT_OK
    try:
        m = series.moments(rets)
        mom = {"mean": m.mean, "variance": m.variance, "fourth_moment": m.fourth_moment,
               "excess_kurtosis": m.excess_kurtosis}
    except DataError as exc:
        mom = {"error": type(exc).__name__, "message": str(exc)}
    out = {"config": _config(args), "n_prices": len(prices), "kind": rets.kind,
           "moments": mom, "returns": rets.values.tolist()}
    _emit(args, _dumps(out))
    return EXIT_OK


def cmd_fit(args) -> int:
    rets = _load_returns(args)
    opts = garch.FitOptions(multistarts=args.multistarts, max_iter=args.max_iter, tol=args.tol)
    fit = garch.fit_qmle(rets, opts, seed=args.seed)
    _emit(args, _dumps({"config": _config(args), "fit": fit.to_dict()}))
    return EXIT_OK


def cmd_simulate(args) -> int:
    if args.burn_in < 0:
        raise UsageError("--burn-in must be >= 0")
    params = garch.GarchParams(args.kappa, args.alpha, args.beta)
    rets = garch.simulate(params, garch.SimConfig(args.seed, args.T, args.burn_in))
    if (args.format or "csv") == "csv":
        _emit(args, _csv_with_config(args, series.serialize_returns(rets)))
    else:
        _emit(args, _dumps({"config": _config(args), "generator": garch.GENERATOR,
                            "returns": rets.values.tolist()}))
    return EXIT_OK


def cmd_stylized(args) -> int:
    if args.max_lag < 1:
        raise UsageError("--max-lag must be >= 1")
    rets = _load_returns(args)
    curve = stylized.abs_acf(rets, args.max_lag)
    fit = stylized.fit_power_law(curve)
    emb = stylized.minkowski_embedding(curve, fit, normalize=not args.raw)
    mem = stylized.memory_constant(curve, fit.beta)
    classes = {c.value: int(sum(1 for x in emb.causal_class if x is c)) for c in stylized.CausalClass}

    try:
        m = series.moments(rets)
        root = stylized.dark_root(m.fourth_moment, m.excess_kurtosis)
        dark = {"plus": root.plus, "minus": root.minus}
    except DataError as exc:
        dark = {"error": type(exc).__name__, "message": str(exc)}

    summary = {
        "config": _config(args),
        "n_returns": len(rets),
        "power_law": fit.to_dict(),
        "paper_beta_bound": CLUSTERING_BETA_BOUND,
        "paper_beta_bound_satisfied": bool(fit.beta <= CLUSTERING_BETA_BOUND),
        "acf": curve.values.tolist(),
        "memory_constant_dispersion": mem.dispersion,
        "embedding_classes": classes,
        "dark_root": dark,
    }
    if args.output_dir is not None:
        args.output_dir.mkdir(parents=True, exist_ok=True)
        (args.output_dir / "acf.csv").write_text(_csv_with_config(args, curve.to_csv()))
        (args.output_dir / "power_law.json").write_text(
            _dumps({"config": _config(args), **fit.to_dict()}))
        (args.output_dir / "embedding.csv").write_text(_csv_with_config(args, emb.to_csv()))
    _emit(args, _dumps(summary))
    return EXIT_OK


def cmd_minkowski(args) -> int:
    params = minkowski.MetricParams(args.alpha0, args.alpha1, args.beta)
    if args.input is not None:
        values = series.parse_returns(_read(args.input)).values
        shock_sq = values if args.squared else values * values
    else:
        if args.steps < 0:
            raise UsageError("--steps must be >= 0")
        shock_sq = np.zeros(args.steps)
    path = minkowski.metric_flow(shock_sq, params, args.g0)
    recovered = minkowski.extract_shocks(path, params) if args.extract else None

    if (args.format or "csv") == "csv":
        if recovered is None:
            body = path.to_csv()
        else:
            rows = ["t,g,regime,shock_sq"]
            for t, (g, reg) in enumerate(zip(path.g_values, path.regimes)):
                extra = "" if t == 0 else f"{recovered[t - 1]:.17g}"
                rows.append(f"{t},{g:.17g},{reg.value},{extra}")
            body = "\n".join(rows) + "\n"
        _emit(args, _csv_with_config(args, body))
    else:
        out = {"config": _config(args), "g": path.g_values.tolist(),
               "regimes": [r.value for r in path.regimes]}
        if recovered is not None:
            out["shock_sq"] = recovered.tolist()
        _emit(args, _dumps(out))
    return EXIT_OK


def cmd_soliton(args) -> int:
    if not args.k > 0:
        raise UsageError("--k must be > 0")
    if not abs(args.p) < 1:
        raise UsageError("--p must satisfy |p| < 1")
    if not args.grid_h > 0 or not args.extent > 0:
        raise UsageError("--grid-h and --extent must be > 0")
    params = dynamics.SolitonParams(args.k, args.p, args.delta)
    e = args.extent
    field = dynamics.soliton_grid(params, (-e, e, -e, e), args.grid_h)
    res = dynamics.sine_gordon_residual(field, args.k)

    if args.format == "csv":
        _emit(args, _csv_with_config(args, res.to_csv(field)))
        return EXIT_OK
    summary = {
        "config": _config(args),
        "alpha": params.alpha,
        "grid_points": list(field.values.shape),
        "max_abs": res.max_abs,
        "lightcone_max_abs": dynamics.lightcone_identity_error(params, (-e, e, -e, e), args.grid_h),
    }
    if not args.no_refine:
        fine = dynamics.soliton_grid(params, (-e, e, -e, e), args.grid_h / 2)
        fine_max = dynamics.sine_gordon_residual(fine, args.k).max_abs
        summary["max_abs_half_h"] = fine_max
        summary["refinement_ratio"] = res.max_abs / fine_max if fine_max > 0 else None
    _emit(args, _dumps(summary))
    return EXIT_OK


def cmd_nahm(args) -> int:
    if not args.step > 0:
        raise UsageError("--step must be > 0")
    if args.canonical:
        T0 = dynamics.canonical_triple(args.norm)
    else:
        if not args.norm > 0:
            raise UsageError("--norm must be > 0")
        T0 = dynamics.random_triple(args.seed, args.norm)
    traj = dynamics.integrate_nahm(T0, args.s_from, args.s_to, args.step)

    if args.format == "csv":
        _emit(args, _csv_with_config(args, traj.to_csv()))
        return EXIT_OK
    drift = dynamics.lax_drift(traj, tuple(args.k))
    trace = max(abs(np.trace(m)) for state in traj.states for m in state)
    summary = {
        "config": _config(args),
        "steps": len(traj) - 1,
        "s_final": float(traj.s[-1]),
        "eigenvalue_drift": {repr(k): v for k, v in drift.items()},
        "max_eigenvalue_drift": max(drift.values()),
        "max_abs_trace": float(trace),
        "initial_is_su2": T0.is_su2,
    }
    if args.canonical:
        f = dynamics.canonical_profile(traj.final)
        exact = args.norm / (1.0 - args.norm * (traj.s[-1] - args.s_from))
        summary["profile_final"] = f
        summary["profile_exact"] = exact
        summary["profile_relative_error"] = abs(f - exact) / abs(exact)
    _emit(args, _dumps(summary))
    return EXIT_OK


COMMANDS = {
    "ingest": cmd_ingest,
    "fit": cmd_fit,
    "simulate": cmd_simulate,
    "stylized": cmd_stylized,
    "minkowski": cmd_minkowski,
    "soliton": cmd_soliton,
    "nahm": cmd_nahm,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BlowUp as exc:
        print(f"numerical blow-up: {exc}", file=sys.stderr)
        return EXIT_BLOWUP
    except DataError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_DATA
    except BrokenPipeError:  # downstream pager or head closed early
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
