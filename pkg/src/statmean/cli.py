"""Command-line entry point exposing every computation as a subcommand.

Outputs are machine readable: JSON for single results, CSV for curves, always
accompanied by a run manifest (subcommand, parameters, library version, seed,
timing).  JSON results embed the manifest; CSV results carry it as a leading
'# ' comment line.  Exit codes: 0 success, 1 usage, 2 validation error,
3 numerical-accuracy error.

Angles are accepted as plain radians or as multiples of pi with a literal
"pi" suffix ("0.5pi", "-pi"), avoiding decimal drift in arc definitions.  A
--config JSON file may hold default flag values; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .errors import AccuracyError, NearSingularError, StatmeanError, ValidationError
from .spectra import classify, load_measure, parse_angle

CSV_MANIFEST_PREFIX = "# "


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _parse_grid(text):
    """'8:48:4' -> range(8, 49, 4); '8,12,16' -> explicit list."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) == 2:
            parts.append(1)
        return list(range(parts[0], parts[1] + 1, parts[2]))
    return [int(p) for p in text.split(",")]


def _parse_arcs(text):
    from .deterministic import ArcRegion
    arcs = []
    for part in text.split(","):
        lo, hi = part.split(":")
        arcs.append((parse_angle(lo), parse_angle(hi)))
    return ArcRegion(tuple(arcs))


def _threads():
    raw = os.environ.get("STATMEAN_THREADS")
    return max(1, int(raw)) if raw else None


def build_parser() -> _Parser:
    p = _Parser(prog="statmean", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="JSON file with default flag values")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp, model=True, out=True):
        if model:
            sp.add_argument("--model", help="model/measure JSON path")
        if out:
            sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("classify", help="regularity/memory classification")
    common(sp)

    sp = sub.add_parser("covariance", help="covariance sequence r(0..n)")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("blue", help="optimal weights and variance")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--precision", choices=("double", "dd"), default="double")

    sp = sub.add_parser("weights", help="estimator weight vector")
    sp.add_argument("--estimator",
                    choices=("lse", "parabolic", "adenstedt", "blue", "pseudo-best"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--model", help="design model (blue / pseudo-best)")
    sp.add_argument("--out")

    sp = sub.add_parser("variance", help="estimator variance under a measure")
    common(sp)
    sp.add_argument("--estimator",
                    choices=("lse", "parabolic", "adenstedt", "blue"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--alpha", type=float)

    sp = sub.add_parser("christoffel", help="reciprocal kernel curve at a probe")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--probe", default="1.0", help="complex probe, e.g. '1.0' or '0.3+0.1j'")

    sp = sub.add_parser("efficiency", help="closed-form and finite-sample efficiencies")
    sp.add_argument("--law", choices=("eq7.8", "eq3.3", "beran-kunsch", "samarov-taqqu"))
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--finite", action="store_true")
    sp.add_argument("--estimator", choices=("lse", "parabolic", "adenstedt"))
    sp.add_argument("--model")
    sp.add_argument("--n-grid", dest="n_grid")
    sp.add_argument("--out")

    sp = sub.add_parser("asymptote", help="limit constants of the variance laws")
    sp.add_argument("--law", choices=("general", "short-memory", "underestimation"),
                    default="general")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--g0", type=float, default=1.0)
    sp.add_argument("--model")
    sp.add_argument("--out")

    sp = sub.add_parser("chebyshev", help="minimax polynomial constants on arc regions")
    sp.add_argument("--arcs", help="e.g. '0.5pi:pi,-pi:-0.5pi'")
    sp.add_argument("--n-grid", dest="n_grid", help="e.g. '8:48:4'")
    sp.add_argument("--out")

    sp = sub.add_parser("decay", help="exponential-decay diagnostics of the variance")
    common(sp)
    sp.add_argument("--n-grid", dest="n_grid")
    sp.add_argument("--precision", choices=("auto", "double", "dd"), default="auto")

    sp = sub.add_parser("simulate", help="Monte Carlo variance cross-check")
    common(sp)
    sp.add_argument("--estimator",
                    choices=("lse", "parabolic", "adenstedt", "blue"))
    sp.add_argument("--n", type=int)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--reps", type=int, default=100000)
    sp.add_argument("--seed", type=int, default=0)

    for child in sub.choices.values():
        child.add_argument("--config", help=argparse.SUPPRESS)
    return p


REQUIRED_FLAGS = {
    "classify": ("model",),
    "covariance": ("model", "n"),
    "blue": ("model", "n"),
    "weights": ("estimator", "n"),
    "variance": ("model", "estimator", "n"),
    "christoffel": ("model", "n"),
    "efficiency": (),
    "asymptote": (),
    "chebyshev": ("arcs", "n_grid"),
    "decay": ("model", "n_grid"),
    "simulate": ("model", "estimator", "n"),
}


def _check_required(args):
    missing = [f"--{name.replace('_', '-')}" for name in REQUIRED_FLAGS[args.subcommand]
               if getattr(args, name, None) is None]
    if missing:
        raise _UsageError(f"{args.subcommand} requires {', '.join(missing)}")


def _estimator_weights(name, n, alpha, measure):
    from . import estimators, toeplitz
    if name == "lse":
        return estimators.lse_weights(n)
    if name == "parabolic":
        return estimators.parabolic_weights(n)
    if name == "adenstedt":
        if alpha is None:
            raise ValidationError("adenstedt weights need --alpha")
        return estimators.adenstedt_weights(n, alpha)
    if name in ("blue", "pseudo-best"):
        if measure is None:
            raise ValidationError(f"{name} weights need --model")
        w, _ = toeplitz.blue_solve(toeplitz.system_for(measure, n))
        return w
    raise ValidationError(f"unknown estimator {name!r}")


def _run(args, manifest):
    from . import deterministic, efficiency, estimators, opuc, simulate, toeplitz
    cmd = args.subcommand

    if cmd == "classify":
        measure = load_measure(args.model)
        rec = classify(measure)
        szego = rec.szego_integral
        return {"determinism": rec.determinism, "memory": rec.memory,
                "origin_exponent": rec.origin_exponent,
                "szego_integral": None if not rec.nondeterministic else szego,
                "nondeterministic": rec.nondeterministic}, None

    if cmd == "covariance":
        from .covariance import covariance_sequence
        measure = load_measure(args.model)
        cov = covariance_sequence(measure, args.n)
        if args.format == "json":
            return {"n": args.n, "provenance": cov.provenance,
                    "values": cov.values.tolist()}, None
        rows = [("k", "r")] + [(k, repr(float(v))) for k, v in enumerate(cov.values)]
        return None, rows

    if cmd == "blue":
        measure = load_measure(args.model)
        w, v = toeplitz.blue_solve(toeplitz.system_for(measure, args.n,
                                                       precision=args.precision))
        return {"n": args.n, "variance": float(v), "weights": w.coefficients.tolist()}, None

    if cmd == "weights":
        measure = load_measure(args.model) if args.model else None
        w = _estimator_weights(args.estimator, args.n, args.alpha, measure)
        rows = [("k", "c")] + [(k, repr(float(c))) for k, c in enumerate(w.coefficients)]
        return None, rows

    if cmd == "variance":
        measure = load_measure(args.model)
        w = _estimator_weights(args.estimator, args.n, args.alpha,
                               measure if args.estimator == "blue" else None)
        v = estimators.variance_under(w, measure)
        return {"n": args.n, "estimator": args.estimator, "variance": v}, None

    if cmd == "christoffel":
        measure = load_measure(args.model)
        probe = complex(args.probe)
        state = opuc.szego_recursion(measure, args.n, probes=(probe,))
        curve = opuc.christoffel_curve(state, probe)
        rows = [("m", "lambda")] + [(m, repr(float(v))) for m, v in enumerate(curve)]
        return None, rows

    if cmd == "efficiency":
        if args.finite:
            measure = load_measure(args.model)
            grid = _parse_grid(args.n_grid) if args.n_grid else [args.n]
            values = {}
            for n in grid:
                w = _estimator_weights(args.estimator, n, args.alpha, None)
                values[n] = efficiency.efficiency_finite(w, measure).value
            return {"estimator": args.estimator, "efficiency": values}, None
        if args.law == "eq7.8":
            return {"value": efficiency.overestimation_efficiency(args.alpha, args.beta)}, None
        if args.law == "eq3.3":
            return {"value": efficiency.lse_asymptotic_efficiency(args.alpha)}, None
        if args.law == "beran-kunsch":
            return {"value": efficiency.beran_kunsch_expansion(args.alpha)}, None
        if args.law == "samarov-taqqu":
            return {"value": efficiency.lse_efficiency_exact_falpha(args.n, args.alpha)}, None
        raise ValidationError("efficiency needs --finite or --law")

    if cmd == "asymptote":
        if args.law == "general":
            return {"constant": efficiency.general_class_asymptote(args.alpha, args.g0)}, None
        if args.law == "short-memory":
            measure = load_measure(args.model)
            return {"constant": efficiency.short_memory_variance_limit(measure.density)}, None
        measure = load_measure(args.model)
        return {"constant": efficiency.underestimation_limit(int(args.alpha),
                                                             measure.density)}, None

    if cmd == "chebyshev":
        region = _parse_arcs(args.arcs)
        grid = _parse_grid(args.n_grid)
        tau, curve = deterministic.chebyshev_constant_estimate(region, grid)
        rows = [("n", "deviation", "tau_n", "converged")]
        rows += [(s.order, repr(s.deviation), repr(s.constant_estimate), s.converged)
                 for s in curve]
        manifest["tau_estimate"] = tau
        return None, rows

    if cmd == "decay":
        measure = load_measure(args.model)
        rep = deterministic.decay_rate_from_variances(measure, _parse_grid(args.n_grid),
                                                      precision=args.precision)
        return {"rho": rep.rho, "neutrality": rep.neutrality,
                "precision": rep.precision, "warning": rep.warning,
                "orders": rep.orders.tolist(),
                "sigmas": [float(s) for s in rep.sigmas]}, None

    if cmd == "simulate":
        measure = load_measure(args.model)
        w = _estimator_weights(args.estimator, args.n, args.alpha,
                               measure if args.estimator == "blue" else None)
        mc = simulate.monte_carlo_variance(w, measure, args.reps, args.seed)
        analytic = estimators.variance_under(w, measure)
        manifest["seed"] = args.seed
        return {"estimate": mc.estimate, "standard_error": mc.standard_error,
                "analytic": analytic, "generator": mc.generator,
                "replicates": args.reps}, None

    raise ValidationError(f"unknown subcommand {cmd!r}")


def _emit(payload, rows, manifest, out_path):
    if payload is not None:
        text = json.dumps({"manifest": manifest, "result": payload}, indent=2,
                          allow_nan=False, default=float) + "\n"
    else:
        lines = [CSV_MANIFEST_PREFIX + json.dumps(manifest, default=float)]
        lines += [",".join(str(c) for c in row) for row in rows]
        text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        # config supplies values for flags not explicitly present on the line
        if args.config:
            with open(args.config) as fh:
                defaults = json.load(fh)
            explicit = {tok[2:].split("=")[0].replace("-", "_")
                        for tok in argv if tok.startswith("--")}
            for key, value in defaults.items():
                key = key.replace("-", "_")
                if key not in explicit and hasattr(args, key):
                    setattr(args, key, value)
        _check_required(args)
    except _UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        parser.print_usage(sys.stderr)
        return 1

    manifest = {
        "subcommand": args.subcommand,
        "parameters": {k: v for k, v in vars(args).items()
                       if k not in ("subcommand", "config", "out") and v is not None},
        "version": __version__,
        "threads": _threads() or 1,
    }
    started = time.time()
    try:
        payload, rows = _run(args, manifest)
    except ValidationError as err:
        sys.stderr.write(f"validation error: {err}\n")
        return 2
    except (AccuracyError, NearSingularError) as err:
        sys.stderr.write(f"numerical-accuracy error: {err}\n")
        return 3
    except _UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return 1
    except StatmeanError as err:
        sys.stderr.write(f"error: {err}\n")
        return 2
    manifest["elapsed_seconds"] = round(time.time() - started, 6)
    _emit(payload, rows, manifest, getattr(args, "out", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
