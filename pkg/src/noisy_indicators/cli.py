"""Command-line front end.

Exit codes: 0 success, 1 parse error, 2 usage or dimension error,
3 invariant violation (e.g. a dominated reference set).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import io as nio
from .core import DimensionError, InvariantError, ReferenceSet, SolutionSet, true_nondominated_fraction
from .diagnostics import diagnose as build_report
from .diagnostics import noise_misinformation
from .experiment import (
    ConfigError,
    ExperimentConfig,
    NoiseModel,
    SweepError,
    apply_noise,
    export_figure_data,
    generate_test_front,
    run_noise_sweep,
)
from .igd import IGD_PLUS, igd, igd_plus, n_igd, n_igd_plus
from .r2 import DEFAULT_M, n_r2, r2
from .utility import CHEBYCHEFF, LINEAR, UtilityModel, default_ideal_point, sample_weights, utility_matrix

METRICS = ("r2", "nr2", "igd", "igd+", "nigd", "nigd+", "misinfo", "ndfrac")
NEEDS_REFERENCE = {"igd", "igd+", "nigd", "nigd+"}


class UsageError(Exception):
    pass


def _metric_list(raw: list[str] | None, have_reference: bool) -> list[str]:
    names: list[str] = []
    for item in raw or ["all"]:
        for name in item.split(","):
            name = name.strip().lower()
            if name == "all":
                names += [m for m in METRICS if have_reference or m not in NEEDS_REFERENCE]
            elif name in METRICS:
                names.append(name)
            else:
                raise UsageError(f"--metric: unknown metric {name!r}")
    missing = sorted(set(names) & NEEDS_REFERENCE) if not have_reference else []
    if missing:
        raise UsageError(f"--metric {','.join(missing)} requires --reference")
    return list(dict.fromkeys(names))


def _eta_list(raw: str) -> list[float]:
    try:
        return [float(x) for x in raw.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--eta: cannot parse {raw!r}") from None


def _load(args) -> tuple[SolutionSet, ReferenceSet | None]:
    S = nio.read_solution_set(args.solutions)
    A = nio.read_reference_set(args.reference) if getattr(args, "reference", None) else None
    if A is not None and A.dimension != S.dimension:
        raise DimensionError(
            f"reference set has dimension {A.dimension}, solution set has {S.dimension}"
        )
    return S, A


def _weights(args, D: int):
    if args.weights_file:
        W = nio.read_weights(args.weights_file)
        if W.dimension != D:
            raise DimensionError(f"weights file has dimension {W.dimension}, solution set has {D}")
        return W
    if D < 2:
        raise DimensionError("R2 metrics need at least 2 objectives")
    return sample_weights(D, args.weights_m, args.seed)


def _model(args, S: SolutionSet, A: ReferenceSet | None) -> UtilityModel:
    if args.utility == LINEAR:
        return UtilityModel.linear()
    extra = [A.targets] if A is not None else []
    # one ideal point per invocation so r2 and nr2 are directly comparable
    return UtilityModel.chebycheff(default_ideal_point(S.true_values, S.estimated_values, *extra))


def _emit(args, text: str) -> None:
    if args.out:
        nio.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _table(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    lines = []
    for key, val in rows:
        if isinstance(val, float):
            val = f"{val:.4f}"
        lines.append(f"{key:<{width}}  {val}")
    return "\n".join(lines) + "\n"


def _count_ties(U: np.ndarray) -> int:
    return int(np.sum(np.sum(U == U.min(axis=1, keepdims=True), axis=1) > 1))


def cmd_compute(args) -> int:
    S, A = _load(args)
    metrics = _metric_list(args.metric, A is not None)
    classical = S.true_values if args.classical_on == "true" else S.estimated_values
    values: dict[str, float] = {}
    info: dict = {"n_solutions": len(S), "dimension": S.dimension, "classical_on": args.classical_on}
    if {"r2", "nr2"} & set(metrics):
        W = _weights(args, S.dimension)
        model = _model(args, S, A)
        info.update(utility=model.kind, weights_m=len(W), seed=W.seed)
        if model.ideal_point is not None:
            info["ideal_point"] = list(model.ideal_point)
        if "r2" in metrics:
            values["r2"] = r2(classical, W, model).value
        if "nr2" in metrics:
            values["nr2"] = n_r2(S, W, model).value
        if args.audit_ties:
            info["tied_selections"] = _count_ties(utility_matrix(model, S.estimated_values, W))
    if A is not None:
        info.update(reference_size=len(A), normalise=args.normalise)
    for name in metrics:
        if name == "igd":
            values[name] = igd(classical, A, args.normalise).value
        elif name == "igd+":
            values[name] = igd_plus(classical, A, args.normalise).value
        elif name == "nigd":
            values[name] = n_igd(S, A, args.normalise).value
        elif name == "nigd+":
            values[name] = n_igd_plus(S, A, args.normalise, args.nigd_plus_selection).value
        elif name == "misinfo":
            values[name] = noise_misinformation(S)
        elif name == "ndfrac":
            values[name] = true_nondominated_fraction(S)
    ordered = {m: values[m] for m in metrics}

    if args.format == "json":
        text = json.dumps({"metrics": ordered, **info}, indent=2) + "\n"
    elif args.format == "csv":
        text = "metric,value\n" + "".join(f"{k},{v!r}\n" for k, v in ordered.items())
    else:
        text = _table(list(ordered.items()))
    _emit(args, text)
    return 0


def cmd_diagnose(args) -> int:
    S, A = _load(args)
    W = _weights(args, S.dimension) if S.dimension >= 2 or args.weights_file else None
    model = _model(args, S, A)
    report = build_report(S, W, model, A, plus=args.distance == IGD_PLUS)
    if args.format == "json":
        _emit(args, json.dumps(report.to_dict(), indent=2) + "\n")
        return 0
    rows: list[tuple[str, object]] = [
        ("excluded (truly non-dominated, looks dominated)", ", ".join(report.excluded_ids) or "-"),
        ("included (truly dominated, looks non-dominated)", ", ".join(report.included_ids) or "-"),
        ("noise misinformation", report.misinformation),
    ]
    if W is not None:
        rows += [
            ("selection errors", f"{len(report.selection_errors)} of {len(W)} weight vectors"),
            ("mean regret (nR2 - R2)", report.mean_regret),
        ]
    if A is not None:
        rows.append(("distance selection errors", f"{len(report.distance_errors)} of {len(A)} targets"))
    text = _table(rows)
    if report.selection_errors:
        text += "\nweight  picked  best  regret\n"
        for e in report.selection_errors[: args.limit]:
            text += f"{e.index:>6}  {e.picked_id:>6}  {e.best_id:>4}  {e.regret:.4f}\n"
        if len(report.selection_errors) > args.limit:
            text += f"... {len(report.selection_errors) - args.limit} more\n"
    _emit(args, text)
    return 0


def _sweep_config(args) -> ExperimentConfig:
    base = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from None
        if not isinstance(base, dict):
            raise ConfigError("config", "must be a JSON object")
    overrides = {
        "eta_values": _eta_list(args.eta) if args.eta else None,
        "replications": args.reps,
        "m_weights": args.weights_m,
        "base_seed": args.seed,
        "n_solutions": args.n_solutions,
        "reference_set_size": args.reference_size,
        "utilities": args.utility,
        "concave": True if args.concave else None,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(base)


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    report = run_noise_sweep(config)
    if args.format == "json":
        text = report.to_json()
    elif args.format == "table":
        cols = ["eta"] + report.columns
        lines = ["  ".join(f"{c:>9}" for c in cols)]
        for row in report.rows:
            lines.append("  ".join(f"{row[c]:>9.4f}" for c in cols))
        text = "\n".join(lines) + "\n"
    else:
        text = report.to_csv()
    _emit(args, text)
    return 0


def cmd_figure_data(args) -> int:
    if args.solutions:
        S, A = _load(args)
    else:
        truths, A = generate_test_front(args.n_solutions, args.seed)
        S = SolutionSet(truths, apply_noise(truths, NoiseModel(args.eta, args.seed)))
    W = _weights(args, S.dimension) if S.dimension >= 2 else None
    bundle = export_figure_data(args.out, S, A, W)
    if not args.solutions:
        nio.write_solution_set(bundle.directory / "solutions.csv", S)
        nio.write_reference_set(bundle.directory / "reference.csv", A)
    for name, meta in bundle.manifest["files"].items():
        print(f"{bundle.directory / name}  ({meta['rows']} rows)")
    return 0


def cmd_validate(args) -> int:
    S, A = _load(args)
    lines = [f"solutions: {len(S)} x {S.dimension} ok"]
    if A is not None:
        lines.append(f"reference: {len(A)} targets, mutually non-dominated, ok")
    if args.weights_file:
        W = _weights(args, S.dimension)
        lines.append(f"weights: {len(W)} vectors on the simplex, ok")
    print("\n".join(lines))
    return 0


def _add_weight_flags(p):
    p.add_argument("--utility", choices=[LINEAR, CHEBYCHEFF], default=LINEAR)
    p.add_argument("--weights-m", type=int, default=DEFAULT_M, help="number of sampled weight vectors")
    p.add_argument("--weights-file", help="CSV with columns l1..lD; overrides sampling")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noisy-indicators",
        description="Selection-aware quality indicators for noisy multi-objective optimisation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute metrics for a solution set")
    p.add_argument("solutions", help="solution set (CSV id,t1..tD,r1..rD or JSON)")
    p.add_argument("--reference", help="reference set CSV (a1..aD); needed by IGD metrics")
    p.add_argument("--metric", action="append", help=f"comma list from {', '.join(METRICS)}, all")
    _add_weight_flags(p)
    p.add_argument("--normalise", choices=["sum", "mean"], default="sum")
    p.add_argument("--classical-on", choices=["true", "estimated"], default="true",
                   help="values the classical r2/igd/igd+ are computed on")
    p.add_argument("--nigd-plus-selection", choices=[IGD_PLUS, "euclidean"], default=IGD_PLUS)
    p.add_argument("--audit-ties", action="store_true", help="report weight vectors with tied selections")
    p.add_argument("--format", choices=["json", "csv", "table"], default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("diagnose", help="error taxonomy: exclusion, inclusion, selection")
    p.add_argument("solutions")
    p.add_argument("--reference")
    _add_weight_flags(p)
    p.add_argument("--distance", choices=[IGD_PLUS, "euclidean"], default=IGD_PLUS,
                   help="distance for per-target selection errors")
    p.add_argument("--limit", type=int, default=20, help="selection-error rows shown in table output")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("sweep", help="noise sweep over eta values")
    p.add_argument("--config", help="flat JSON with ExperimentConfig fields")
    p.add_argument("--eta", help="comma-separated noise half-widths")
    p.add_argument("--reps", type=int)
    p.add_argument("--weights-m", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-solutions", type=int)
    p.add_argument("--reference-size", type=int)
    p.add_argument("--utility", action="append", choices=[LINEAR, CHEBYCHEFF])
    p.add_argument("--concave", action="store_true")
    p.add_argument("--format", choices=["json", "csv", "table"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure-data", help="export data for redrawing metric geometry")
    p.add_argument("solutions", nargs="?", help="solution set; omitted = generate a noisy test front")
    p.add_argument("--reference")
    _add_weight_flags(p)
    p.set_defaults(weights_m=200)
    p.add_argument("--eta", type=float, default=0.1, help="noise for the generated test front")
    p.add_argument("--n-solutions", type=int, default=10)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_figure_data)

    p = sub.add_parser("validate", help="check input files without computing metrics")
    p.add_argument("solutions")
    p.add_argument("--reference")
    p.add_argument("--weights-file")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except nio.ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (DimensionError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3
    except SweepError as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
