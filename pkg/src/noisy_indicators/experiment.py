"""Noise sweep: how classical and selection-aware metrics react to noise.

A synthetic convex front is disturbed by uniform box noise of half-width eta.
For every (eta, replication) cell the classical metrics are computed on the
*observed* values, as an algorithm reporting noisy estimates would be judged,
and the selection-aware ones on the same set.

Seeding: every random draw comes from ``np.random.SeedSequence`` with entropy
``(base_seed, stream, replication[, eta_index])``. The front and the weight
vectors depend only on the replication, so the same truths and the same
weights are reused across all eta values, and any single cell can be
recomputed in isolation.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import io as nio
from .core import DimensionError, ReferenceSet, SolutionSet, as_points, true_nondominated_fraction
from .diagnostics import noise_misinformation
from .igd import igd_plus, n_igd_plus
from .r2 import DEFAULT_M, linear_2d_envelope, n_r2, r2
from .utility import (
    CHEBYCHEFF,
    LINEAR,
    UtilityModel,
    WeightSampleSet,
    default_ideal_point,
    resolve_model,
    sample_weights,
    utility_matrix,
)

log = logging.getLogger(__name__)

STREAM_FRONT, STREAM_WEIGHTS, STREAM_NOISE = 0, 1, 2


def derive_seed(base_seed: int, stream: int, replication: int, eta_index: int | None = None) -> int:
    """Deterministic 63-bit seed for one random stream of one sweep cell."""
    entropy = [int(base_seed), stream, int(replication)]
    if eta_index is not None:
        entropy.append(int(eta_index))
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1]))


@dataclass(frozen=True)
class NoiseModel:
    """Uniform noise in ``[-eta, eta]^D`` added independently to each objective."""

    eta: float
    seed: int = 0
    kind: str = "uniform_box"

    def __post_init__(self):
        if self.kind != "uniform_box":
            raise ValueError(f"unsupported noise kind {self.kind!r}")
        if not np.isfinite(self.eta) or self.eta < 0:
            raise ValueError(f"noise half-width must be >= 0, got {self.eta}")


def apply_noise(truth, model: NoiseModel) -> np.ndarray:
    T = as_points(truth, "truth")
    if model.eta == 0:
        return T.copy()
    rng = np.random.default_rng(model.seed)
    return T + rng.uniform(-model.eta, model.eta, size=T.shape)


def front_f2(f1, concave: bool = False):
    """Second objective on the unit test front for first objective ``f1``."""
    f1 = np.asarray(f1, dtype=float)
    return 1.0 - f1**2 if concave else 1.0 - np.sqrt(f1)


def generate_test_front(
    n: int,
    seed: int,
    reference_size: int = 50,
    scale: float = 1.0,
    concave: bool = False,
    off_front_fraction: float = 0.3,
    max_offset: float = 0.05,
) -> tuple[np.ndarray, ReferenceSet]:
    """Sample ``n`` true objective vectors on or just above a 2-D test front.

    The default front ``f2 = 1 - sqrt(f1)`` is convex; ``concave=True`` uses
    ``f2 = 1 - f1**2`` instead. A random share of the points is pushed up in
    the second objective by at most ``max_offset`` so not every solution is
    Pareto-optimal. The reference set holds ``reference_size`` evenly spaced
    points on the front, endpoints included. Everything is scaled by ``scale``.
    """
    if n < 2:
        raise ValueError(f"need at least 2 solutions, got {n}")
    if reference_size < 2:
        raise ValueError(f"need at least 2 reference points, got {reference_size}")
    rng = np.random.default_rng(seed)
    f1 = np.sort(rng.uniform(0.0, 1.0, n))
    f2 = front_f2(f1, concave)
    bumped = rng.uniform(size=n) < off_front_fraction
    f2 = f2 + bumped * rng.uniform(0.0, max_offset, n)
    a1 = np.linspace(0.0, 1.0, reference_size)
    A = np.column_stack([a1, front_f2(a1, concave)])
    return scale * np.column_stack([f1, f2]), ReferenceSet(scale * A)


@dataclass(frozen=True)
class ExperimentConfig:
    eta_values: tuple[float, ...] = (0.01, 0.05, 0.1, 0.2)
    replications: int = 100
    n_solutions: int = 10
    m_weights: int = DEFAULT_M
    reference_set_size: int = 50
    base_seed: int = 0
    utilities: tuple[str, ...] = (LINEAR, CHEBYCHEFF)
    scale: float = 1.0
    concave: bool = False

    def __post_init__(self):
        object.__setattr__(self, "eta_values", tuple(float(e) for e in self.eta_values))
        object.__setattr__(self, "utilities", tuple(self.utilities))
        for name in ("replications", "n_solutions", "m_weights", "reference_set_size"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(name, "must be >= 1")
        if self.n_solutions < 2:
            raise ConfigError("n_solutions", "must be >= 2")
        if self.reference_set_size < 2:
            raise ConfigError("reference_set_size", "must be >= 2")
        etas = self.eta_values
        if not etas:
            raise ConfigError("eta_values", "must not be empty")
        if any(e < 0 or not np.isfinite(e) for e in etas):
            raise ConfigError("eta_values", "must be finite and non-negative")
        if any(b <= a for a, b in zip(etas, etas[1:])):
            raise ConfigError("eta_values", "must be strictly increasing")
        if not self.utilities or any(u not in (LINEAR, CHEBYCHEFF) for u in self.utilities):
            raise ConfigError("utilities", f"must be a non-empty subset of {LINEAR!r}, {CHEBYCHEFF!r}")
        if not self.scale > 0:
            raise ConfigError("scale", "must be > 0")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        for key in d:
            if key not in known:
                raise ConfigError(key, "unknown field")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError("?", str(exc)) from None

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


class SweepError(RuntimeError):
    def __init__(self, eta: float, replication: int, cause: Exception):
        self.eta = eta
        self.replication = replication
        super().__init__(f"eta={eta}, replication={replication}: {cause}")


def metric_columns(config: ExperimentConfig) -> list[str]:
    cols = []
    if LINEAR in config.utilities:
        cols += ["R2", "nR2"]
    if CHEBYCHEFF in config.utilities:
        cols += ["R2c", "nR2c"]
    cols += ["IGD+", "nIGD+", "misinfo", "ndfrac", "R2_true", "IGD+_true"]
    if LINEAR not in config.utilities:
        cols.remove("R2_true")
    return cols


@dataclass(frozen=True)
class Cell:
    """Inputs of one (eta, replication) cell, regenerated from seeds alone."""

    solutions: SolutionSet
    reference: ReferenceSet
    weights: WeightSampleSet
    chebycheff: UtilityModel


def build_cell(config: ExperimentConfig, eta_index: int, replication: int) -> Cell:
    seed = config.base_seed
    truths, A = generate_test_front(
        config.n_solutions,
        derive_seed(seed, STREAM_FRONT, replication),
        config.reference_set_size,
        config.scale,
        config.concave,
    )
    noise = NoiseModel(config.eta_values[eta_index], derive_seed(seed, STREAM_NOISE, replication, eta_index))
    S = SolutionSet(truths, apply_noise(truths, noise))
    W = sample_weights(2, config.m_weights, derive_seed(seed, STREAM_WEIGHTS, replication))
    # anchored at the front's ideal point so the scale does not drift with eta
    cheb = UtilityModel.chebycheff(default_ideal_point(A.targets))
    return Cell(S, A, W, cheb)


def evaluate_cell(cell: Cell, config: ExperimentConfig) -> dict[str, float]:
    S, A, W = cell.solutions, cell.reference, cell.weights
    out = {}
    if LINEAR in config.utilities:
        lin = UtilityModel.linear()
        out["R2"] = r2(S.estimated_values, W, lin).value
        out["nR2"] = n_r2(S, W, lin).value
        out["R2_true"] = r2(S.true_values, W, lin).value
    if CHEBYCHEFF in config.utilities:
        out["R2c"] = r2(S.estimated_values, W, cell.chebycheff).value
        out["nR2c"] = n_r2(S, W, cell.chebycheff).value
    out["IGD+"] = igd_plus(S.estimated_values, A).value
    out["nIGD+"] = n_igd_plus(S, A).value
    out["IGD+_true"] = igd_plus(S.true_values, A).value
    out["misinfo"] = noise_misinformation(S)
    out["ndfrac"] = true_nondominated_fraction(S)
    return out


def run_cell(config: ExperimentConfig, eta_index: int, replication: int) -> dict[str, float]:
    try:
        return evaluate_cell(build_cell(config, eta_index, replication), config)
    except Exception as exc:
        raise SweepError(config.eta_values[eta_index], replication, exc) from exc


@dataclass
class MetricReport:
    """Per-eta means and sample standard deviations over replications."""

    columns: list[str]
    rows: list[dict[str, float]] = field(default_factory=list)
    config: ExperimentConfig | None = None

    def header(self) -> list[str]:
        h = ["eta"]
        for c in self.columns:
            h += [c, f"{c}_std"]
        return h

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header())
        for row in self.rows:
            w.writerow([repr(float(row[h])) for h in self.header()])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config) if self.config else None,
            "columns": self.columns,
            "rows": self.rows,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def column(self, name: str) -> list[float]:
        return [row[name] for row in self.rows]


def run_noise_sweep(config: ExperimentConfig, replication_order=None) -> MetricReport:
    """Compute every metric for every eta and replication, then aggregate.

    ``replication_order`` only changes the loop order; results are keyed by
    replication index, so the report does not depend on it.
    """
    cols = metric_columns(config)
    order = list(range(config.replications)) if replication_order is None else list(replication_order)
    if sorted(order) != list(range(config.replications)):
        raise ValueError("replication_order must be a permutation of range(replications)")
    report = MetricReport(cols, config=config)
    for ei, eta in enumerate(config.eta_values):
        cells = {}
        for rep in order:
            cells[rep] = run_cell(config, ei, rep)
        log.debug("eta=%g: %d replications done", eta, len(cells))
        table = np.array([[cells[rep][c] for c in cols] for rep in range(config.replications)])
        means = table.mean(axis=0)
        stds = table.std(axis=0, ddof=1) if config.replications > 1 else np.zeros(len(cols))
        row = {"eta": eta}
        for c, mu, sd in zip(cols, means, stds):
            row[c] = float(mu)
            row[f"{c}_std"] = float(sd)
        report.rows.append(row)
    return report


def _ray_directions(W: np.ndarray) -> np.ndarray:
    """Unit direction of the Chebycheff contour corners for each weight vector.

    Corners satisfy ``lam_k * (f_k - z_k) = const``, i.e. direction ``1/lam``;
    scaled by the product of all weights so zero weights stay finite.
    """
    D = W.shape[1]
    d = np.ones_like(W)
    for k in range(D):
        for j in range(D):
            if j != k:
                d[:, k] *= W[:, j]
    norm = np.linalg.norm(d, axis=1, keepdims=True)
    d = np.where(norm > 0, d / np.where(norm > 0, norm, 1.0), 1.0 / np.sqrt(D))
    return d


def _iso_slope(lam: float) -> float:
    # slope df2/df1 of the linear utility isoline for weight (lam, 1 - lam)
    return -lam / (1.0 - lam) if lam < 1.0 else -np.inf


@dataclass
class FigureBundle:
    directory: Path
    manifest: dict
    results: dict


def export_figure_data(
    out_dir,
    S: SolutionSet,
    A: ReferenceSet | None = None,
    weights: WeightSampleSet | None = None,
    ideal_point=None,
) -> FigureBundle:
    """Write the data needed to redraw the metric-geometry figures.

    Files (all CSV, described in ``manifest.json``):

    * ``points.csv`` -- true/observed pairs and the length of the segment joining them.
    * ``r2_linear_selections.csv`` -- per weight vector, the solution picked on the
      observed values with perceived and true utility.
    * ``r2_linear_hull.csv`` (2-D only) -- observed lower-envelope pieces with
      the weight range and isoline slopes that favour each solution.
    * ``chebycheff_rays.csv`` -- ray direction per weight vector, the picked and
      truly best solution.
    * ``igd_plus_pairs.csv`` / ``nigd_plus_pairs.csv`` -- target-to-solution
      matchings on observed and on true values (one row per target).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    D = S.dimension
    manifest: dict = {"dimension": D, "n_solutions": len(S), "files": {}}
    results: dict = {}
    tk = [f"t{k}" for k in range(1, D + 1)]
    rk = [f"r{k}" for k in range(1, D + 1)]

    def emit(name, description, header, rows):
        rows = list(rows)
        nio.write_csv(out / name, header, rows)
        manifest["files"][name] = {"description": description, "rows": len(rows), "columns": header}

    seg = np.linalg.norm(S.estimated_values - S.true_values, axis=1)
    emit(
        "points.csv",
        "true and observed objective vectors joined by a segment",
        ["id", *tk, *rk, "segment_length"],
        ([sid, *map(float, t), *map(float, r), float(L)]
         for sid, t, r, L in zip(S.ids, S.true_values, S.estimated_values, seg)),
    )

    if weights is not None:
        if weights.dimension != D:
            raise _dimension_error("weights", weights.dimension, D)
        W = weights.samples
        lk = [f"l{k}" for k in range(1, D + 1)]
        lin = UtilityModel.linear()
        nr = n_r2(S, weights, lin)
        results["nR2"] = nr
        results["R2"] = r2(S.estimated_values, weights, lin, ids=S.ids)
        perceived = results["R2"].realised
        emit(
            "r2_linear_selections.csv",
            "per weight vector: solution picked on observed values, perceived and true utility",
            ["weight_index", *lk, "selected_id", "perceived_utility", "true_utility"],
            ([i, *map(float, W[i]), S.ids[j], float(p), float(u)]
             for i, (j, p, u) in enumerate(zip(nr.selected.tolist(), perceived, nr.realised))),
        )
        if D == 2:
            pieces = linear_2d_envelope(S.estimated_values)
            emit(
                "r2_linear_hull.csv",
                "observed lower-envelope pieces: weight range [lambda_lo, lambda_hi] favouring each solution",
                ["id", *rk, *tk, "lambda_lo", "lambda_hi", "iso_slope_lo", "iso_slope_hi"],
                ([S.ids[j], *map(float, S.estimated_values[j]), *map(float, S.true_values[j]),
                  lo, hi, _iso_slope(lo), _iso_slope(hi)] for j, lo, hi in pieces),
            )

        extra = [A.targets] if A is not None else []
        if ideal_point is None:
            ideal_point = default_ideal_point(S.true_values, S.estimated_values, *extra)
        cheb = resolve_model(UtilityModel.chebycheff(ideal_point))
        ncr = n_r2(S, weights, cheb)
        results["nR2c"] = ncr
        best = np.argmin(utility_matrix(cheb, S.true_values, W), axis=1)
        dirs = _ray_directions(W)
        z = [float(x) for x in cheb.ideal_point]
        zk = [f"z{k}" for k in range(1, D + 1)]
        dk = [f"d{k}" for k in range(1, D + 1)]
        emit(
            "chebycheff_rays.csv",
            "per weight vector: ray from the ideal point, solution picked on observed values and truly best one",
            ["weight_index", *lk, *zk, *dk, "selected_id", "best_true_id", "true_utility"],
            ([i, *map(float, W[i]), *z, *map(float, dirs[i]), S.ids[j], S.ids[b], float(u)]
             for i, (j, b, u) in enumerate(zip(ncr.selected.tolist(), best.tolist(), ncr.realised))),
        )

    if A is not None:
        if A.dimension != D:
            raise _dimension_error("reference set", A.dimension, D)
        ak = [f"a{k}" for k in range(1, D + 1)]
        classical = igd_plus(S.estimated_values, A, ids=S.ids)
        noisy = n_igd_plus(S, A)
        results["IGD+"] = classical
        results["nIGD+"] = noisy
        emit(
            "igd_plus_pairs.csv",
            "IGD+ on observed values: target matched to the nearest observed vector",
            ["target_index", *ak, "selected_id", *rk, "distance"],
            ([i, *map(float, A.targets[i]), S.ids[j], *map(float, S.estimated_values[j]), float(d)]
             for i, (j, d) in enumerate(zip(classical.selected.tolist(), classical.realised))),
        )
        emit(
            "nigd_plus_pairs.csv",
            "nIGD+: target matched by observed values, charged against the true vector",
            ["target_index", *ak, "selected_id", *tk, "distance"],
            ([i, *map(float, A.targets[i]), S.ids[j], *map(float, S.true_values[j]), float(d)]
             for i, (j, d) in enumerate(zip(noisy.selected.tolist(), noisy.realised))),
        )

    manifest["metrics"] = {k: float(v.value) for k, v in results.items()}
    nio.write_atomic(out / "manifest.json", json.dumps(manifest, indent=2) + "\n")
    return FigureBundle(out, manifest, results)


def _dimension_error(what: str, got: int, want: int) -> DimensionError:
    return DimensionError(f"{what} has dimension {got}, solution set has {want}")


__all__ = [
    "NoiseModel",
    "ExperimentConfig",
    "MetricReport",
    "apply_noise",
    "generate_test_front",
    "run_noise_sweep",
    "export_figure_data",
    "derive_seed",
]
