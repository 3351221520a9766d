"""IGD, IGD+ and their selection-aware variants nIGD and nIGD+.

Each reference target stands for a decision maker who wants that point. In
the noisy variants the decision maker picks the solution whose *estimated*
vector is closest, and the metric charges the distance to its *true* vector.

Values are sums over targets by default; ``normalise="mean"`` divides by the
number of targets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, ReferenceSet, SolutionSet, as_points

EUCLIDEAN = "euclidean"
IGD_PLUS = "igd+"


def euclidean_distances(targets, points) -> np.ndarray:
    """``(m, n)`` matrix of Euclidean distances from each target to each point."""
    diff = as_points(points)[None, :, :] - as_points(targets)[:, None, :]
    return np.sqrt(np.sum(diff * diff, axis=2))


def igd_plus_distances(targets, points) -> np.ndarray:
    """``(m, n)`` matrix of one-sided IGD+ distances.

    Only the objectives in which a point is worse than the target count, so a
    point that weakly dominates a target is at distance zero from it.
    """
    diff = np.maximum(as_points(points)[None, :, :] - as_points(targets)[:, None, :], 0.0)
    return np.sqrt(np.sum(diff * diff, axis=2))


def igd_plus_distance(a, t) -> float:
    return float(igd_plus_distances(np.atleast_2d(a), np.atleast_2d(t))[0, 0])


_DISTANCES = {EUCLIDEAN: euclidean_distances, IGD_PLUS: igd_plus_distances}


@dataclass(frozen=True)
class IGDResult:
    """Metric value with the solution matched to every target.

    ``selected[i]`` indexes ``ids``; ``realised[i]`` is the distance charged
    for target i.
    """

    value: float
    ids: tuple[str, ...]
    selected: np.ndarray
    realised: np.ndarray
    normalise: str = "sum"

    def per_target(self) -> list[dict]:
        return [
            {"target_index": i, "selected_id": self.ids[j], "distance": float(d)}
            for i, (j, d) in enumerate(zip(self.selected.tolist(), self.realised))
        ]

    def to_dict(self, per_target: bool = False) -> dict:
        out = {"value": float(self.value), "targets": int(self.realised.size), "normalise": self.normalise}
        if per_target:
            out["per_target"] = self.per_target()
        return out


def _reduce(realised: np.ndarray, normalise: str) -> float:
    if normalise == "sum":
        return float(np.sum(realised))
    if normalise == "mean":
        return float(np.mean(realised))
    raise ValueError(f"normalise must be 'sum' or 'mean', got {normalise!r}")


def _targets(A) -> np.ndarray:
    return A.targets if isinstance(A, ReferenceSet) else ReferenceSet(A).targets


def _check(A: np.ndarray, P: np.ndarray) -> None:
    if A.shape[1] != P.shape[1]:
        raise DimensionError(f"reference set has dimension {A.shape[1]}, points have {P.shape[1]}")


def _classical(points, A, metric: str, normalise: str, ids) -> IGDResult:
    P = as_points(points, "points")
    T = _targets(A)
    _check(T, P)
    dist = _DISTANCES[metric](T, P)
    selected = np.argmin(dist, axis=1)
    realised = dist[np.arange(T.shape[0]), selected]
    if ids is None:
        ids = [f"s{i}" for i in range(P.shape[0])]
    return IGDResult(_reduce(realised, normalise), tuple(map(str, ids)), selected, realised, normalise)


def _noisy(S: SolutionSet, A, select_metric: str, score_metric: str, normalise: str) -> IGDResult:
    T = _targets(A)
    _check(T, S.true_values)
    selected = np.argmin(_DISTANCES[select_metric](T, S.estimated_values), axis=1)
    realised = _DISTANCES[score_metric](T, S.true_values)[np.arange(T.shape[0]), selected]
    return IGDResult(_reduce(realised, normalise), S.ids, selected, realised, normalise)


def igd(points, A: ReferenceSet, normalise: str = "sum", ids=None) -> IGDResult:
    """Classical IGD: Euclidean distance from each target to its nearest point."""
    return _classical(points, A, EUCLIDEAN, normalise, ids)


def igd_plus(points, A: ReferenceSet, normalise: str = "sum", ids=None) -> IGDResult:
    """Classical IGD+ with the one-sided distance."""
    return _classical(points, A, IGD_PLUS, normalise, ids)


def n_igd(S: SolutionSet, A: ReferenceSet, normalise: str = "sum") -> IGDResult:
    """nIGD: nearest by estimated values, charged the true Euclidean distance."""
    return _noisy(S, A, EUCLIDEAN, EUCLIDEAN, normalise)


def n_igd_plus(
    S: SolutionSet, A: ReferenceSet, normalise: str = "sum", selection: str = IGD_PLUS
) -> IGDResult:
    """nIGD+: pick per target by estimated values, charge the IGD+ distance of the true vector.

    By default the pick also uses the IGD+ distance, so that with exact
    estimates the metric equals :func:`igd_plus` on the true values. Pass
    ``selection="euclidean"`` to pick the Euclidean-nearest estimate instead.
    """
    if selection not in _DISTANCES:
        raise ValueError(f"selection must be one of {sorted(_DISTANCES)}, got {selection!r}")
    return _noisy(S, A, selection, IGD_PLUS, normalise)
