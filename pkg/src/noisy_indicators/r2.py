"""R2 and the selection-aware nR2 indicator.

Classical R2 averages, over sampled utility functions, the best utility in the
set. nR2 instead lets the decision maker pick by *estimated* utility and then
scores the pick by its *true* utility, so mis-estimation costs something.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DimensionError, SolutionSet, as_points
from .utility import UtilityModel, WeightSampleSet, resolve_model, utility_matrix

CHUNK_ROWS = 1 << 16
DEFAULT_M = 10_000


@dataclass(frozen=True)
class R2Result:
    """Metric value plus the per-weight selection that produced it.

    ``selected[i]`` is the index (into ``ids``) picked for weight vector i and
    ``realised[i]`` its utility; ``value`` is the mean of ``realised``.
    """

    value: float
    ids: tuple[str, ...]
    selected: np.ndarray
    realised: np.ndarray
    model: UtilityModel

    @property
    def standard_error(self) -> float:
        m = self.realised.size
        if m < 2:
            return float("nan")
        return float(np.std(self.realised, ddof=1) / np.sqrt(m))

    def per_sample(self) -> list[dict]:
        return [
            {"weight_index": i, "selected_id": self.ids[j], "utility": float(u)}
            for i, (j, u) in enumerate(zip(self.selected.tolist(), self.realised))
        ]

    def to_dict(self, per_sample: bool = False) -> dict:
        out = {"value": float(self.value), "m": int(self.realised.size), "utility": self.model.kind}
        if self.model.ideal_point is not None:
            out["ideal_point"] = list(self.model.ideal_point)
        if per_sample:
            out["per_sample"] = self.per_sample()
        return out


def _weights_array(weights: WeightSampleSet, D: int) -> np.ndarray:
    W = weights.samples
    if W.shape[0] == 0:
        raise ValueError("empty weight sample set")
    if W.shape[1] != D:
        raise DimensionError(f"weights have dimension {W.shape[1]}, points have {D}")
    return W


def _select(model, choose_on, score_on, W):
    """Argmin of utility on ``choose_on`` per weight row, scored on ``score_on``.

    np.argmin returns the first minimum, i.e. ties go to the lowest index.
    """
    m = W.shape[0]
    selected = np.empty(m, dtype=np.intp)
    realised = np.empty(m, dtype=float)
    for lo in range(0, m, CHUNK_ROWS):
        Wc = W[lo : lo + CHUNK_ROWS]
        Uc = utility_matrix(model, choose_on, Wc)
        idx = np.argmin(Uc, axis=1)
        selected[lo : lo + Wc.shape[0]] = idx
        if score_on is choose_on:
            realised[lo : lo + Wc.shape[0]] = Uc[np.arange(Wc.shape[0]), idx]
        else:
            Us = utility_matrix(model, score_on, Wc)
            realised[lo : lo + Wc.shape[0]] = Us[np.arange(Wc.shape[0]), idx]
    return selected, realised


def r2(values, weights: WeightSampleSet, model: UtilityModel | None = None, ids=None) -> R2Result:
    """Classical R2: mean over weight vectors of the best utility among ``values``."""
    F = as_points(values, "values")
    model = resolve_model(model or UtilityModel.linear(), F)
    W = _weights_array(weights, F.shape[1])
    selected, realised = _select(model, F, F, W)
    if ids is None:
        ids = [f"s{i}" for i in range(F.shape[0])]
    return R2Result(float(np.mean(realised)), tuple(map(str, ids)), selected, realised, model)


def n_r2(S: SolutionSet, weights: WeightSampleSet, model: UtilityModel | None = None) -> R2Result:
    """nR2: pick by estimated utility, score the pick by true utility.

    A Chebycheff model without an ideal point is anchored at the componentwise
    minimum of true and estimated values (minus a small margin). Pass an
    explicit ideal point when comparing against :func:`r2` on a different
    point set.
    """
    model = resolve_model(model or UtilityModel.linear(), S.true_values, S.estimated_values)
    W = _weights_array(weights, S.dimension)
    selected, realised = _select(model, S.estimated_values, S.true_values, W)
    return R2Result(float(np.mean(realised)), S.ids, selected, realised, model)


def linear_2d_envelope(values) -> list[tuple[int, float, float]]:
    """Pieces of the lower envelope of ``g_j(lam) = lam*f1_j + (1-lam)*f2_j`` on [0, 1].

    Returns ``(j, lo, hi)`` triples in increasing ``lam``: point j is the
    minimiser for ``lam`` in ``[lo, hi]``. The minimisers are exactly the
    vertices of the lower-left convex hull of the point set. Among identical
    lines the lowest index is kept.
    """
    F = as_points(values, "values")
    if F.shape[1] != 2:
        raise DimensionError(f"analytic R2 needs 2 objectives, got {F.shape[1]}")
    slope = F[:, 0] - F[:, 1]
    icpt = F[:, 1]
    # descending slope; equal slopes by ascending intercept, then index
    order = sorted(range(F.shape[0]), key=lambda j: (-slope[j], icpt[j], j))

    hull: list[int] = []
    for j in order:
        if hull and slope[hull[-1]] == slope[j]:
            continue  # parallel and not lower than the kept line
        while len(hull) >= 2:
            a, b = hull[-2], hull[-1]
            # b is never strictly lowest if line j overtakes a no later than b does
            lhs = (icpt[j] - icpt[a]) * (slope[a] - slope[b])
            rhs = (icpt[b] - icpt[a]) * (slope[a] - slope[j])
            if lhs <= rhs:
                hull.pop()
            else:
                break
        hull.append(j)

    pieces = []
    lo = -np.inf
    for k, j in enumerate(hull):
        if k + 1 < len(hull):
            nxt = hull[k + 1]
            hi = (icpt[nxt] - icpt[j]) / (slope[j] - slope[nxt])
        else:
            hi = np.inf
        a, b = max(lo, 0.0), min(hi, 1.0)
        if b > a:
            pieces.append((int(j), float(a), float(b)))
        lo = hi
    return pieces


def analytic_r2_linear_2d(values) -> float:
    """Exact R2 for two objectives, linear utility and lambda_1 ~ U[0, 1].

    Integrates the lower envelope of the utility lines piece by piece.
    """
    F = as_points(values, "values")
    total = 0.0
    for j, a, b in linear_2d_envelope(F):
        s = F[j, 0] - F[j, 1]
        total += F[j, 1] * (b - a) + 0.5 * s * (b * b - a * a)
    return float(total)
