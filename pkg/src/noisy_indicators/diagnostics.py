"""Error taxonomy for noisy solution sets.

Three ways noise misleads a decision maker: a good solution looks dominated
and is dropped (exclusion), a dominated one looks good and is kept
(inclusion), or the wrong member of the set is picked (selection). Dominance
is judged within the returned set only.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .core import ReferenceSet, SolutionSet, nondominated_filter
from .igd import EUCLIDEAN, IGD_PLUS, _DISTANCES, _check, _targets
from .utility import UtilityModel, WeightSampleSet, resolve_model, utility_matrix


@dataclass(frozen=True)
class SelectionError:
    index: int  # weight-vector or target index
    picked_id: str
    best_id: str
    regret: float


@dataclass
class ErrorReport:
    excluded_ids: list[str]
    included_ids: list[str]
    selection_errors: list[SelectionError]
    misinformation: float
    mean_regret: float | None = None
    distance_errors: list[SelectionError] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["selection_errors"] = [asdict(e) for e in self.selection_errors]
        d["distance_errors"] = [asdict(e) for e in self.distance_errors]
        return d


def error_by_exclusion(S: SolutionSet) -> list[str]:
    """Ids that are truly non-dominated but look dominated by the estimates."""
    truly = set(nondominated_filter(S.true_values))
    apparent = set(nondominated_filter(S.estimated_values))
    return [S.ids[i] for i in sorted(truly - apparent)]


def error_by_inclusion(S: SolutionSet) -> list[str]:
    """Ids that look non-dominated by the estimates but are truly dominated."""
    truly = set(nondominated_filter(S.true_values))
    apparent = set(nondominated_filter(S.estimated_values))
    return [S.ids[i] for i in sorted(apparent - truly)]


def _regrets(ids, picked, best, realised, optimal) -> list[SelectionError]:
    out = []
    for i in np.flatnonzero((picked != best) & (realised > optimal)):
        out.append(SelectionError(int(i), ids[picked[i]], ids[best[i]], float(realised[i] - optimal[i])))
    return out


def selection_errors(
    S: SolutionSet, weights: WeightSampleSet, model: UtilityModel | None = None
) -> list[SelectionError]:
    """Per weight vector, the true-utility loss of picking by estimates.

    Records with zero regret are omitted, so the sum of regrets divided by
    the number of weight vectors equals ``n_r2 - r2(true values)`` when both
    use the same (resolved) model.
    """
    model = resolve_model(model or UtilityModel.linear(), S.true_values, S.estimated_values)
    Ut = utility_matrix(model, S.true_values, weights)
    picked = np.argmin(utility_matrix(model, S.estimated_values, weights), axis=1)
    best = np.argmin(Ut, axis=1)
    rows = np.arange(Ut.shape[0])
    return _regrets(S.ids, picked, best, Ut[rows, picked], Ut[rows, best])


def mean_regret(errors: list[SelectionError], m: int) -> float:
    return sum(e.regret for e in errors) / m


def distance_selection_errors(
    S: SolutionSet, A: ReferenceSet, plus: bool = False
) -> list[SelectionError]:
    """Per target, the extra distance caused by picking the nearest estimate.

    With ``plus=True`` picks and distances use the IGD+ distance, matching
    :func:`~noisy_indicators.igd.n_igd_plus`.
    """
    T = _targets(A)
    _check(T, S.true_values)
    dist = _DISTANCES[IGD_PLUS if plus else EUCLIDEAN]
    Dt = dist(T, S.true_values)
    picked = np.argmin(dist(T, S.estimated_values), axis=1)
    best = np.argmin(Dt, axis=1)
    rows = np.arange(T.shape[0])
    return _regrets(S.ids, picked, best, Dt[rows, picked], Dt[rows, best])


def noise_misinformation(S: SolutionSet) -> float:
    """Mean Euclidean distance between each solution's estimated and true vector."""
    diff = S.estimated_values - S.true_values
    return float(np.mean(np.sqrt(np.sum(diff * diff, axis=1))))


def diagnose(
    S: SolutionSet,
    weights: WeightSampleSet | None = None,
    model: UtilityModel | None = None,
    A: ReferenceSet | None = None,
    plus: bool = True,
) -> ErrorReport:
    errors = selection_errors(S, weights, model) if weights is not None else []
    return ErrorReport(
        excluded_ids=error_by_exclusion(S),
        included_ids=error_by_inclusion(S),
        selection_errors=errors,
        misinformation=noise_misinformation(S),
        mean_regret=mean_regret(errors, len(weights)) if weights is not None else None,
        distance_errors=distance_selection_errors(S, A, plus) if A is not None else [],
    )
