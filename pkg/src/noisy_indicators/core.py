"""Objective-space primitives: dominance, solution sets and reference sets.

Everything here follows the minimisation convention. Point collections are
plain ``(n, D)`` float arrays; the container classes freeze their arrays so
they can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np


class DimensionError(ValueError):
    """Objective vectors of different dimension were combined."""


class InvariantError(ValueError):
    """Input data violates a structural invariant (e.g. dominated reference set)."""


def as_points(points, name: str = "points") -> np.ndarray:
    """Convert ``points`` to a finite, non-empty ``(n, D)`` float array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be a 2-D array, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_dimension(expected: int, arr: np.ndarray, name: str) -> None:
    if arr.shape[-1] != expected:
        raise DimensionError(f"{name} has dimension {arr.shape[-1]}, expected {expected}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


def dominates(u, v) -> bool:
    """Return True if ``u`` Pareto-dominates ``v`` (minimisation)."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    if u.shape != v.shape:
        raise DimensionError(f"cannot compare vectors of dimension {u.size} and {v.size}")
    return bool(np.all(u <= v) and np.any(u < v))


def dominance_matrix(points) -> np.ndarray:
    """Boolean matrix ``M`` with ``M[i, j]`` true iff point i dominates point j."""
    p = as_points(points)
    le = np.all(p[:, None, :] <= p[None, :, :], axis=2)
    lt = np.any(p[:, None, :] < p[None, :, :], axis=2)
    return le & lt


def nondominated_filter(points) -> list[int]:
    """Indices of the points not dominated by any other point, ascending.

    Duplicate vectors do not dominate each other, so all copies are kept.
    """
    dom = dominance_matrix(points)
    return [int(i) for i in np.flatnonzero(~dom.any(axis=0))]


@dataclass(frozen=True)
class EvaluatedSolution:
    id: str
    true_values: np.ndarray
    estimated_values: np.ndarray


class SolutionSet:
    """A returned solution set with parallel true (T) and estimated (R) values.

    Args:
        true_values: ``(n, D)`` noiseless objective vectors.
        estimated_values: ``(n, D)`` objective vectors as reported to the
            decision maker.
        ids: Optional unique identifiers; defaults to ``"s0", "s1", ...``.
    """

    __slots__ = ("true_values", "estimated_values", "ids")

    def __init__(self, true_values, estimated_values, ids: Sequence | None = None):
        t = as_points(true_values, "true_values")
        r = as_points(estimated_values, "estimated_values")
        if t.shape != r.shape:
            raise DimensionError(
                f"true values {t.shape} and estimated values {r.shape} do not match"
            )
        if ids is None:
            ids = [f"s{i}" for i in range(t.shape[0])]
        ids = tuple(str(i) for i in ids)
        if len(ids) != t.shape[0]:
            raise ValueError(f"got {len(ids)} ids for {t.shape[0]} solutions")
        if len(set(ids)) != len(ids):
            raise InvariantError("solution ids must be unique")
        object.__setattr__(self, "true_values", _frozen(t))
        object.__setattr__(self, "estimated_values", _frozen(r))
        object.__setattr__(self, "ids", ids)

    def __setattr__(self, name, value):
        raise AttributeError("SolutionSet is immutable")

    @classmethod
    def noise_free(cls, values, ids=None) -> "SolutionSet":
        return cls(values, values, ids)

    @classmethod
    def from_solutions(cls, solutions: Sequence[EvaluatedSolution]) -> "SolutionSet":
        if not solutions:
            raise ValueError("a solution set needs at least one solution")
        return cls(
            [s.true_values for s in solutions],
            [s.estimated_values for s in solutions],
            [s.id for s in solutions],
        )

    @property
    def dimension(self) -> int:
        return self.true_values.shape[1]

    def __len__(self) -> int:
        return self.true_values.shape[0]

    def __iter__(self) -> Iterator[EvaluatedSolution]:
        for i, sid in enumerate(self.ids):
            yield EvaluatedSolution(sid, self.true_values[i], self.estimated_values[i])

    @property
    def solutions(self) -> list[EvaluatedSolution]:
        return list(self)

    def take(self, indices) -> "SolutionSet":
        idx = list(indices)
        return SolutionSet(
            self.true_values[idx], self.estimated_values[idx], [self.ids[i] for i in idx]
        )

    def append(self, solution: EvaluatedSolution) -> "SolutionSet":
        """New set with ``solution`` added at the end (highest index)."""
        return SolutionSet(
            np.vstack([self.true_values, solution.true_values]),
            np.vstack([self.estimated_values, solution.estimated_values]),
            self.ids + (str(solution.id),),
        )

    def __repr__(self) -> str:
        return f"SolutionSet(n={len(self)}, dimension={self.dimension})"


class ReferenceSet:
    """Target approximation ``A`` of the Pareto front.

    Targets must be mutually non-dominated; this is checked on construction.
    """

    __slots__ = ("targets",)

    def __init__(self, targets):
        a = as_points(targets, "targets")
        dom = dominance_matrix(a)
        if dom.any():
            i, j = map(int, np.argwhere(dom)[0])
            raise InvariantError(f"reference target {i} dominates target {j}")
        object.__setattr__(self, "targets", _frozen(a))

    def __setattr__(self, name, value):
        raise AttributeError("ReferenceSet is immutable")

    @property
    def dimension(self) -> int:
        return self.targets.shape[1]

    def __len__(self) -> int:
        return self.targets.shape[0]

    def __repr__(self) -> str:
        return f"ReferenceSet(m={len(self)}, dimension={self.dimension})"


def true_nondominated_fraction(S: SolutionSet) -> float:
    """Share of the set whose true vectors are non-dominated within the set."""
    return len(nondominated_filter(S.true_values)) / len(S)
