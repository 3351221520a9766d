"""Scalarising utility functions and weight-vector sampling.

Utilities are costs: lower is better, matching the minimisation convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .core import DimensionError, as_points, as_vector

LINEAR = "linear"
CHEBYCHEFF = "chebycheff"
IDEAL_MARGIN = 1e-6
WEIGHT_SUM_TOL = 1e-9


@dataclass(frozen=True)
class UtilityModel:
    """Utility family plus, for Chebycheff, the ideal point z* it is anchored at.

    ``ideal_point=None`` on a Chebycheff model means "derive it from the data",
    which the metric functions do once per call via :func:`resolve_model`.
    """

    kind: Literal["linear", "chebycheff"] = LINEAR
    ideal_point: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in (LINEAR, CHEBYCHEFF):
            raise ValueError(f"unknown utility kind {self.kind!r}")
        if self.ideal_point is not None:
            z = as_vector(self.ideal_point, "ideal_point")
            object.__setattr__(self, "ideal_point", tuple(float(x) for x in z))

    @classmethod
    def linear(cls) -> "UtilityModel":
        return cls(LINEAR)

    @classmethod
    def chebycheff(cls, ideal_point=None) -> "UtilityModel":
        return cls(CHEBYCHEFF, ideal_point)


def default_ideal_point(*point_arrays) -> np.ndarray:
    """Componentwise minimum over all given point arrays, minus a small margin."""
    arrays = [as_points(p) for p in point_arrays if p is not None]
    if not arrays:
        raise ValueError("need at least one point array to derive an ideal point")
    return np.min(np.vstack(arrays), axis=0) - IDEAL_MARGIN


def resolve_model(model: UtilityModel, *point_arrays) -> UtilityModel:
    """Fill in a missing Chebycheff ideal point from the data; otherwise no-op."""
    if model.kind == CHEBYCHEFF and model.ideal_point is None:
        return UtilityModel.chebycheff(default_ideal_point(*point_arrays))
    return model


@dataclass(frozen=True)
class WeightSampleSet:
    """Sampled utility parameters, one weight vector per row of ``samples``."""

    samples: np.ndarray
    seed: int = 0

    def __post_init__(self):
        w = np.array(self.samples, dtype=float, copy=True)
        if w.ndim != 2 or w.shape[0] == 0:
            raise ValueError("weight sample set must be a non-empty (m, D) array")
        validate_weights(w)
        w.setflags(write=False)
        object.__setattr__(self, "samples", w)

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    def __len__(self) -> int:
        return self.samples.shape[0]


def validate_weights(w: np.ndarray) -> None:
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    bad = np.abs(w.sum(axis=1) - 1.0) > WEIGHT_SUM_TOL
    if bad.any():
        raise ValueError(f"weight vector {int(np.argmax(bad))} does not sum to 1")


def sample_weights(D: int, m: int, seed: int) -> WeightSampleSet:
    """Draw ``m`` weight vectors uniformly from the (D-1)-simplex.

    Uses normalised unit-exponential draws, i.e. Dirichlet(1, ..., 1).
    """
    if D < 2:
        raise ValueError(f"weight sampling needs D >= 2, got {D}")
    if m < 1:
        raise ValueError(f"need at least one weight sample, got {m}")
    rng = np.random.default_rng(seed)
    e = rng.standard_exponential((m, D))
    w = e / e.sum(axis=1, keepdims=True)
    # pin the last coordinate so rows sum to 1 up to a single rounding
    w[:, -1] = np.maximum(1.0 - w[:, :-1].sum(axis=1), 0.0)
    return WeightSampleSet(w, seed)


def weight_grid(D: int, k: int) -> WeightSampleSet:
    """Simplex-lattice design: all vectors with entries i/k, in lexicographic order."""
    if D < 2:
        raise ValueError(f"weight grid needs D >= 2, got {D}")
    if k < 1:
        raise ValueError(f"weight grid needs k >= 1, got {k}")
    rows = [
        head + (k - sum(head),)
        for head in itertools.product(range(k + 1), repeat=D - 1)
        if sum(head) <= k
    ]
    return WeightSampleSet(np.array(rows, dtype=float) / k, 0)


def utility_matrix(model: UtilityModel, points, weights) -> np.ndarray:
    """Utilities of every point under every weight vector, shape ``(m, n)``.

    The per-objective terms are accumulated in a fixed order so the result is
    monotone in each point: a dominated point never scores strictly better.
    """
    F = as_points(points)
    W = np.asarray(weights.samples if isinstance(weights, WeightSampleSet) else weights, dtype=float)
    if W.ndim == 1:
        W = W[None, :]
    D = F.shape[1]
    if W.shape[1] != D:
        raise DimensionError(f"weights have dimension {W.shape[1]}, points have {D}")
    if model.kind == LINEAR:
        U = W[:, 0, None] * F[None, :, 0]
        for k in range(1, D):
            U = U + W[:, k, None] * F[None, :, k]
        return U
    if model.ideal_point is None:
        raise ValueError("Chebycheff utility needs an ideal point")
    z = np.asarray(model.ideal_point, dtype=float)
    if z.size != D:
        raise DimensionError(f"ideal point has dimension {z.size}, points have {D}")
    dev = np.maximum(F - z, 0.0)
    U = W[:, 0, None] * dev[None, :, 0]
    for k in range(1, D):
        U = np.maximum(U, W[:, k, None] * dev[None, :, k])
    return U


def utility(model: UtilityModel, f, lam) -> float:
    """Utility (cost) of objective vector ``f`` under weight vector ``lam``."""
    f = as_vector(f, "f")
    lam = as_vector(lam, "lam")
    if f.size != lam.size:
        raise DimensionError(f"f has dimension {f.size}, weights have {lam.size}")
    return float(utility_matrix(model, f[None, :], lam[None, :])[0, 0])
