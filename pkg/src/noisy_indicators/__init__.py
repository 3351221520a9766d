"""Selection-aware quality indicators for noisy multi-objective optimisation."""

from .core import (
    DimensionError,
    EvaluatedSolution,
    InvariantError,
    ReferenceSet,
    SolutionSet,
    dominates,
    nondominated_filter,
    true_nondominated_fraction,
)
from .diagnostics import (
    ErrorReport,
    SelectionError,
    diagnose,
    distance_selection_errors,
    error_by_exclusion,
    error_by_inclusion,
    noise_misinformation,
    selection_errors,
)
from .igd import IGDResult, igd, igd_plus, igd_plus_distance, n_igd, n_igd_plus
from .r2 import R2Result, analytic_r2_linear_2d, n_r2, r2
from .utility import UtilityModel, WeightSampleSet, sample_weights, utility, weight_grid

__version__ = "0.1.0"
