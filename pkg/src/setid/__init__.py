"""Set identification of preference distributions when preferences may be incomplete."""

from .artstein import (
    ChoiceFrequencies, ChoiceParamVector, build_sharp_region, build_theta1_region, containment_functional,
    find_selection, in_sharp_region, selection_feasible, strict_inclusion_witness, subset_order,
)
from .binary import (
    BinaryObservation, UnobservedMode, abstention_region, consideration_region, imperfect_iv_bound, iv_region,
    min_vagueness_region, no_assumption_region, observed_region_from_shares,
)
from .choice import (
    StrictRelation, UtilityInterval, UtilityProfile, fishburn_representation, is_interval_order,
    minmax_regret_choice, nondominated_set,
)
from .elections import FigureOptions, figure_pipeline, ingest, summarize
from .estimators import BinaryRegionEstimator, ParametricIntervalModel, SharpRegionEstimator
from .exceptions import (
    CoherenceError, DataError, DimensionError, InfeasibleError, InvalidInputError, SetIdError, TieError,
    UnboundedError,
)
from .knightian import PriorSet, StateUtility, bewley_prefers, knightian_nondominated
from .parametric import (
    nonparametric_policy_bounds, parametric_region, parametric_region_iv, policy_complete,
    policy_incomplete_interval,
)
from .polytope import ConvexRegion2D, HalfspaceSystem, minkowski_sum_2d, support, vertices_2d
from .simulation import PopulationSpec, iv_experiment, simulate, verify_artstein

__version__ = "0.1.0"

__all__ = [
    "BinaryObservation",
    "BinaryRegionEstimator",
    "ChoiceFrequencies",
    "ChoiceParamVector",
    "CoherenceError",
    "ConvexRegion2D",
    "DataError",
    "DimensionError",
    "FigureOptions",
    "HalfspaceSystem",
    "InfeasibleError",
    "InvalidInputError",
    "ParametricIntervalModel",
    "PopulationSpec",
    "PriorSet",
    "SetIdError",
    "SharpRegionEstimator",
    "StateUtility",
    "StrictRelation",
    "TieError",
    "UnboundedError",
    "UnobservedMode",
    "UtilityInterval",
    "UtilityProfile",
    "abstention_region",
    "bewley_prefers",
    "build_sharp_region",
    "build_theta1_region",
    "consideration_region",
    "containment_functional",
    "figure_pipeline",
    "find_selection",
    "fishburn_representation",
    "imperfect_iv_bound",
    "in_sharp_region",
    "ingest",
    "is_interval_order",
    "iv_experiment",
    "iv_region",
    "knightian_nondominated",
    "min_vagueness_region",
    "minkowski_sum_2d",
    "minmax_regret_choice",
    "no_assumption_region",
    "nondominated_set",
    "nonparametric_policy_bounds",
    "observed_region_from_shares",
    "parametric_region",
    "parametric_region_iv",
    "policy_complete",
    "policy_incomplete_interval",
    "selection_feasible",
    "simulate",
    "strict_inclusion_witness",
    "subset_order",
    "summarize",
    "support",
    "verify_artstein",
    "vertices_2d",
]
