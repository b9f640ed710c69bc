"""Robust design optimization on quantile objectives estimated from ECDFs.

The optimization objectives are generalized-inverse quantiles of an
uncertain response, estimated by Monte Carlo sampling and the empirical CDF;
a plain multi-objective GA trades the quantile levels off against each
other. Companion tools quantify the quantile estimation error by bootstrap
and estimate evidence-theory belief/plausibility curves from the same
tagged-sampling machinery.
"""

__version__ = "0.1.0"

from .bench import (
    BumpParams,
    bump_boxes,
    bump_response,
    bump_values,
    compose_front_from_1d,
    eval_bump,
    eval_mv1,
    eval_mv4,
    mv1_boxes,
    mv1_response,
    mv4_boxes,
    mv4_reference_solutions,
    mv4_response,
)
from .bootstrap import (
    BootstrapResult,
    bootstrap_quantile,
    error_vs_samples,
    subsample_bootstrap,
)
from .ecdf import Ecdf, build_ecdf, cdf_envelope
from .evidence import (
    BeliefPlausibilityCurve,
    Bpa,
    FocalElement,
    TaggedSamples,
    estimate_belief_plausibility,
    exact_belief_plausibility,
    focal_elements,
    sample_tagged,
    validate_bpa,
)
from .moga import (
    GaConfig,
    Individual,
    MogaResult,
    ParetoArchive,
    dominates,
    nondominated_filter,
    run_moga,
)
from .robust import (
    EvaluationError,
    RobustProblem,
    default_epsilon,
    many_objective_levels,
    standard_levels,
)
from .sampling import Box, rng_from, scale_to_box, sobol_sequence, uniform_mc

__all__ = [
    "BeliefPlausibilityCurve",
    "BootstrapResult",
    "Box",
    "Bpa",
    "BumpParams",
    "Ecdf",
    "EvaluationError",
    "FocalElement",
    "GaConfig",
    "Individual",
    "MogaResult",
    "ParetoArchive",
    "RobustProblem",
    "TaggedSamples",
    "bootstrap_quantile",
    "build_ecdf",
    "bump_boxes",
    "bump_response",
    "bump_values",
    "cdf_envelope",
    "compose_front_from_1d",
    "default_epsilon",
    "dominates",
    "error_vs_samples",
    "estimate_belief_plausibility",
    "eval_bump",
    "eval_mv1",
    "eval_mv4",
    "exact_belief_plausibility",
    "focal_elements",
    "many_objective_levels",
    "mv1_boxes",
    "mv1_response",
    "mv4_boxes",
    "mv4_reference_solutions",
    "mv4_response",
    "nondominated_filter",
    "rng_from",
    "run_moga",
    "sample_tagged",
    "scale_to_box",
    "sobol_sequence",
    "standard_levels",
    "subsample_bootstrap",
    "uniform_mc",
    "validate_bpa",
]
