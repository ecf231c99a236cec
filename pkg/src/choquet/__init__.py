"""Convex capacities on finite state spaces.

Representation and validation of capacities, Möbius mass transforms,
Choquet integration, core polytopes, conditioning rules (ds, fh, and the
erml interpolation between them), credal-set updating, a comonotonicity
decision procedure for "is this set the core of a convex capacity?", and
an executable axiom harness for conditional preferences.
"""

from .axioms import (
    AXIOM_TOL,
    AxiomReport,
    ConditionalBinaryAct,
    PreferenceOracle,
    SuiteReport,
    check_cr_uo,
    check_dc_cs,
    check_ec,
    composite_act,
    conditional_ce,
    default_grid,
    mixing_alpha,
    per_act_alpha_rule,
    per_event_alpha_rule,
    perturbed_rule,
    run_axiom_suite,
    step_act,
)
from .capacity import (
    Act,
    Capacity,
    ConvexityCheck,
    MoebiusMasses,
    StateSpace,
    ValidationReport,
    Violation,
    choquet_integral,
    from_moebius,
    is_convex,
    to_moebius,
    validate_capacity,
)
from .comonotonic import (
    ChainWitness,
    ComonotonicityResult,
    envelope_capacity,
    find_chain_witness,
    is_comonotonic,
)
from .credal import (
    CredalSet,
    ProbabilityVector,
    conditional_envelope,
    core_vertices,
    event_probabilities,
    max_prob,
    maximizer_set,
    membership,
    min_conditional,
    mixture,
)
from .errors import (
    AlphaOutOfRangeError,
    ChoquetError,
    GridViolationError,
    InputError,
    MassSumError,
    NoMatchingPairError,
    NotConvexError,
    NotRationalizableError,
    NullEventError,
    SpaceMismatchError,
    ZeroConditioningMassError,
)
from .generators import additive, belief_function, epsilon_contamination, generate
from .tolerance import DEFAULT_TOL, default_tol
from .updating import (
    NONCOMONOTONIC_FLAG,
    Prop1Report,
    UpdateRule,
    credal_fb_update,
    credal_ml_update,
    credal_rml_update,
    ds_update,
    erml_update,
    fh_update,
    infer_alpha,
    nu_prime,
    verify_prop1,
)

__version__ = "0.1.0"

__all__ = [
    "AXIOM_TOL",
    "Act",
    "AlphaOutOfRangeError",
    "AxiomReport",
    "Capacity",
    "ChainWitness",
    "ChoquetError",
    "ComonotonicityResult",
    "ConditionalBinaryAct",
    "ConvexityCheck",
    "CredalSet",
    "DEFAULT_TOL",
    "GridViolationError",
    "InputError",
    "MassSumError",
    "MoebiusMasses",
    "NONCOMONOTONIC_FLAG",
    "NoMatchingPairError",
    "NotConvexError",
    "NotRationalizableError",
    "NullEventError",
    "PreferenceOracle",
    "ProbabilityVector",
    "Prop1Report",
    "SpaceMismatchError",
    "StateSpace",
    "SuiteReport",
    "UpdateRule",
    "ValidationReport",
    "Violation",
    "ZeroConditioningMassError",
    "additive",
    "belief_function",
    "check_cr_uo",
    "check_dc_cs",
    "check_ec",
    "choquet_integral",
    "composite_act",
    "conditional_ce",
    "conditional_envelope",
    "core_vertices",
    "credal_fb_update",
    "credal_ml_update",
    "credal_rml_update",
    "default_grid",
    "default_tol",
    "ds_update",
    "envelope_capacity",
    "epsilon_contamination",
    "erml_update",
    "event_probabilities",
    "fh_update",
    "find_chain_witness",
    "from_moebius",
    "generate",
    "infer_alpha",
    "is_comonotonic",
    "is_convex",
    "max_prob",
    "maximizer_set",
    "membership",
    "min_conditional",
    "mixing_alpha",
    "mixture",
    "nu_prime",
    "per_act_alpha_rule",
    "per_event_alpha_rule",
    "perturbed_rule",
    "run_axiom_suite",
    "step_act",
    "to_moebius",
    "validate_capacity",
    "verify_prop1",
]
