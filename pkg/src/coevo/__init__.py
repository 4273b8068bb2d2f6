"""Competitive co-evolution of bitstring strategies.

A numpy-backed engine for two-population co-evolutionary search with
pairwise dominance selection, the bilinear maximin benchmark game it is
analysed on, level-based diagnostics with exact small-instance oracles,
closed-form runtime bound calculators, and a reproducible experiment
harness.
"""

from .bilinear import (
    BilinearGame,
    BilinearParams,
    Region,
    bilinear_target,
    classify_predator,
    classify_prey,
    dominates,
    dominates_by_onecounts,
    intransitivity_witness,
    payoff,
    payoff_by_onecounts,
    target_hit,
    worst_case_f,
)
from .core import (
    BitVector,
    PairedPopulations,
    Population,
    RandomStream,
    derive_seed,
    hamming,
    ones,
    paired_uniform,
    spawn_stream,
    uniform_bitvector,
)
from .levels import (
    CountInterval,
    EnumerationCapError,
    FractionStats,
    GrowthLemmaReport,
    LevelFunctionParams,
    LevelSequence,
    build_bilinear_levels,
    check_growth_lemmas,
    current_level,
    eta_window,
    exact_selection_distribution,
    fraction_stats,
    half_prob_conditionals,
    pairs_in_level,
    reference_g1_g2,
    selection_slot_rates,
    validate_level_function,
)
from .pdcoea import (
    InteractionDistribution,
    PdcoeaConfig,
    PdcoeaDistribution,
    TrialRecord,
    mutate,
    pdcoea_interaction,
    run_trial,
    select_pair,
    singleton_target,
    step_generation,
)
from .theory import (
    BoundInputs,
    BoundValue,
    CheckResult,
    check_inequality_lemmas,
    chi_slack,
    error_threshold,
    level_process_bound,
    solvable_regime_budget,
    recipe_mutation_rate,
)

__version__ = "0.1.0"
