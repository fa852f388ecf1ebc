"""Island models for the unsigned reversal distance problem."""

from ._rechepim import (
    BreakpointSummary,
    ConfigError,
    ParseError,
    ResourceGuardError,
    RunResult,
    aggregate_means,
    apply_reversal,
    analyze_breakpoint_graph,
    brute_force_srd,
    brute_force_urd,
    builtin_model_ids,
    decode_real_vector,
    event_generations,
    friedman_test,
    gen_dataset,
    holm_posthoc,
    load_builtin_params,
    random_unsigned_permutation,
    run_experiment,
    run_model,
    signed_reversal_distance,
)

__all__ = [
    "BreakpointSummary",
    "ConfigError",
    "ParseError",
    "ResourceGuardError",
    "RunResult",
    "aggregate_means",
    "apply_reversal",
    "analyze_breakpoint_graph",
    "brute_force_srd",
    "brute_force_urd",
    "builtin_model_ids",
    "decode_real_vector",
    "event_generations",
    "friedman_test",
    "gen_dataset",
    "holm_posthoc",
    "load_builtin_params",
    "random_unsigned_permutation",
    "run_experiment",
    "run_model",
    "signed_reversal_distance",
]
