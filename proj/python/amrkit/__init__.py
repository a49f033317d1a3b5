"""AMR graph scoring, validation, merging and selection on Penman strings."""

from ._core import (
    AlignmentBoundExceeded,
    MergeError,
    PenmanError,
    ScorerError,
    SelectionError,
    breakdown,
    kfold,
    merge,
    mock_perplexity,
    normalize,
    select_ppl_zero,
    select_smatch_avg,
    smatch,
    triples,
    validate,
)

__all__ = [
    "AlignmentBoundExceeded",
    "MergeError",
    "PenmanError",
    "ScorerError",
    "SelectionError",
    "breakdown",
    "kfold",
    "merge",
    "mock_perplexity",
    "normalize",
    "select_ppl_zero",
    "select_smatch_avg",
    "smatch",
    "triples",
    "validate",
]
