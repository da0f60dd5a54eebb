"""Python bindings for the genomotif C++ library."""

from ._genomotif import (
    GenomotifError,
    assemble,
    count_kmers,
    hll_estimate,
    kmerize,
    mcl,
    minhash_jaccard,
    needleman_wunsch,
    overlap_candidates,
    reverse_complement,
    run_pipeline,
    simulate_dist_count,
    smith_waterman,
)

__all__ = [
    "GenomotifError",
    "assemble",
    "count_kmers",
    "hll_estimate",
    "kmerize",
    "mcl",
    "minhash_jaccard",
    "needleman_wunsch",
    "overlap_candidates",
    "reverse_complement",
    "run_pipeline",
    "simulate_dist_count",
    "smith_waterman",
]
