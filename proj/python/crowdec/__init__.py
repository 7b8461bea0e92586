"""Crowdsourcing-based evolutionary computation with uncertainty detection."""

from ._core import (
    ConfigError,
    ContractViolation,
    IoError,
    ParseError,
    RunConfig,
    benchmark_names,
    bound_schedule,
    competition_rank,
    domain,
    evaluate,
    kmeans,
    random_topology,
    rank_fitness,
    run,
    run_batch,
    synth_blobs,
    wcss,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "IoError",
    "ParseError",
    "RunConfig",
    "benchmark_names",
    "bound_schedule",
    "competition_rank",
    "domain",
    "evaluate",
    "kmeans",
    "random_topology",
    "rank_fitness",
    "run",
    "run_batch",
    "synth_blobs",
    "wcss",
]
