"""Ablation runs over data-source subsets and the two system variants."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Sequence

from .evaluation import (
    DEFAULT_CUTOFFS,
    ComparisonCell,
    Qrels,
    RunFile,
    Topic,
    compare_runs,
    format_comparison_matrix,
    format_precision_table,
    macro_average,
)
from .pipeline import BuildArtifacts, BuildConfig, Collection, build_artifacts, execute_run

logger = logging.getLogger(__name__)

# the seven standard configurations: three mention-only baselines and four
# structure-weighted variants
STANDARD_RUNS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("base", ("intranet",)),
    ("base", ("extranet",)),
    ("base", ("intranet", "extranet")),
    ("new", ("extranet",)),
    ("new", ("extranet", "db")),
    ("new", ("intranet", "extranet")),
    ("new", ("intranet", "extranet", "db")),
)


@dataclass
class AblationResult:
    run: RunFile
    macro: dict[int, float]
    artifacts: BuildArtifacts


def run_ablation(
    collection: Collection,
    sources: Sequence[str],
    system: str,
    topics: list[Topic],
    qrels: Qrels,
    base_config: BuildConfig | None = None,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    depth: int = 100,
) -> AblationResult:
    """Rebuild evidence and index restricted to ``sources``, run all topics."""
    config = replace(
        base_config or BuildConfig(),
        sources=tuple(sorted(frozenset(sources))),
        system=system,
    )
    artifacts = build_artifacts(collection, config)
    run = execute_run(artifacts, topics, depth)
    macro = macro_average(run, qrels, cutoffs, [t.topic_id for t in topics])
    return AblationResult(run, macro, artifacts)


@dataclass
class SuiteResult:
    results: dict[str, AblationResult]  # run tag -> result, in standard order
    cutoffs: tuple[int, ...]

    @property
    def table(self) -> str:
        rows = [
            (tag.capitalize(), [res.macro[k] for k in self.cutoffs])
            for tag, res in self.results.items()
        ]
        return format_precision_table(rows, self.cutoffs)


def run_standard_suite(
    collection: Collection,
    topics: list[Topic],
    qrels: Qrels,
    base_config: BuildConfig | None = None,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    depth: int = 100,
) -> SuiteResult:
    """Execute all seven standard run configurations and collect macro rows."""
    results: dict[str, AblationResult] = {}
    for system, sources in STANDARD_RUNS:
        result = run_ablation(collection, sources, system, topics, qrels, base_config, cutoffs, depth)
        logger.info("run %s: %s", result.run.run_tag, result.macro)
        results[result.run.run_tag] = result
    return SuiteResult(results, tuple(cutoffs))


def comparison_matrix(
    runs: Sequence[RunFile],
    qrels: Qrels,
    cutoff: int,
    topic_ids: Sequence[str] | None = None,
) -> str:
    """Pairwise comparison of runs, rendered as a lower-triangular matrix."""
    labels = [run.run_tag.capitalize() for run in runs]
    cells: dict[tuple[str, str], ComparisonCell] = {}
    for i, row_run in enumerate(runs):
        for j, col_run in enumerate(runs):
            if j < i:
                cells[(labels[i], labels[j])] = compare_runs(
                    row_run, col_run, qrels, cutoff, topic_ids
                )
    return format_comparison_matrix(labels, cells, cutoff)
