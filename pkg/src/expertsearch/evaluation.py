"""Test-collection formats, precision metrics, significance tests, reports.

File formats (all UTF-8, tab-separated):
  topics   topic_id<TAB>query text
  qrels    topic_id<TAB>person_id<TAB>grade        grade in {high,medium,low,none}
  run      topic_id<TAB>rank<TAB>person_id<TAB>score<TAB>run_tag   (6-decimal score)
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from statistics import fmean
from typing import Iterable, Mapping, Sequence

from scipy import stats as scipy_stats

logger = logging.getLogger(__name__)

GRADES = ("high", "medium", "low", "none")
DEFAULT_CUTOFFS = (1, 3, 5, 10)
ALPHA = 0.05

# qrels: topic_id -> {person_id: grade}
Qrels = dict[str, dict[str, str]]


@dataclass(frozen=True)
class Topic:
    topic_id: str
    query_text: str

    def __post_init__(self):
        if not self.topic_id or not self.query_text:
            raise ValueError("topic needs an id and query text")


@dataclass(frozen=True)
class Judgment:
    topic_id: str
    person_id: str
    grade: str

    def __post_init__(self):
        if self.grade not in GRADES:
            raise ValueError(f"unknown grade {self.grade!r}")


@dataclass(frozen=True)
class RunEntry:
    rank: int
    person_id: str
    score: float


@dataclass(frozen=True)
class RunFile:
    run_tag: str
    results: dict[str, tuple[RunEntry, ...]]

    def __post_init__(self):
        for topic_id, entries in self.results.items():
            persons = set()
            previous = math.inf
            for position, entry in enumerate(entries, 1):
                if entry.rank != position:
                    raise ValueError(f"run {self.run_tag}, topic {topic_id}: ranks not contiguous")
                if entry.person_id in persons:
                    raise ValueError(
                        f"run {self.run_tag}, topic {topic_id}: repeated person {entry.person_id}"
                    )
                if entry.score > previous:
                    raise ValueError(f"run {self.run_tag}, topic {topic_id}: scores increase with rank")
                persons.add(entry.person_id)
                previous = entry.score

    def ranked_persons(self, topic_id: str) -> list[str]:
        return [e.person_id for e in self.results.get(topic_id, ())]


def quantize(grade: str, topic_pool: Mapping[str, str] | Iterable[str]) -> int:
    """Binary relevance from a graded judgment given the topic's full pool.

    high and medium count; low counts only when the pool offers no high or
    medium judgment; none never counts.
    """
    if grade not in GRADES:
        raise ValueError(f"unknown grade {grade!r}")
    if grade in ("high", "medium"):
        return 1
    if grade == "low" and not _pool_has_strong(topic_pool):
        return 1
    return 0


def _pool_has_strong(topic_pool: Mapping[str, str] | Iterable[str]) -> bool:
    grades = topic_pool.values() if isinstance(topic_pool, Mapping) else topic_pool
    return any(g in ("high", "medium") for g in grades)


def precision_at_k(
    ranked_persons: Sequence[str],
    topic_judgments: Mapping[str, str],
    k: int,
) -> float:
    """Fraction of the k top slots holding a relevant person.

    Short result lists still divide by k; unjudged persons are not relevant.
    """
    if k < 1:
        raise ValueError(f"cutoff must be >= 1, got {k}")
    relevant = 0
    for person_id in list(ranked_persons)[:k]:
        grade = topic_judgments.get(person_id)
        if grade is not None and quantize(grade, topic_judgments):
            relevant += 1
    return relevant / k


def per_topic_precision(
    run: RunFile,
    qrels: Qrels,
    k: int,
    topic_ids: Sequence[str] | None = None,
) -> dict[str, float]:
    """p@k for every topic; topics without judgments score 0 with a warning."""
    ids = list(topic_ids) if topic_ids is not None else sorted(set(run.results) | set(qrels))
    out: dict[str, float] = {}
    for topic_id in ids:
        pool = qrels.get(topic_id)
        if pool is None:
            logger.warning("topic %s has no judgments; scored 0", topic_id)
            out[topic_id] = 0.0
            continue
        out[topic_id] = precision_at_k(run.ranked_persons(topic_id), pool, k)
    return out


def macro_average(
    run: RunFile,
    qrels: Qrels,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    topic_ids: Sequence[str] | None = None,
) -> dict[int, float]:
    """Arithmetic mean of p@k over the topic set, for each cutoff."""
    ids = list(topic_ids) if topic_ids is not None else sorted(set(run.results) | set(qrels))
    if not ids:
        raise ValueError("no topics to average over")
    return {k: fmean(per_topic_precision(run, qrels, k, ids).values()) for k in cutoffs}


def paired_ttest(
    per_topic_a: Sequence[float],
    per_topic_b: Sequence[float],
) -> tuple[float, float, bool]:
    """Two-tailed paired t-test; returns (t, p, significant at alpha=0.05)."""
    a, b = list(per_topic_a), list(per_topic_b)
    if len(a) != len(b):
        raise ValueError("paired vectors differ in length")
    n = len(a)
    if n < 2:
        raise ValueError("need at least two pairs")
    diffs = [x - y for x, y in zip(a, b)]
    mean = sum(diffs) / n
    variance = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    if variance == 0.0:
        if mean == 0.0:
            return 0.0, 1.0, False
        return math.copysign(math.inf, mean), 0.0, True
    t = mean / math.sqrt(variance / n)
    p = 2.0 * float(scipy_stats.t.sf(abs(t), n - 1))
    return t, p, p < ALPHA


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class ComparisonCell:
    """One A-versus-B comparison at a single cutoff (raw, unrounded values)."""

    cutoff: int
    win_pct: float
    loss_pct: float
    improvement_pct: float | None
    t_stat: float
    p_value: float
    significant: bool

    @property
    def text(self) -> str:
        improvement = None if self.improvement_pct is None else round_half_away(self.improvement_pct)
        return format_compare_cell(
            round_half_away(self.win_pct),
            round_half_away(self.loss_pct),
            improvement,
            self.significant,
        )


def format_compare_cell(win: int, loss: int, improvement: int | None, significant: bool = False) -> str:
    improvement_text = "n/a" if improvement is None else f"{improvement}%"
    cell = f"{win}/{loss} {improvement_text}"
    return f"{cell}*" if significant else cell


def compare_runs(
    run_a: RunFile,
    run_b: RunFile,
    qrels: Qrels,
    cutoff: int,
    topic_ids: Sequence[str] | None = None,
) -> ComparisonCell:
    """Win/loss percentages, relative improvement and significance of A over B."""
    ids = list(topic_ids) if topic_ids is not None else sorted(
        set(run_a.results) | set(run_b.results) | set(qrels)
    )
    if not ids:
        raise ValueError("no topics to compare over")
    pa = per_topic_precision(run_a, qrels, cutoff, ids)
    pb = per_topic_precision(run_b, qrels, cutoff, ids)
    wins = sum(1 for t in ids if pa[t] > pb[t])
    losses = sum(1 for t in ids if pa[t] < pb[t])
    mean_a = fmean(pa.values())
    mean_b = fmean(pb.values())
    if mean_b == 0.0:
        improvement = 0.0 if mean_a == 0.0 else None
    else:
        improvement = 100.0 * (mean_a - mean_b) / mean_b
    if len(ids) >= 2:
        t, p, significant = paired_ttest([pa[t] for t in ids], [pb[t] for t in ids])
    else:
        t, p, significant = 0.0, 1.0, False
    return ComparisonCell(
        cutoff,
        100.0 * wins / len(ids),
        100.0 * losses / len(ids),
        improvement,
        t,
        p,
        significant,
    )


def format_precision_row(label: str, values: Sequence[float]) -> str:
    """Single-space table row with 3-decimal precision values."""
    return " ".join([label, *(f"{v:.3f}" for v in values)])


def format_precision_table(
    rows: Sequence[tuple[str, Sequence[float]]],
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
) -> str:
    """Aligned text table: one row per run, one precision column per cutoff."""
    header = ["p@", *(str(k) for k in cutoffs)]
    body = [[label, *(f"{v:.3f}" for v in values)] for label, values in rows]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
    lines = []
    for line in [header, *body]:
        first = line[0].ljust(widths[0])
        rest = [cell.rjust(widths[i]) for i, cell in enumerate(line) if i > 0]
        lines.append("  ".join([first, *rest]).rstrip())
    return "\n".join(lines)


def format_comparison_matrix(
    labels: Sequence[str],
    cells: Mapping[tuple[str, str], ComparisonCell],
    cutoff: int,
) -> str:
    """Lower-triangular comparison matrix: later runs versus earlier ones."""
    columns = list(labels[:-1])
    rows = list(labels[1:])
    header = [f"p@{cutoff}", *columns]
    body = []
    for i, row_label in enumerate(rows):
        line = [row_label]
        for j, col_label in enumerate(columns):
            if j <= i:
                cell = cells.get((row_label, col_label))
                line.append(cell.text if cell is not None else "")
            else:
                line.append("")
        body.append(line)
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
    lines = []
    for line in [header, *body]:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip())
    return "\n".join(lines)


def read_topics(path) -> list[Topic]:
    topics: list[Topic] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2:
                raise ValueError(f"{path}: topics line {lineno}: expected topic_id<TAB>query")
            topic = Topic(fields[0].strip(), fields[1].strip())
            if topic.topic_id in seen:
                raise ValueError(f"{path}: topics line {lineno}: duplicate topic {topic.topic_id}")
            seen.add(topic.topic_id)
            topics.append(topic)
    return topics


def write_topics(topics: Iterable[Topic], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for topic in topics:
            fh.write(f"{topic.topic_id}\t{topic.query_text}\n")


def read_qrels(path) -> Qrels:
    qrels: Qrels = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 3:
                raise ValueError(f"{path}: qrels line {lineno}: expected topic<TAB>person<TAB>grade")
            judgment = Judgment(fields[0].strip(), fields[1].strip(), fields[2].strip())
            pool = qrels.setdefault(judgment.topic_id, {})
            if judgment.person_id in pool:
                raise ValueError(
                    f"{path}: qrels line {lineno}: duplicate judgment for "
                    f"({judgment.topic_id}, {judgment.person_id})"
                )
            pool[judgment.person_id] = judgment.grade
    return qrels


def write_qrels(qrels: Qrels, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for topic_id in sorted(qrels):
            for person_id in sorted(qrels[topic_id]):
                fh.write(f"{topic_id}\t{person_id}\t{qrels[topic_id][person_id]}\n")


def write_run(run: RunFile, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for topic_id in sorted(run.results):
            for entry in run.results[topic_id]:
                fh.write(f"{topic_id}\t{entry.rank}\t{entry.person_id}\t{entry.score:.6f}\t{run.run_tag}\n")


def read_run(path) -> RunFile:
    run_tag: str | None = None
    results: dict[str, list[RunEntry]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 5:
                raise ValueError(
                    f"{path}: run line {lineno}: expected topic<TAB>rank<TAB>person<TAB>score<TAB>tag"
                )
            topic_id, rank_text, person_id, score_text, tag = (f.strip() for f in fields)
            if run_tag is None:
                run_tag = tag
            elif tag != run_tag:
                raise ValueError(f"{path}: run line {lineno}: mixed run tags {run_tag!r} and {tag!r}")
            try:
                rank = int(rank_text)
                score = float(score_text)
            except ValueError:
                raise ValueError(f"{path}: run line {lineno}: bad rank or score") from None
            results.setdefault(topic_id, []).append(RunEntry(rank, person_id, score))
    if run_tag is None:
        raise ValueError(f"{path}: empty run file")
    ordered = {
        topic_id: tuple(sorted(entries, key=lambda e: e.rank))
        for topic_id, entries in results.items()
    }
    return RunFile(run_tag, ordered)
