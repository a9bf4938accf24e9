"""Per-person weighted evidence sets from the link graph and org model.

Weights spread outward from a person's seed pages through the web graph by
max-product attenuation (1/2 per down-or-same link, 1/10 per up-or-away
link), merge with name-mention and db-record evidence, and pick up page
type factors (10 for home/project/group pages).
"""

from __future__ import annotations

import heapq
import json
import logging
import re
from dataclasses import dataclass
from typing import Iterable

from .corpus import Corpus, Document
from .org import OrgModel, Person, SeedPoint, SEED_GROUP, SEED_PERSON, SEED_PROJECT
from .urls import EdgeDirection
from .webgraph import WebGraph

logger = logging.getLogger(__name__)

PROV_SEED_SELF = "seed_self"
PROV_SEED_PROPAGATED = "seed_propagated"
PROV_NAME_MENTION = "name_mention"
PROV_DB_RECORD = "db_record"
# tie-break when several provenances offer the same base weight
_PROV_PRIORITY = {
    PROV_SEED_SELF: 0,
    PROV_SEED_PROPAGATED: 1,
    PROV_NAME_MENTION: 2,
    PROV_DB_RECORD: 3,
}


@dataclass(frozen=True)
class PropagationConfig:
    """Per-edge attenuation factors and the weight cutoff for propagation."""

    down_same_factor: float = 0.5
    up_away_factor: float = 0.1
    weight_floor: float = 0.001

    def __post_init__(self):
        if not 0 < self.up_away_factor <= self.down_same_factor < 1:
            raise ValueError("factors must satisfy 0 < up_away <= down_same < 1")
        if not 0 < self.weight_floor < 1:
            raise ValueError("weight_floor must lie in (0, 1)")

    def factor(self, direction: EdgeDirection) -> float:
        if direction is EdgeDirection.DOWN_OR_SAME:
            return self.down_same_factor
        return self.up_away_factor


@dataclass(frozen=True)
class EvidenceFragment:
    person_id: str
    doc_id: str
    base_weight: float
    type_factor: float
    final_weight: float
    provenance: str
    seed_url: str | None = None

    def __post_init__(self):
        if not 0.0 < self.base_weight <= 1.0:
            raise ValueError(
                f"fragment ({self.person_id}, {self.doc_id}): base_weight outside (0, 1]"
            )
        if self.final_weight != self.base_weight * self.type_factor:
            raise ValueError(
                f"fragment ({self.person_id}, {self.doc_id}): "
                "final_weight must equal base_weight * type_factor"
            )
        if self.provenance not in _PROV_PRIORITY:
            raise ValueError(f"unknown provenance {self.provenance!r}")


@dataclass(frozen=True)
class EvidenceSet:
    person_id: str
    fragments: tuple[EvidenceFragment, ...]

    def __post_init__(self):
        doc_ids = [f.doc_id for f in self.fragments]
        if len(doc_ids) != len(set(doc_ids)):
            raise ValueError(f"evidence set for {self.person_id} repeats a doc_id")


def propagate_with_sources(
    graph: WebGraph,
    seeds: Iterable[str],
    cfg: PropagationConfig | None = None,
) -> dict[str, tuple[float, str]]:
    """Max-product page weights from ``seeds``, with the winning seed URL.

    weight(u) is the maximum over directed seed-to-u paths of the product of
    per-edge factors; seeds themselves score 1. Pages whose weight falls
    below ``cfg.weight_floor`` are omitted. Seeds not present in the graph
    are logged and skipped.
    """
    cfg = cfg or PropagationConfig()
    seed_set = set(seeds)
    for missing in sorted(seed_set - graph.nodes):
        logger.warning("seed not in graph, skipped: %s", missing)
    best: dict[str, tuple[float, str]] = {}
    heap = [(-1.0, url, url) for url in sorted(seed_set & graph.nodes)]
    heapq.heapify(heap)
    while heap:
        negated, url, origin = heapq.heappop(heap)
        if url in best:
            continue
        weight = -negated
        best[url] = (weight, origin)
        for dst, direction in graph.out_edges(url):
            if dst in best:
                continue
            extended = weight * cfg.factor(direction)
            if extended >= cfg.weight_floor:
                heapq.heappush(heap, (-extended, dst, origin))
    return best


def propagate_from_seeds(
    graph: WebGraph,
    seeds: Iterable[str],
    cfg: PropagationConfig | None = None,
) -> dict[str, float]:
    """Map of page URL to max-product weight reachable from ``seeds``."""
    return {url: w for url, (w, _) in propagate_with_sources(graph, seeds, cfg).items()}


def _name_pattern(name: str) -> re.Pattern | None:
    parts = name.split()
    if not parts:
        return None
    body = r"\s+".join(re.escape(part) for part in parts)
    return re.compile(rf"(?<!\w){body}(?!\w)", re.IGNORECASE)


def find_name_mentions(corpus: Corpus, person: Person) -> set[str]:
    """doc_ids whose title or content mentions the person.

    Matches the display name or any alias as a case-insensitive,
    word-boundary-delimited token sequence.
    """
    patterns = []
    for name in (person.display_name, *person.name_aliases):
        pattern = _name_pattern(name)
        if pattern is not None:
            patterns.append(pattern)
    found: set[str] = set()
    for doc in corpus:
        for pattern in patterns:
            if pattern.search(doc.title) or pattern.search(doc.content):
                found.add(doc.doc_id)
                break
    return found


@dataclass(frozen=True)
class TypeFactorConfig:
    """Importance multipliers by page kind and db record kind."""

    person_homepage: float = 10.0
    project_homepage: float = 10.0
    group_homepage: float = 10.0
    db_kinds: tuple[tuple[str, float], ...] = ()
    default: float = 1.0

    def for_kind(self, kind: str) -> float:
        return {
            SEED_PERSON: self.person_homepage,
            SEED_PROJECT: self.project_homepage,
            SEED_GROUP: self.group_homepage,
        }.get(kind, self.default)

    def db_factor(self, db_kind: str | None) -> float:
        return dict(self.db_kinds).get(db_kind, self.default)


def type_factor(doc: Document, org: OrgModel, cfg: TypeFactorConfig | None = None) -> float:
    """Multiplier for a document: home/project/group pages rate above the rest."""
    cfg = cfg or TypeFactorConfig()
    kinds = org.url_kinds.get(doc.url)
    if kinds:
        return max(cfg.for_kind(kind) for kind in kinds)
    if doc.source == "db":
        return cfg.db_factor(doc.db_kind)
    return cfg.default


def build_evidence(
    person: Person,
    graph: WebGraph,
    seeds: Iterable[SeedPoint],
    mentions: Iterable[str],
    db_doc_ids: Iterable[str],
    corpus: Corpus,
    org: OrgModel,
    prop_cfg: PropagationConfig | None = None,
    type_cfg: TypeFactorConfig | None = None,
) -> EvidenceSet:
    """Merge seed-propagated, name-mention and db-record evidence for one person.

    A document reachable by several routes keeps the maximum base weight;
    provenance records the winning route. Each document yields one fragment,
    with final weight = base weight * type factor.
    """
    prop_cfg = prop_cfg or PropagationConfig()
    type_cfg = type_cfg or TypeFactorConfig()
    seed_urls = {s.url for s in seeds}
    candidates: dict[str, tuple[float, int, str, str | None]] = {}

    def offer(doc_id: str, base: float, provenance: str, seed_url: str | None = None) -> None:
        priority = _PROV_PRIORITY[provenance]
        current = candidates.get(doc_id)
        if current is None or base > current[0] or (base == current[0] and priority < current[1]):
            candidates[doc_id] = (base, priority, provenance, seed_url)

    for url, (weight, origin) in propagate_with_sources(graph, seed_urls, prop_cfg).items():
        for doc_id in corpus.doc_ids_by_url.get(url, ()):
            if url in seed_urls:
                offer(doc_id, weight, PROV_SEED_SELF, origin)
            else:
                offer(doc_id, weight, PROV_SEED_PROPAGATED, origin)
    for doc_id in mentions:
        offer(doc_id, 1.0, PROV_NAME_MENTION)
    for doc_id in db_doc_ids:
        offer(doc_id, 1.0, PROV_DB_RECORD)

    fragments = []
    for doc_id in sorted(candidates):
        base, _, provenance, seed_url = candidates[doc_id]
        factor = type_factor(corpus.by_id[doc_id], org, type_cfg)
        fragments.append(
            EvidenceFragment(person.person_id, doc_id, base, factor, base * factor, provenance, seed_url)
        )
    return EvidenceSet(person.person_id, tuple(fragments))


def build_baseline_evidence(person: Person, corpus: Corpus) -> EvidenceSet:
    """Mention-only evidence: every document naming the person, all weights 1."""
    fragments = tuple(
        EvidenceFragment(person.person_id, doc_id, 1.0, 1.0, 1.0, PROV_NAME_MENTION)
        for doc_id in sorted(find_name_mentions(corpus, person))
    )
    return EvidenceSet(person.person_id, fragments)


def fragment_record(fragment: EvidenceFragment) -> dict:
    rec = {
        "person_id": fragment.person_id,
        "doc_id": fragment.doc_id,
        "base_weight": fragment.base_weight,
        "type_factor": fragment.type_factor,
        "final_weight": fragment.final_weight,
        "provenance": fragment.provenance,
    }
    if fragment.seed_url is not None:
        rec["seed_url"] = fragment.seed_url
    return rec


def write_evidence_dump(evidence_sets: Iterable[EvidenceSet], path) -> None:
    """Line-delimited dump of every fragment, for debugging and the UI."""
    with open(path, "w", encoding="utf-8") as fh:
        for evidence_set in evidence_sets:
            for fragment in evidence_set.fragments:
                fh.write(json.dumps(fragment_record(fragment), sort_keys=True) + "\n")


def read_evidence_dump(path) -> list[EvidenceSet]:
    by_person: dict[str, list[EvidenceFragment]] = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            fragment = EvidenceFragment(
                rec["person_id"],
                rec["doc_id"],
                rec["base_weight"],
                rec["type_factor"],
                rec["final_weight"],
                rec["provenance"],
                rec.get("seed_url"),
            )
            by_person.setdefault(fragment.person_id, []).append(fragment)
    return [EvidenceSet(pid, tuple(frags)) for pid, frags in sorted(by_person.items())]
