"""Fragment indexing and Okapi-weighted expert ranking.

Fragment scores are BM25 similarity times the fragment's final evidence
weight; a person's score is the sum over their fragments. All structures
are deterministic regardless of build order and immutable once built.
"""

from __future__ import annotations

import bisect
import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .corpus import Corpus
from .evidence import EvidenceFragment, EvidenceSet
from .org import OrgModel

INDEX_FORMAT_VERSION = 1

_TOKEN = re.compile(r"[^\W_]+")


def tokenize(text: str) -> list[str]:
    """Lowercased alphanumeric runs; everything else separates tokens."""
    return _TOKEN.findall(text.lower())


@dataclass(frozen=True)
class IndexConfig:
    k1: float = 1.2
    b: float = 0.75
    idf_floor: float = 0.0

    def __post_init__(self):
        if self.k1 < 0:
            raise ValueError("k1 must be >= 0")
        if not 0 <= self.b <= 1:
            raise ValueError("b must lie in [0, 1]")


@dataclass(frozen=True)
class DocInfo:
    url: str
    title: str
    source: str


@dataclass(frozen=True)
class ExpertResult:
    person_id: str
    score: float
    fragments: tuple[tuple[str, float], ...]  # (doc_id, fragment_score), descending


@dataclass(frozen=True)
class FragmentIndex:
    config: IndexConfig
    fragments: tuple[EvidenceFragment, ...]  # sorted by (person_id, doc_id)
    lengths: tuple[int, ...]
    postings: dict[str, tuple[tuple[int, int], ...]]  # term -> ((fragment idx, tf), ...)
    documents: dict[str, DocInfo]

    @property
    def fragment_count(self) -> int:
        return len(self.fragments)

    @property
    def avg_length(self) -> float:
        return sum(self.lengths) / len(self.lengths) if self.lengths else 0.0

    @property
    def vocabulary_size(self) -> int:
        return len(self.postings)

    @cached_property
    def fragment_lookup(self) -> dict[tuple[str, str], EvidenceFragment]:
        return {(f.person_id, f.doc_id): f for f in self.fragments}

    @cached_property
    def person_ids(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for fragment in self.fragments:
            seen.setdefault(fragment.person_id)
        return tuple(seen)


def build_index(
    evidence_sets: Iterable[EvidenceSet],
    corpus: Corpus,
    cfg: IndexConfig | None = None,
) -> FragmentIndex:
    """Index every fragment's document text; insertion order does not matter."""
    cfg = cfg or IndexConfig()
    fragments = sorted(
        (f for es in evidence_sets for f in es.fragments),
        key=lambda f: (f.person_id, f.doc_id),
    )
    lengths: list[int] = []
    postings: dict[str, list[tuple[int, int]]] = {}
    documents: dict[str, DocInfo] = {}
    for idx, fragment in enumerate(fragments):
        doc = corpus.by_id.get(fragment.doc_id)
        if doc is None:
            raise ValueError(
                f"fragment ({fragment.person_id}, {fragment.doc_id}) "
                "references a document missing from the corpus"
            )
        tokens = tokenize(doc.text)
        lengths.append(len(tokens))
        for term, tf in Counter(tokens).items():
            postings.setdefault(term, []).append((idx, tf))
        documents[fragment.doc_id] = DocInfo(doc.url, doc.title, doc.source)
    return FragmentIndex(
        cfg,
        tuple(fragments),
        tuple(lengths),
        {term: tuple(entries) for term, entries in sorted(postings.items())},
        dict(sorted(documents.items())),
    )


def _idf(fragment_count: int, df: int) -> float:
    return math.log(1.0 + (fragment_count - df + 0.5) / (df + 0.5))


def okapi_score(
    query_tokens: Iterable[str],
    fragment_idx: int,
    index: FragmentIndex,
    cfg: IndexConfig | None = None,
) -> float:
    """BM25 similarity between a query and one indexed fragment."""
    cfg = cfg or index.config
    n = index.fragment_count
    if n == 0:
        return 0.0
    avg = index.avg_length
    length_norm = cfg.k1 * (1.0 - cfg.b + cfg.b * (index.lengths[fragment_idx] / avg if avg else 0.0))
    score = 0.0
    for term in sorted(set(query_tokens)):
        plist = index.postings.get(term)
        if not plist:
            continue
        pos = bisect.bisect_left(plist, (fragment_idx,))
        if pos == len(plist) or plist[pos][0] != fragment_idx:
            continue
        tf = plist[pos][1]
        idf = max(_idf(n, len(plist)), cfg.idf_floor)
        score += idf * tf * (cfg.k1 + 1.0) / (tf + length_norm)
    return score


def rank_experts(
    query: str,
    k: int,
    index: FragmentIndex,
    org: OrgModel,
    role_filter: str | None = None,
) -> list[ExpertResult]:
    """Top-k persons by summed fragment score for ``query``.

    Fragment score is BM25 times the fragment's final weight. Persons with
    zero score are omitted; ties break by ascending person_id.
    """
    if k <= 0:
        raise ValueError(f"k must be positive, got {k}")
    n = index.fragment_count
    avg = index.avg_length
    k1, b = index.config.k1, index.config.b
    frag_scores: dict[int, float] = {}
    for term in sorted(set(tokenize(query))):
        plist = index.postings.get(term)
        if not plist:
            continue
        idf = max(_idf(n, len(plist)), index.config.idf_floor)
        for idx, tf in plist:
            length_norm = k1 * (1.0 - b + b * (index.lengths[idx] / avg if avg else 0.0))
            gain = idf * tf * (k1 + 1.0) / (tf + length_norm)
            frag_scores[idx] = frag_scores.get(idx, 0.0) + gain

    contributions: dict[str, list[tuple[str, float]]] = {}
    for idx in sorted(frag_scores):
        fragment = index.fragments[idx]
        contributions.setdefault(fragment.person_id, []).append(
            (fragment.doc_id, frag_scores[idx] * fragment.final_weight)
        )

    results = []
    for person_id in sorted(contributions):
        if role_filter is not None:
            person = org.persons.get(person_id)
            if person is None or role_filter not in person.roles:
                continue
        total = 0.0
        for _, fragment_score in contributions[person_id]:
            total += fragment_score
        if total <= 0.0:
            continue
        ranked_fragments = tuple(
            sorted(contributions[person_id], key=lambda c: (-c[1], c[0]))
        )
        results.append(ExpertResult(person_id, total, ranked_fragments))
    results.sort(key=lambda r: (-r.score, r.person_id))
    return results[:k]


def index_to_json_dict(index: FragmentIndex) -> dict:
    return {
        "format_version": INDEX_FORMAT_VERSION,
        "config": {"k1": index.config.k1, "b": index.config.b, "idf_floor": index.config.idf_floor},
        "fragments": [
            [f.person_id, f.doc_id, f.base_weight, f.type_factor, f.final_weight, f.provenance, f.seed_url]
            for f in index.fragments
        ],
        "lengths": list(index.lengths),
        "postings": {term: [[idx, tf] for idx, tf in plist] for term, plist in index.postings.items()},
        "documents": {
            doc_id: {"url": info.url, "title": info.title, "source": info.source}
            for doc_id, info in index.documents.items()
        },
    }


def index_from_json_dict(data: dict) -> FragmentIndex:
    if data.get("format_version") != INDEX_FORMAT_VERSION:
        raise ValueError(f"unsupported index format version {data.get('format_version')!r}")
    cfg = IndexConfig(**data["config"])
    fragments = tuple(EvidenceFragment(*row) for row in data["fragments"])
    postings = {
        term: tuple((int(idx), int(tf)) for idx, tf in plist)
        for term, plist in sorted(data["postings"].items())
    }
    documents = {
        doc_id: DocInfo(rec["url"], rec["title"], rec["source"])
        for doc_id, rec in sorted(data["documents"].items())
    }
    return FragmentIndex(cfg, fragments, tuple(data["lengths"]), postings, documents)


def save_index(index: FragmentIndex, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(index_to_json_dict(index), fh, sort_keys=True, separators=(",", ":"))


def load_index(path) -> FragmentIndex:
    with open(path, encoding="utf-8") as fh:
        return index_from_json_dict(json.load(fh))
