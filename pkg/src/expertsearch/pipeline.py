"""End-to-end build: input files -> evidence -> index -> on-disk artifact.

The on-disk index directory holds index.json, org.json, evidence.jsonl and
a manifest recording input hashes, the full configuration and artifact
hashes; loading verifies the artifacts against the manifest.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .corpus import SOURCES, Corpus, check_sources, load_corpus, read_aliases, read_links
from .evidence import (
    EvidenceSet,
    PropagationConfig,
    TypeFactorConfig,
    build_baseline_evidence,
    build_evidence,
    find_name_mentions,
    write_evidence_dump,
)
from .evaluation import RunEntry, RunFile, Topic
from .org import OrgModel, SeedPoint, attach_db_documents, extract_seeds, org_from_json_dict, org_to_json_dict, parse_org
from .retrieval import FragmentIndex, IndexConfig, build_index, load_index, rank_experts, save_index
from .urls import AliasMap
from .webgraph import WebGraph, build_web_graph

logger = logging.getLogger(__name__)

SYSTEM_NEW = "new"
SYSTEM_BASE = "base"

MANIFEST_FILE = "manifest.json"
INDEX_FILE = "index.json"
ORG_FILE = "org.json"
EVIDENCE_FILE = "evidence.jsonl"

MANIFEST_VERSION = 1


def source_label(sources) -> str:
    """Run label for a source subset: intranet/extranet/web, with +db suffix."""
    chosen = check_sources(sources)
    web = {"intranet", "extranet"} & chosen
    label = "web" if len(web) == 2 else (next(iter(web)) if web else "")
    if "db" in chosen:
        label = f"{label}+db" if label else "db"
    return label


@dataclass(frozen=True)
class BuildConfig:
    propagation: PropagationConfig = PropagationConfig()
    index: IndexConfig = IndexConfig()
    type_factors: TypeFactorConfig = TypeFactorConfig()
    sources: tuple[str, ...] = SOURCES
    system: str = SYSTEM_NEW

    def __post_init__(self):
        if self.system not in (SYSTEM_NEW, SYSTEM_BASE):
            raise ValueError(f"unknown system {self.system!r}")
        check_sources(self.sources)

    def tag(self) -> str:
        return f"{self.system}-{source_label(self.sources)}"

    def to_json_dict(self) -> dict:
        return {
            "propagation": {
                "down_same_factor": self.propagation.down_same_factor,
                "up_away_factor": self.propagation.up_away_factor,
                "weight_floor": self.propagation.weight_floor,
            },
            "index": {
                "k1": self.index.k1,
                "b": self.index.b,
                "idf_floor": self.index.idf_floor,
            },
            "type_factors": {
                "person_homepage": self.type_factors.person_homepage,
                "project_homepage": self.type_factors.project_homepage,
                "group_homepage": self.type_factors.group_homepage,
                "db_kinds": sorted(self.type_factors.db_kinds),
                "default": self.type_factors.default,
            },
            "sources": sorted(self.sources),
            "system": self.system,
        }


@dataclass(frozen=True)
class Collection:
    """Parsed input files, shared by every run configuration."""

    corpus: Corpus
    links: tuple[tuple[str, str, int], ...]
    aliases: AliasMap
    org: OrgModel

    @classmethod
    def load(cls, corpus_path, org_path, links_path=None, aliases_path=None) -> "Collection":
        aliases = read_aliases(aliases_path) if aliases_path else AliasMap()
        corpus = load_corpus(corpus_path, aliases)
        links = tuple(read_links(links_path)) if links_path else ()
        org = parse_org(Path(org_path).read_bytes(), aliases)
        return cls(corpus, links, aliases, org)


@dataclass
class BuildArtifacts:
    config: BuildConfig
    corpus: Corpus
    graph: WebGraph
    org: OrgModel
    seeds: tuple[SeedPoint, ...]
    dangling_seeds: tuple[SeedPoint, ...]
    evidence: tuple[EvidenceSet, ...]
    index: FragmentIndex

    @property
    def stats(self) -> dict:
        return {
            "persons": len(self.org.persons),
            "documents": len(self.corpus),
            "graph_nodes": self.graph.node_count,
            "graph_edges": self.graph.edge_count,
            "seeds": len(self.seeds),
            "dangling_seeds": len(self.dangling_seeds),
            "fragments": self.index.fragment_count,
            "vocabulary": self.index.vocabulary_size,
        }


def build_artifacts(collection: Collection, config: BuildConfig | None = None) -> BuildArtifacts:
    """Build evidence and index for one (system, sources) configuration.

    Source restriction keeps graph nodes whose URL has no corpus record
    (pure link structure) and drops nodes whose every record is excluded.
    """
    config = config or BuildConfig()
    chosen = check_sources(config.sources)
    corpus = collection.corpus.restrict(chosen)

    full_graph = build_web_graph(
        collection.links,
        collection.aliases,
        extra_nodes=[d.url for d in collection.corpus if d.source != "db"],
    )
    url_sources = collection.corpus.url_sources
    keep = {n for n in full_graph.nodes if n not in url_sources or url_sources[n] & chosen}
    graph = full_graph.subgraph(keep)

    seeds = tuple(extract_seeds(collection.org))
    dangling = tuple(s for s in seeds if s.url not in corpus.doc_ids_by_url)
    if dangling:
        logger.warning(
            "%d of %d seed pages have no corpus record in sources %s",
            len(dangling), len(seeds), sorted(chosen),
        )
        for seed in dangling:
            logger.debug("dangling seed: %s -> %s", seed.person_id, seed.url)

    evidence: list[EvidenceSet] = []
    if config.system == SYSTEM_BASE:
        for person_id in sorted(collection.org.persons):
            evidence.append(build_baseline_evidence(collection.org.persons[person_id], corpus))
    else:
        db_docs_by_person: dict[str, list[str]] = {}
        for person_id, doc_id in attach_db_documents(collection.org, corpus):
            db_docs_by_person.setdefault(person_id, []).append(doc_id)
        seeds_by_person: dict[str, list[SeedPoint]] = {}
        for seed in seeds:
            seeds_by_person.setdefault(seed.person_id, []).append(seed)
        for person_id in sorted(collection.org.persons):
            person = collection.org.persons[person_id]
            evidence.append(
                build_evidence(
                    person,
                    graph,
                    seeds_by_person.get(person_id, ()),
                    find_name_mentions(corpus, person),
                    db_docs_by_person.get(person_id, ()),
                    corpus,
                    collection.org,
                    config.propagation,
                    config.type_factors,
                )
            )

    index = build_index(evidence, corpus, config.index)
    return BuildArtifacts(
        config, corpus, graph, collection.org, seeds, dangling, tuple(evidence), index
    )


def execute_run(
    artifacts: BuildArtifacts,
    topics: list[Topic],
    depth: int = 100,
    role_filter: str | None = None,
) -> RunFile:
    """Rank every topic against the built index; empty results stay empty."""
    results: dict[str, tuple[RunEntry, ...]] = {}
    for topic in topics:
        ranked = rank_experts(topic.query_text, depth, artifacts.index, artifacts.org, role_filter)
        results[topic.topic_id] = tuple(
            RunEntry(position, result.person_id, result.score)
            for position, result in enumerate(ranked, 1)
        )
    return RunFile(artifacts.config.tag(), results)


def _sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _sha256_file(path) -> str:
    return _sha256_bytes(Path(path).read_bytes())


def content_hash(input_hashes: dict[str, str], config: BuildConfig) -> str:
    payload = json.dumps(
        {"inputs": input_hashes, "config": config.to_json_dict()},
        sort_keys=True,
        separators=(",", ":"),
    )
    return _sha256_bytes(payload.encode("utf-8"))


def write_artifacts(artifacts: BuildArtifacts, out_dir, input_paths: dict[str, str] | None = None) -> dict:
    """Write index, org snapshot, evidence dump and manifest; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_index(artifacts.index, out / INDEX_FILE)
    (out / ORG_FILE).write_text(
        json.dumps(org_to_json_dict(artifacts.org), sort_keys=True, separators=(",", ":")),
        encoding="utf-8",
    )
    write_evidence_dump(artifacts.evidence, out / EVIDENCE_FILE)

    input_hashes = {
        name: _sha256_file(path) for name, path in sorted((input_paths or {}).items())
    }
    manifest = {
        "format_version": MANIFEST_VERSION,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "run_tag": artifacts.config.tag(),
        "inputs": {
            name: {"path": str(path), "sha256": input_hashes[name]}
            for name, path in sorted((input_paths or {}).items())
        },
        "config": artifacts.config.to_json_dict(),
        "stats": artifacts.stats,
        "artifact_hashes": {
            name: _sha256_file(out / name) for name in (INDEX_FILE, ORG_FILE, EVIDENCE_FILE)
        },
        "content_hash": content_hash(input_hashes, artifacts.config),
    }
    (out / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
    return manifest


@dataclass
class LoadedArtifacts:
    manifest: dict
    index: FragmentIndex
    org: OrgModel

    @property
    def content_hash(self) -> str:
        return self.manifest["content_hash"]


def load_artifacts(index_dir, expected_content_hash: str | None = None) -> LoadedArtifacts:
    """Reload a built index directory, refusing hash-mismatched artifacts."""
    root = Path(index_dir)
    manifest_path = root / MANIFEST_FILE
    if not manifest_path.exists():
        raise FileNotFoundError(f"no index manifest at {manifest_path}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("format_version") != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {manifest.get('format_version')!r}")
    for name, recorded in manifest.get("artifact_hashes", {}).items():
        actual = _sha256_file(root / name)
        if actual != recorded:
            raise ValueError(f"{root / name} does not match its manifest hash; rebuild the index")
    if expected_content_hash is not None and manifest["content_hash"] != expected_content_hash:
        raise ValueError(
            "index was built from different inputs or configuration "
            f"(expected {expected_content_hash}, found {manifest['content_hash']})"
        )
    index = load_index(root / INDEX_FILE)
    org = org_from_json_dict(json.loads((root / ORG_FILE).read_text(encoding="utf-8")))
    return LoadedArtifacts(manifest, index, org)
