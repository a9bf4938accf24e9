"""Corpus records and the line-delimited input files (corpus, links, aliases)."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .urls import AliasMap, normalize_url

logger = logging.getLogger(__name__)

SOURCES = ("intranet", "extranet", "db")
DB_KINDS = ("project_description", "publication", "contact")


@dataclass(frozen=True)
class Document:
    """One crawled page or corporate-database record.

    db records carry linkage metadata: ``project_id`` for project
    descriptions, ``person_ids`` for publication authors or contact persons.
    """

    doc_id: str
    url: str
    source: str
    title: str = ""
    content: str = ""
    db_kind: str | None = None
    project_id: str | None = None
    person_ids: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.doc_id:
            raise ValueError("document without doc_id")
        if not self.url:
            raise ValueError(f"document {self.doc_id}: empty url")
        if self.source not in SOURCES:
            raise ValueError(f"document {self.doc_id}: unknown source {self.source!r}")
        if (self.source == "db") != (self.db_kind is not None):
            raise ValueError(f"document {self.doc_id}: db_kind must be set exactly for db records")
        if self.db_kind is not None and self.db_kind not in DB_KINDS:
            raise ValueError(f"document {self.doc_id}: unknown db_kind {self.db_kind!r}")
        object.__setattr__(self, "person_ids", tuple(self.person_ids))

    @property
    def text(self) -> str:
        """Indexable text: title plus body."""
        return f"{self.title}\n{self.content}" if self.title else self.content


@dataclass(frozen=True)
class Corpus:
    """Immutable set of documents, held in doc_id order."""

    documents: tuple[Document, ...]

    @classmethod
    def from_documents(cls, documents: Iterable[Document]) -> "Corpus":
        docs = sorted(documents, key=lambda d: d.doc_id)
        for left, right in zip(docs, docs[1:]):
            if left.doc_id == right.doc_id:
                raise ValueError(f"duplicate doc_id {left.doc_id}")
        return cls(tuple(docs))

    @cached_property
    def by_id(self) -> dict[str, Document]:
        return {d.doc_id: d for d in self.documents}

    @cached_property
    def doc_ids_by_url(self) -> dict[str, tuple[str, ...]]:
        table: dict[str, list[str]] = {}
        for doc in self.documents:
            table.setdefault(doc.url, []).append(doc.doc_id)
        return {url: tuple(ids) for url, ids in table.items()}

    @cached_property
    def url_sources(self) -> dict[str, frozenset[str]]:
        table: dict[str, set[str]] = {}
        for doc in self.documents:
            table.setdefault(doc.url, set()).add(doc.source)
        return {url: frozenset(s) for url, s in table.items()}

    def restrict(self, sources: Iterable[str]) -> "Corpus":
        chosen = check_sources(sources)
        return Corpus(tuple(d for d in self.documents if d.source in chosen))

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)


def check_sources(sources: Iterable[str]) -> frozenset[str]:
    chosen = frozenset(sources)
    if not chosen:
        raise ValueError("empty source set")
    unknown = chosen - set(SOURCES)
    if unknown:
        raise ValueError(f"unknown sources: {sorted(unknown)}")
    return chosen


def document_record(doc: Document) -> dict:
    rec = {
        "doc_id": doc.doc_id,
        "url": doc.url,
        "source": doc.source,
        "title": doc.title,
        "content": doc.content,
    }
    if doc.db_kind is not None:
        rec["db_kind"] = doc.db_kind
    if doc.project_id is not None:
        rec["project_id"] = doc.project_id
    if doc.person_ids:
        rec["person_ids"] = list(doc.person_ids)
    return rec


def load_corpus(path, aliases: AliasMap | None = None) -> Corpus:
    """Read a JSON-lines corpus file; URLs are normalized on the way in.

    Malformed records are fatal and reported with their line number.
    """
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                person_ids = rec.get("person_ids", [])
                if not isinstance(person_ids, list):
                    raise ValueError("person_ids must be a list")
                doc = Document(
                    doc_id=str(rec["doc_id"]),
                    url=normalize_url(str(rec["url"]), aliases),
                    source=str(rec["source"]),
                    title=str(rec.get("title", "")),
                    content=str(rec.get("content", "")),
                    db_kind=rec.get("db_kind"),
                    project_id=rec.get("project_id"),
                    person_ids=tuple(str(p) for p in person_ids),
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}: corpus line {lineno}: {exc}") from None
            docs.append(doc)
    return Corpus.from_documents(docs)


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus:
            fh.write(json.dumps(document_record(doc), sort_keys=True) + "\n")


def read_links(path) -> list[tuple[str, str, int]]:
    """(src, dst, lineno) triples from a tab-separated links file.

    ``#``-prefixed and blank lines are skipped; lines without exactly two
    fields are reported with their line number and skipped.
    """
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2 or not all(f.strip() for f in fields):
                logger.warning("%s: links line %d: expected src<TAB>dst, got %r", path, lineno, stripped)
                continue
            out.append((fields[0].strip(), fields[1].strip(), lineno))
    return out


def read_aliases(path) -> AliasMap:
    """AliasMap from a tab-separated ``alias<TAB>canonical`` file."""
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            fields = line.rstrip("\n").split("\t")
            if len(fields) != 2 or not all(f.strip() for f in fields):
                logger.warning("%s: aliases line %d: expected alias<TAB>canonical, got %r", path, lineno, stripped)
                continue
            pairs.append((fields[0].strip(), fields[1].strip()))
    return AliasMap.from_pairs(pairs)
