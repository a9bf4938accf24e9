"""URL canonicalization and link-direction classification.

Canonical form: lowercase scheme and host, query string and fragment
stripped, folder default files (index.html and friends) collapsed onto the
folder URL, and redirect/alias entries applied to a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable
from urllib.parse import urlsplit, urlunsplit

DEFAULT_INDEX_FILES = frozenset({"index.html", "index.htm", "default.html", "default.htm"})


class EdgeDirection(Enum):
    """Whether a link stays inside the source folder's subtree or leaves it."""

    DOWN_OR_SAME = "down_or_same"
    UP_OR_AWAY = "up_or_away"


def _split(raw: str):
    try:
        parts = urlsplit(raw.strip())
    except ValueError as exc:
        raise ValueError(f"malformed URL {raw!r}: {exc}") from None
    if not parts.scheme or not parts.netloc:
        raise ValueError(f"malformed URL {raw!r}: missing scheme or host")
    return parts


def canonicalize(raw: str, index_files: frozenset[str] = DEFAULT_INDEX_FILES) -> str:
    """Syntactic canonical form of ``raw``, without alias resolution."""
    parts = _split(raw)
    path = parts.path or "/"
    if not path.startswith("/"):
        path = "/" + path
    head, _, last = path.rpartition("/")
    if last.lower() in index_files:
        path = head + "/"
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(), path, "", ""))


@dataclass(frozen=True)
class AliasMap:
    """Redirect/alias table mapping alias URLs to canonical targets.

    Entries are stored with both sides in canonical syntactic form and alias
    chains collapsed, so resolution is a single lookup and applying the map
    twice equals applying it once. Cyclic alias sets are rejected.
    """

    entries: dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[str, str]],
        index_files: frozenset[str] = DEFAULT_INDEX_FILES,
    ) -> "AliasMap":
        raw: dict[str, str] = {}
        for alias, target in pairs:
            src = canonicalize(alias, index_files)
            dst = canonicalize(target, index_files)
            if src == dst:
                continue
            if src in raw and raw[src] != dst:
                raise ValueError(f"conflicting alias entries for {src}: {raw[src]} vs {dst}")
            raw[src] = dst
        entries: dict[str, str] = {}
        for alias in raw:
            seen = {alias}
            target = raw[alias]
            while target in raw:
                if target in seen:
                    raise ValueError(f"alias cycle through {target}")
                seen.add(target)
                target = raw[target]
            entries[alias] = target
        return cls(entries)

    def resolve(self, url: str) -> str:
        return self.entries.get(url, url)

    def __len__(self) -> int:
        return len(self.entries)


def normalize_url(
    raw: str,
    aliases: AliasMap | None = None,
    index_files: frozenset[str] = DEFAULT_INDEX_FILES,
) -> str:
    """Canonical URL for ``raw``: syntactic normalization plus alias resolution.

    Idempotent: normalizing an already-canonical URL returns it unchanged.
    Raises ValueError naming the input when it is not an absolute URL.
    """
    url = canonicalize(raw, index_files)
    if aliases is not None:
        url = aliases.resolve(url)
    return url


def folder_path(url: str) -> str:
    """Folder of a canonical URL: its path with any final file segment removed."""
    path = urlsplit(url).path or "/"
    if not path.startswith("/"):
        path = "/" + path
    return path[: path.rfind("/") + 1]


def classify_edge(src: str, dst: str) -> EdgeDirection:
    """DOWN_OR_SAME when dst sits in src's folder subtree on the same host.

    Everything else (ancestor folders, sibling subtrees, other hosts) is
    UP_OR_AWAY. Total and deterministic on canonical URLs.
    """
    src_parts, dst_parts = urlsplit(src), urlsplit(dst)
    if src_parts.netloc != dst_parts.netloc:
        return EdgeDirection.UP_OR_AWAY
    if folder_path(dst).startswith(folder_path(src)):
        return EdgeDirection.DOWN_OR_SAME
    return EdgeDirection.UP_OR_AWAY
