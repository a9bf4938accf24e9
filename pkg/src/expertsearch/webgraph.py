"""Directed web graph over canonical URLs with per-edge direction classes."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .urls import DEFAULT_INDEX_FILES, AliasMap, EdgeDirection, classify_edge, normalize_url

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WebGraph:
    """Immutable link graph; every edge carries its direction class."""

    nodes: frozenset[str]
    edges: dict[tuple[str, str], EdgeDirection]

    @cached_property
    def adjacency(self) -> dict[str, tuple[tuple[str, EdgeDirection], ...]]:
        table: dict[str, list[tuple[str, EdgeDirection]]] = {}
        for (src, dst), direction in sorted(self.edges.items()):
            table.setdefault(src, []).append((dst, direction))
        return {src: tuple(out) for src, out in table.items()}

    def out_edges(self, node: str) -> tuple[tuple[str, EdgeDirection], ...]:
        return self.adjacency.get(node, ())

    def subgraph(self, keep: Iterable[str]) -> "WebGraph":
        """Node-induced subgraph over ``keep`` intersected with this graph."""
        kept = frozenset(keep) & self.nodes
        edges = {(s, d): c for (s, d), c in self.edges.items() if s in kept and d in kept}
        return WebGraph(kept, edges)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def build_web_graph(
    edges: Iterable[Sequence],
    aliases: AliasMap | None = None,
    extra_nodes: Iterable[str] = (),
    index_files: frozenset[str] = DEFAULT_INDEX_FILES,
) -> WebGraph:
    """Build the direction-classified graph from raw (src, dst) link pairs.

    Accepts (src, dst) or (src, dst, lineno) entries. URLs are normalized,
    duplicate edges collapse to one, and self-loops produced by alias or
    default-file collapsing are dropped. Entries with malformed URLs are
    logged with their line number and skipped; processing continues.
    ``extra_nodes`` adds nodes (e.g. crawled pages without links) so that
    isolated pages can still act as propagation seeds.
    """
    nodes: set[str] = set()
    classified: dict[tuple[str, str], EdgeDirection] = {}
    for position, entry in enumerate(edges, 1):
        lineno = entry[2] if len(entry) > 2 else position
        try:
            src = normalize_url(entry[0], aliases, index_files)
            dst = normalize_url(entry[1], aliases, index_files)
        except ValueError as exc:
            logger.warning("links line %s skipped: %s", lineno, exc)
            continue
        nodes.add(src)
        nodes.add(dst)
        if src == dst:
            continue
        key = (src, dst)
        if key not in classified:
            classified[key] = classify_edge(src, dst)
    for raw in extra_nodes:
        nodes.add(normalize_url(raw, aliases, index_files))
    return WebGraph(frozenset(nodes), classified)
