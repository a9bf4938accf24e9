"""Independent reference implementations the main code is checked against."""

import math

from expertsearch.evidence import PropagationConfig


def brute_force_propagation(graph, seeds, cfg=None):
    """Max-product weights by exhaustive enumeration of simple paths.

    Kept deliberately independent of the production search: plain DFS over
    all simple paths from every seed, multiplying factors left to right.
    """
    cfg = cfg or PropagationConfig()
    best = {}

    def dfs(node, weight, visited):
        if weight < cfg.weight_floor:
            return
        if weight > best.get(node, 0.0):
            best[node] = weight
        for dst, direction in graph.out_edges(node):
            if dst not in visited:
                dfs(dst, weight * cfg.factor(direction), visited | {dst})

    for seed in sorted(set(seeds) & graph.nodes):
        dfs(seed, 1.0, {seed})
    return best


def reference_bm25(query_tokens, doc_tokens, all_doc_tokens, k1=1.2, b=0.75, idf_floor=0.0):
    """Textbook BM25 computed directly from token lists."""
    n = len(all_doc_tokens)
    if n == 0:
        return 0.0
    avg = sum(len(d) for d in all_doc_tokens) / n
    score = 0.0
    for term in sorted(set(query_tokens)):
        tf = doc_tokens.count(term)
        if tf == 0:
            continue
        df = sum(1 for d in all_doc_tokens if term in d)
        idf = max(math.log(1.0 + (n - df + 0.5) / (df + 0.5)), idf_floor)
        length_norm = k1 * (1.0 - b + b * len(doc_tokens) / avg) if avg else k1
        score += idf * tf * (k1 + 1.0) / (tf + length_norm)
    return score
