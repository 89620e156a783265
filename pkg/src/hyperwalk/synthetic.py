"""Synthetic heterogeneous graphs for experiments and the test suite."""

from __future__ import annotations

import numpy as np

from .graph import TypedGraph


def two_block_graph(
    rng,
    sizes=(290, 20, 290),
    labels=("A", "B", "C"),
    p_in: float = 0.2,
    p_out: float = 0.01,
) -> TypedGraph:
    """Three node types split into two planted blocks, hub-spoke schema.

    The middle type acts as a small hub layer (venue-like); edges run
    A-B and B-C only, never A-C or within a type. Pairs inside the same
    block link with probability p_in, pairs straddling blocks with p_out.
    Keeping the hub type small keeps per-leaf degree low, so the
    relations stay reconstructable from a low-dimensional embedding.
    """
    nodes = []
    block = []
    for label, n in zip(labels, sizes):
        for i in range(n):
            nodes.append((f"{label.lower()}{i}", label))
            block.append(0 if i < n // 2 else 1)
    offsets = np.cumsum([0, *[n for n in sizes]])
    edges = []
    hub = 1  # index of the hub type in `labels`/`sizes`
    for leaf in (0, 2):
        for i in range(offsets[leaf], offsets[leaf + 1]):
            for j in range(offsets[hub], offsets[hub + 1]):
                p = p_in if block[i] == block[j] else p_out
                if rng.random() < p:
                    edges.append((i, j))
    return TypedGraph(nodes, edges)


def powerlaw_bipartite_graph(
    rng,
    n_hubs: int = 300,
    n_items: int = 400,
    hub_label: str = "author",
    item_label: str = "paper",
    exponent: float = 2.0,
    max_degree: int | None = None,
) -> TypedGraph:
    """Bipartite graph whose hub-type degrees follow a truncated power law."""
    if max_degree is None:
        max_degree = n_items // 2
    nodes = [(f"h{i}", hub_label) for i in range(n_hubs)]
    nodes += [(f"i{j}", item_label) for j in range(n_items)]
    degrees = np.minimum(rng.zipf(exponent, size=n_hubs), max_degree)
    edges = set()
    for i, d in enumerate(degrees):
        targets = rng.choice(n_items, size=int(d), replace=False)
        for j in targets:
            edges.add((i, n_hubs + int(j)))
    # keep every item attached so the graph has no isolated paper nodes
    linked = {v for _, v in edges}
    for j in range(n_items):
        v = n_hubs + j
        if v not in linked:
            edges.add((int(rng.integers(n_hubs)), v))
    return TypedGraph(nodes, sorted(edges))


def dblp_shaped_graph(rng, n_authors=14475, n_papers=14376, n_venues=20) -> TypedGraph:
    """A graph with DBLP-like node/type counts (structure is random)."""
    nodes = [(f"a{i}", "A") for i in range(n_authors)]
    nodes += [(f"p{i}", "P") for i in range(n_papers)]
    nodes += [(f"v{i}", "V") for i in range(n_venues)]
    edges = []
    for p in range(n_papers):
        pi = n_authors + p
        for a in rng.choice(n_authors, size=int(rng.integers(1, 4)), replace=False):
            edges.append((int(a), pi))
        edges.append((pi, n_authors + n_papers + int(rng.integers(n_venues))))
    return TypedGraph(nodes, edges)
