"""Network reconstruction, link prediction, and hierarchy diagnostics.

Pairs are scored by negated hyperbolic distance between their embeddings;
AUC uses the Mann-Whitney rank statistic with half credit for ties.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field, asdict

import numpy as np
from scipy.stats import rankdata

from . import lorentz
from .graph import EdgeType, GraphError, TypedGraph
from .trainer import EmbeddingTable

DEFAULT_MAX_NEG = 1_000_000


@dataclass
class AucReport:
    edge_type: str
    dimension: int
    auc: float
    n_pos: int
    n_neg: int
    negatives_sampled: bool = False
    warning: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class LinkSplit:
    train_graph: TypedGraph
    removed_edges: np.ndarray  # (k, 2) node indices
    sampled_non_edges: np.ndarray  # (k, 2) node indices
    edge_type: str
    warning: str | None = None


def score_pair(emb: EmbeddingTable, u: int, v: int) -> float:
    """Higher score = more likely linked; the maximum 0.0 is at u = v."""
    return -lorentz.hyperbolic_distance(emb.point(u), emb.point(v))


def _score_pairs(emb: EmbeddingTable, pairs: np.ndarray) -> np.ndarray:
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return -np.asarray(
        lorentz.hyperbolic_distance(emb.coords[pairs[:, 0]], emb.coords[pairs[:, 1]])
    )


def auc(pos_scores, neg_scores) -> float:
    """P(random positive outscores random negative), ties counted half."""
    pos = np.asarray(pos_scores, dtype=np.float64)
    neg = np.asarray(neg_scores, dtype=np.float64)
    if pos.size == 0 or neg.size == 0:
        raise ValueError("both score sets must be nonempty")
    ranks = rankdata(np.concatenate([pos, neg]))
    return float(
        (ranks[: pos.size].sum() - pos.size * (pos.size + 1) / 2.0) / (pos.size * neg.size)
    )


def _compatible_sides(g: TypedGraph, et: EdgeType) -> tuple[np.ndarray, np.ndarray]:
    ta, tb = et.endpoint_types
    return g.nodes_of_type(ta), g.nodes_of_type(tb)


def _sample_non_edges(g: TypedGraph, et: EdgeType, k: int, rng) -> np.ndarray:
    """k type-compatible non-edges of g, uniform per side, with replacement."""
    A, B = _compatible_sides(g, et)
    out = np.empty((k, 2), dtype=np.int64)
    filled = 0
    attempts = 0
    while filled < k:
        m = max(k - filled, 64)
        us = A[rng.integers(A.size, size=m)]
        vs = B[rng.integers(B.size, size=m)]
        codes = np.minimum(us, vs) * g.n_nodes + np.maximum(us, vs)
        edge_codes = g._edge_codes
        i = np.searchsorted(edge_codes, codes)
        i = np.minimum(i, max(edge_codes.size - 1, 0))
        is_edge = (edge_codes[i] == codes) if edge_codes.size else np.zeros(m, bool)
        ok = (~is_edge) & (us != vs)
        take = min(int(ok.sum()), k - filled)
        sel = np.flatnonzero(ok)[:take]
        out[filled : filled + take, 0] = us[sel]
        out[filled : filled + take, 1] = vs[sel]
        filled += take
        attempts += 1
        if attempts > 10_000:
            raise GraphError(f"cannot sample non-edges for edge type {et.label!r}")
    return out


def _all_non_edges(g: TypedGraph, et: EdgeType) -> np.ndarray:
    A, B = _compatible_sides(g, et)
    ta, tb = et.endpoint_types
    uu, vv = np.meshgrid(A, B, indexing="ij")
    us, vs = uu.ravel(), vv.ravel()
    if ta == tb:
        keep = us < vs
        us, vs = us[keep], vs[keep]
    codes = np.minimum(us, vs) * g.n_nodes + np.maximum(us, vs)
    is_edge = np.isin(codes, g._edge_codes)
    return np.stack([us[~is_edge], vs[~is_edge]], axis=1)


def reconstruct(
    g: TypedGraph,
    emb: EmbeddingTable,
    t,
    max_neg: int = DEFAULT_MAX_NEG,
    rng=None,
) -> AucReport:
    """AUC of true edges of type t against type-compatible non-edges.

    Enumerates all non-edges when their count fits max_neg, otherwise takes
    a uniform sample of max_neg (flagged in the report).
    """
    et = g.edge_type(t)
    positives = g.edges_of_type(et)
    if len(positives) == 0:
        raise GraphError(f"no edges of type {et.label!r}")
    A, B = _compatible_sides(g, et)
    ta, tb = et.endpoint_types
    total = A.size * B.size if ta != tb else A.size * (A.size - 1) // 2
    n_non = total - len(positives)
    if n_non <= 0:
        raise GraphError(f"edge type {et.label!r} is complete: no non-edges exist")
    sampled = n_non > max_neg
    if sampled:
        if rng is None:
            rng = np.random.default_rng(0)
        negatives = _sample_non_edges(g, et, max_neg, rng)
    else:
        negatives = _all_non_edges(g, et)
    return AucReport(
        edge_type=et.label,
        dimension=emb.dim,
        auc=auc(_score_pairs(emb, positives), _score_pairs(emb, negatives)),
        n_pos=len(positives),
        n_neg=len(negatives),
        negatives_sampled=sampled,
    )


def _still_connected(adj: list[set], u: int, v: int) -> bool:
    # BFS from u with early exit at v
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return False


def make_link_split(g: TypedGraph, t, fraction: float = 0.2, rng=None) -> LinkSplit:
    """Remove floor(fraction * |E_t|) edges of type t without changing the
    global connected-component count; pair them with equal-count sampled
    non-edges of the original graph.

    If too many candidate edges are bridges, returns the maximal achievable
    split with a warning set.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    et = g.edge_type(t)
    edges_t = g.edges_of_type(et)
    target = int(fraction * len(edges_t))
    order = rng.permutation(len(edges_t))
    adj: list[set] = [set(map(int, g.neighbors(v))) for v in range(g.n_nodes)]
    removed: list[tuple[int, int]] = []
    for i in order:
        if len(removed) == target:
            break
        u, v = map(int, edges_t[i])
        adj[u].discard(v)
        adj[v].discard(u)
        if _still_connected(adj, u, v):
            removed.append((u, v))
        else:
            adj[u].add(v)
            adj[v].add(u)
    warning = None
    if len(removed) < target:
        warning = f"only {len(removed)} of {target} edges removable without splitting components"
    removed_set = {(min(u, v), max(u, v)) for u, v in removed}
    nodes = [(nid, g.node_types[t_].label) for nid, t_ in zip(g.node_ids, g.node_type_of)]
    kept = [
        (int(u), int(v), g.edge_types[int(te)].label)
        for (u, v), te in zip(g.edges, g.edge_type_of)
        if (min(u, v), max(u, v)) not in removed_set
    ]
    train_graph = TypedGraph(nodes, kept)
    non_edges = (
        _sample_non_edges(g, et, len(removed), rng)
        if removed
        else np.empty((0, 2), dtype=np.int64)
    )
    return LinkSplit(
        train_graph=train_graph,
        removed_edges=np.asarray(removed, dtype=np.int64).reshape(-1, 2),
        sampled_non_edges=non_edges,
        edge_type=et.label,
        warning=warning,
    )


def save_link_split(split: LinkSplit, out_dir, g: TypedGraph) -> None:
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    split.train_graph.save(out / "train_nodes.tsv", out / "train_edges.tsv")
    for name, pairs in (
        ("removed_edges.tsv", split.removed_edges),
        ("non_edges.tsv", split.sampled_non_edges),
    ):
        with open(out / name, "w", encoding="utf-8") as f:
            for u, v in pairs:
                f.write(f"{g.node_ids[u]}\t{g.node_ids[v]}\n")
    with open(out / "split.json", "w", encoding="utf-8") as f:
        json.dump({"edge_type": split.edge_type, "warning": split.warning}, f, indent=2)


def load_link_split(out_dir, g: TypedGraph) -> LinkSplit:
    from pathlib import Path

    from .graph import load_graph

    out = Path(out_dir)
    train_graph = load_graph(out / "train_nodes.tsv", out / "train_edges.tsv")

    def read_pairs(name):
        rows = []
        with open(out / name, encoding="utf-8") as f:
            for line in f:
                a, b = line.rstrip("\n").split("\t")
                rows.append((g.node_index(a), g.node_index(b)))
        return np.asarray(rows, dtype=np.int64).reshape(-1, 2)

    with open(out / "split.json", encoding="utf-8") as f:
        meta = json.load(f)
    return LinkSplit(
        train_graph=train_graph,
        removed_edges=read_pairs("removed_edges.tsv"),
        sampled_non_edges=read_pairs("non_edges.tsv"),
        edge_type=meta["edge_type"],
        warning=meta.get("warning"),
    )


def link_prediction_eval(split: LinkSplit, emb: EmbeddingTable) -> AucReport:
    """AUC over removed edges vs the split's sampled non-edges."""
    if len(split.removed_edges) == 0:
        raise ValueError("link split has no removed edges")
    return AucReport(
        edge_type=split.edge_type,
        dimension=emb.dim,
        auc=auc(
            _score_pairs(emb, split.removed_edges),
            _score_pairs(emb, split.sampled_non_edges),
        ),
        n_pos=len(split.removed_edges),
        n_neg=len(split.sampled_non_edges),
        warning=split.warning,
    )


@dataclass
class RegionBand:
    upper_bound: float | None  # None marks the overflow bucket
    count: int
    mean_degree: float


@dataclass
class RegionReport:
    node_type: str
    boundaries: list[float]
    regions: list[RegionBand] = field(default_factory=list)
    overflow: RegionBand | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def region_stats(
    g: TypedGraph, emb: EmbeddingTable, t, boundaries=(2.0, 4.0, 6.0)
) -> RegionReport:
    """Radial hierarchy bands for one node type.

    Each node goes to the first band whose upper boundary is >= its
    hyperbolic distance to the disk origin (measured on the projected
    Poincare ball); nodes beyond the last boundary land in an overflow
    bucket.
    """
    nt = g.node_type(t)
    nodes = g.nodes_of_type(nt)
    p = lorentz.to_poincare(emb.coords[nodes])
    radius = np.asarray(lorentz.poincare_distance(np.zeros(p.shape[1]), p))
    degrees = np.asarray([g.degree(int(v)) for v in nodes], dtype=np.float64)
    bounds = list(boundaries)
    band = np.searchsorted(bounds, radius, side="left")
    report = RegionReport(node_type=nt.label, boundaries=bounds)
    for i, ub in enumerate(bounds):
        mask = band == i
        n = int(mask.sum())
        report.regions.append(
            RegionBand(ub, n, float(degrees[mask].mean()) if n else float("nan"))
        )
    over = band == len(bounds)
    n_over = int(over.sum())
    report.overflow = RegionBand(
        None, n_over, float(degrees[over].mean()) if n_over else float("nan")
    )
    return report


def export_projection(emb: EmbeddingTable, out, g: TypedGraph) -> None:
    """Poincare-disk projection TSV: node_id, type, p_1, p_2, radius.

    For dim > 2, the point is restricted to its first two spatial
    coordinates (time coordinate recomputed) before projecting.
    """
    coords = emb.coords
    if emb.dim > 2:
        coords = lorentz.normalize(coords[:, [0, 1, -1]])
    p = lorentz.to_poincare(coords)
    radius = np.asarray(lorentz.poincare_distance(np.zeros(2), p))
    with open(out, "w", encoding="utf-8") as f:
        for v in range(emb.n_nodes):
            label = g.node_types[g.node_type_of[v]].label
            row = "\t".join(repr(float(x)) for x in (p[v, 0], p[v, 1], radius[v]))
            f.write(f"{g.node_ids[v]}\t{label}\t{row}\n")
