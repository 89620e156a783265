"""Riemannian SGD on the hyperboloid for the negative-sampling softmax loss.

For each positive pair (u, v) with negatives M, the per-pair loss is

    -log( exp(-d^2(e_u, e_v)) / sum_{w in {v} u M} exp(-d^2(e_u, e_w)) )

evaluated with a log-sum-exp shift. Gradients flow through the squared
hyperbolic distance (smooth at coincidence), get projected onto tangent
spaces, and every touched point takes one exact exponential-map step per
batch, followed by re-normalization onto the manifold.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import lorentz, seeding
from .corpus import SampleCorpus, sample_negatives_batch
from .graph import TypedGraph


class TrainingDiverged(RuntimeError):
    """Non-finite loss or gradient encountered."""


@dataclass
class TrainConfig:
    lr: float = 0.3
    batch_size: int = 512
    epochs: int = 5
    negatives_per_positive: int = 20
    init_scale: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if min(self.lr, self.batch_size, self.negatives_per_positive, self.init_scale) <= 0:
            raise ValueError("lr, batch_size, negatives, init_scale must be positive")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")


class EmbeddingTable:
    """node index -> hyperboloid point; the trainable model state."""

    def __init__(self, coords: np.ndarray):
        self.coords = np.asarray(coords, dtype=np.float64)
        if self.coords.ndim != 2 or self.coords.shape[1] < 3:
            raise ValueError("coords must be (n_nodes, dim + 1) with dim >= 2")

    @property
    def dim(self) -> int:
        return self.coords.shape[1] - 1

    @property
    def n_nodes(self) -> int:
        return self.coords.shape[0]

    def point(self, v: int) -> np.ndarray:
        return self.coords[v]

    def copy(self) -> "EmbeddingTable":
        return EmbeddingTable(self.coords.copy())

    def save_tsv(self, path, g: TypedGraph) -> None:
        """``node_id<TAB>type_label<TAB>x_1<TAB>...<TAB>x_{d+1}``.

        Coordinates use shortest round-trip decimals, so a reload is
        bit-exact.
        """
        with open(path, "w", encoding="utf-8") as f:
            for v in range(self.n_nodes):
                label = g.node_types[g.node_type_of[v]].label
                coords = "\t".join(repr(float(c)) for c in self.coords[v])
                f.write(f"{g.node_ids[v]}\t{label}\t{coords}\n")

    @staticmethod
    def load_tsv(path) -> tuple["EmbeddingTable", list[str], list[str]]:
        ids, labels, rows = [], [], []
        with open(path, encoding="utf-8") as f:
            for line in f:
                fields = line.rstrip("\n").split("\t")
                ids.append(fields[0])
                labels.append(fields[1])
                rows.append([float(x) for x in fields[2:]])
        return EmbeddingTable(np.asarray(rows)), ids, labels


def load_embeddings_for_graph(path, g: TypedGraph) -> EmbeddingTable:
    """Load a saved table and reorder rows to match g's node indexing."""
    table, ids, _ = EmbeddingTable.load_tsv(path)
    order = np.asarray([g.node_index(i) for i in ids])
    coords = np.empty_like(table.coords)
    coords[order] = table.coords
    if len(ids) != g.n_nodes:
        raise ValueError(f"{path} covers {len(ids)} nodes, graph has {g.n_nodes}")
    return EmbeddingTable(coords)


def init_embeddings(g: TypedGraph, d: int, init_scale: float, rng) -> EmbeddingTable:
    """All nodes near the hyperboloid origin with small uniform spatial noise."""
    if d < 2:
        raise ValueError("embedding dimension must be >= 2")
    spatial = rng.uniform(-init_scale, init_scale, size=(g.n_nodes, d))
    coords = np.empty((g.n_nodes, d + 1))
    coords[:, :-1] = spatial
    coords[:, -1] = np.sqrt(1.0 + np.sum(spatial**2, axis=1))
    return EmbeddingTable(coords)


def _sq_dist_grad_factor(d: np.ndarray) -> np.ndarray:
    # d(d^2)/dx = factor * (-y) with factor = 2 d / sinh d; finite limit 2 at d = 0
    small = d < 1e-7
    safe = np.where(small, 1.0, d)
    return np.where(small, 2.0, 2.0 * safe / np.sinh(safe))


def _pair_terms(U: np.ndarray, W: np.ndarray):
    """Loss and ambient gradients for B pairs against their candidate sets.

    U: (B, n+1) anchors; W: (B, K, n+1) with the positive partner first.
    Returns per-pair losses, softmax weights, and Minkowski-raised ambient
    gradients for anchors (B, n+1) and candidates (B, K, n+1).
    """
    inner = np.einsum("bd,bkd->bk", U[:, :-1], W[:, :, :-1]) - U[:, -1:] * W[:, :, -1]
    a = np.clip(-inner, 1.0, None)
    d = lorentz._arccosh(a)
    s = -d * d
    m = s.max(axis=1, keepdims=True)
    lse = m[:, 0] + np.log(np.sum(np.exp(s - m), axis=1))
    loss = lse - s[:, 0]
    p = np.exp(s - lse[:, None])
    coeff = -p
    coeff[:, 0] += 1.0  # d loss / d (d^2) per candidate
    c = coeff * _sq_dist_grad_factor(d)
    grad_u = -np.einsum("bk,bkd->bd", c, W)
    grad_w = -c[:, :, None] * U[:, None, :]
    return loss, p, grad_u, grad_w


def pair_softmax(e_u: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Softmax weights exp(-d^2) over a candidate set; sums to 1."""
    U = np.asarray(e_u, dtype=np.float64)[None, :]
    W = np.asarray(candidates, dtype=np.float64)[None, :, :]
    _, p, _, _ = _pair_terms(U, W)
    return p[0]


def _stack_candidates(e_v, negs):
    negs = [np.asarray(n, dtype=np.float64) for n in negs]
    return np.stack([np.asarray(e_v, dtype=np.float64), *negs], axis=0)


def pair_loss(e_u, e_v, negs=()) -> float:
    W = _stack_candidates(e_v, negs)[None, :, :]
    loss, _, _, _ = _pair_terms(np.asarray(e_u, dtype=np.float64)[None, :], W)
    return float(loss[0])


def pair_gradients(e_u, e_v, negs=()):
    """Tangent-space gradients of the pair loss for u, v, and each negative."""
    e_u = np.asarray(e_u, dtype=np.float64)
    W = _stack_candidates(e_v, negs)
    _, _, grad_u, grad_w = _pair_terms(e_u[None, :], W[None, :, :])
    gu = lorentz.project_to_tangent(e_u, grad_u[0])
    gw = lorentz.project_to_tangent(W, grad_w[0])
    return gu, gw[0], [gw[i] for i in range(1, W.shape[0])]


def train(
    g: TypedGraph,
    corpus: SampleCorpus,
    cfg: TrainConfig,
    dim: int,
    table: EmbeddingTable | None = None,
    track_drift: bool = False,
) -> tuple[EmbeddingTable, list[dict]]:
    """SGD over a seed-shuffled pair multiset; returns (table, epoch log).

    Per batch: fresh frequency-proportional negatives, gradients summed per
    node, one exponential-map step per touched node, then re-normalization.
    Fully deterministic for a fixed cfg.seed.
    """
    if len(corpus) == 0:
        raise ValueError("corpus is empty")
    if table is None:
        table = init_embeddings(g, dim, cfg.init_scale, seeding.substream(cfg.seed, seeding.INIT))
    elif table.dim != dim:
        raise ValueError(f"table dimension {table.dim} != requested {dim}")
    coords = table.coords
    neg_rng = seeding.substream(cfg.seed, seeding.NEGATIVES)
    shuffle_rng = seeding.substream(cfg.seed, seeding.SHUFFLE)
    k = cfg.negatives_per_positive
    pairs = corpus.pairs
    history: list[dict] = []
    max_drift = 0.0
    for epoch in range(cfg.epochs):
        t0 = time.perf_counter()
        order = shuffle_rng.permutation(len(pairs))
        loss_sum = 0.0
        chunk = cfg.batch_size * 128  # negatives drawn in bulk, consumed per batch
        neg_pool = np.empty((0, k), dtype=np.int64)
        pool_at = 0
        for b0 in range(0, len(order), cfg.batch_size):
            idx = order[b0 : b0 + cfg.batch_size]
            u_idx = pairs[idx, 0]
            v_idx = pairs[idx, 1]
            if pool_at + idx.size > len(neg_pool):
                cidx = order[b0 : b0 + chunk]
                neg_pool = sample_negatives_batch(corpus, pairs[cidx, 0], k, neg_rng)
                pool_at = 0
            negs = neg_pool[pool_at : pool_at + idx.size]
            pool_at += idx.size
            w_idx = np.concatenate([v_idx[:, None], negs], axis=1)
            U = coords[u_idx]
            W = coords[w_idx]
            loss, _, grad_u, grad_w = _pair_terms(U, W)
            batch_loss = float(loss.sum())
            if not np.isfinite(batch_loss):
                raise TrainingDiverged(
                    f"non-finite loss in epoch {epoch}, batch {b0 // cfg.batch_size}"
                )
            # per-node mean of the per-pair gradients: a node pulled by many
            # pairs in one batch takes one averaged step, so step sizes stay
            # O(lr) no matter how often a hub appears in the batch
            flat_idx = np.concatenate([u_idx, w_idx.ravel()])
            flat_grad = np.concatenate([grad_u, grad_w.reshape(-1, dim + 1)])
            acc_full = np.empty((g.n_nodes, dim + 1))
            for j in range(dim + 1):  # bincount beats ufunc.at by a wide margin
                acc_full[:, j] = np.bincount(flat_idx, weights=flat_grad[:, j], minlength=g.n_nodes)
            counts = np.bincount(flat_idx, minlength=g.n_nodes)
            touched = np.flatnonzero(counts)
            acc = acc_full[touched] / counts[touched, None]
            x = coords[touched]
            step = lorentz.project_to_tangent(x, -cfg.lr * acc)
            moved = lorentz.exp_map(x, step, check_tangent=False)
            if not np.all(np.isfinite(moved)):
                raise TrainingDiverged(
                    f"non-finite update in epoch {epoch}, batch {b0 // cfg.batch_size}"
                )
            if track_drift:
                drift = np.abs(lorentz.minkowski_inner(moved, moved) + 1.0)
                max_drift = max(max_drift, float(drift.max()))
            coords[touched] = lorentz.normalize(moved)
            loss_sum += batch_loss
        history.append(
            {
                "epoch": epoch,
                "mean_loss": loss_sum / len(pairs),
                "wall_time_s": time.perf_counter() - t0,
            }
        )
    if track_drift:
        for h in history:
            h["max_manifold_drift"] = max_drift
    return table, history
