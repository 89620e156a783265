#!/usr/bin/env python3
"""Reconstruction and link-prediction AUC on the planted two-block graph.

Runs the full pipeline at default settings for a list of dimensions and
prints one table row per dimension, mirroring the benchmark layout of the
CLI's reconstruct/linkpred reports.
"""

import argparse
import json
import time

import numpy as np

from hyperwalk.corpus import build_corpus
from hyperwalk.evaluation import link_prediction_eval, make_link_split, reconstruct
from hyperwalk.seeding import NONEDGES, SPLITS, substream
from hyperwalk.synthetic import two_block_graph
from hyperwalk.trainer import TrainConfig, train
from hyperwalk.walk import WalkConfig, generate_walks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", default="2,5,10", help="comma list of dimensions")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default=None, help="optional JSON output path")
    args = ap.parse_args()
    dims = [int(x) for x in args.dims.split(",") if x]

    g = two_block_graph(np.random.default_rng(args.seed))
    print(f"graph: {g.n_nodes} nodes, {g.n_edges} edges, "
          f"{len(g.node_types)} node types")

    walks = generate_walks(g, WalkConfig(seed=args.seed))
    corpus = build_corpus(walks, window=5, n_nodes=g.n_nodes)
    split = make_link_split(g, "A-B", 0.2, rng=substream(args.seed, SPLITS))
    lp_walks = generate_walks(split.train_graph, WalkConfig(seed=args.seed))
    lp_corpus = build_corpus(lp_walks, window=5, n_nodes=split.train_graph.n_nodes)

    rows = []
    print(f"{'dim':>4} {'recon AUC':>10} {'linkpred AUC':>13} {'seconds':>8}")
    for d in dims:
        t0 = time.time()
        table, _ = train(g, corpus, TrainConfig(seed=args.seed), dim=d)
        recon = reconstruct(g, table, "A-B", rng=substream(args.seed, NONEDGES)).auc
        lp_table, _ = train(split.train_graph, lp_corpus, TrainConfig(seed=args.seed), dim=d)
        lp = link_prediction_eval(split, lp_table).auc
        rows.append({"dimension": d, "reconstruction_auc": recon, "link_prediction_auc": lp})
        print(f"{d:>4} {recon:>10.4f} {lp:>13.4f} {time.time() - t0:>8.1f}")

    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            json.dump(rows, f, indent=2)
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
