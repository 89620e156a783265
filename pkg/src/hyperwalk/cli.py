"""Command-line front-end: train / reconstruct / linkpred / sweep / project.

All randomness flows from one --seed through named substreams, so
single-threaded runs with identical flags are byte-identical. Every run
writes a manifest.json with the fully resolved configuration. Any flag
default can be overridden with an environment variable prefixed
``HYPERWALK_`` (e.g. HYPERWALK_SEED=7).

Exit codes: 0 ok, 1 runtime failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, seeding
from .corpus import SamplerConfig, build_corpus
from .evaluation import (
    link_prediction_eval,
    load_link_split,
    make_link_split,
    reconstruct,
    region_stats,
    export_projection,
    save_link_split,
)
from .graph import load_graph
from .trainer import EmbeddingTable, TrainConfig, load_embeddings_for_graph, train
from .walk import WalkConfig, dump_walks, generate_walks

ENV_PREFIX = "HYPERWALK_"


def _env(name: str, cast, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    return cast(raw) if raw is not None else default


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nodes", required=True, help="node TSV: node_id<TAB>type_label")
    p.add_argument("--edges", required=True, help="edge TSV: src<TAB>dst[<TAB>edge_label]")
    p.add_argument("--out", default=_env("out", str, "out"), help="output directory")
    p.add_argument("--seed", type=int, default=_env("seed", int, 0))
    p.add_argument("--threads", type=int, default=_env("threads", int, 1))


def _add_pipeline(p: argparse.ArgumentParser) -> None:
    p.add_argument("--walks", type=int, default=_env("walks", int, 10), help="walks per node")
    p.add_argument("--walk-length", type=int, default=_env("walk_length", int, 80))
    p.add_argument("--window", type=int, default=_env("window", int, 5))
    p.add_argument("--negatives", type=int, default=_env("negatives", int, 20))
    p.add_argument("--lr", type=float, default=_env("lr", float, 0.3))
    p.add_argument("--batch", type=int, default=_env("batch", int, 512))
    p.add_argument("--epochs", type=int, default=_env("epochs", int, 5))


def _dims(args) -> list[int]:
    if getattr(args, "dims", None):
        return [int(x) for x in str(args.dims).split(",") if x]
    return [int(args.dim)]


def _write_manifest(args, command: str) -> None:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    resolved = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    resolved.pop("func", None)
    manifest = {
        "command": command,
        "config": resolved,
        "version": __version__,
        "deterministic": int(getattr(args, "threads", 1)) <= 1 or command != "train",
    }
    with open(out / "manifest.json", "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)


def _pipeline_configs(args):
    wcfg = WalkConfig(walks_per_node=args.walks, walk_length=args.walk_length, seed=args.seed)
    scfg = SamplerConfig(window=args.window, negatives_per_positive=args.negatives)
    tcfg = TrainConfig(
        lr=args.lr,
        batch_size=args.batch,
        epochs=args.epochs,
        negatives_per_positive=args.negatives,
        seed=args.seed,
    )
    return wcfg, scfg, tcfg


def _train_table(g, args, dim, wcfg, scfg, tcfg):
    walks = generate_walks(g, wcfg, threads=args.threads)
    corpus = build_corpus(walks, scfg.window, g.n_nodes)
    table, history = train(g, corpus, tcfg, dim)
    return walks, table, history


def cmd_train(args) -> int:
    g = load_graph(args.nodes, args.edges)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(args, "train")
    wcfg, scfg, tcfg = _pipeline_configs(args)
    walks = generate_walks(g, wcfg, threads=args.threads)
    if args.dump_walks:
        dump_walks(walks, g, args.dump_walks)
    corpus = build_corpus(walks, scfg.window, g.n_nodes)
    dims = _dims(args)
    for d in dims:
        table, history = train(g, corpus, tcfg, d)
        suffix = "" if len(dims) == 1 else f"_d{d}"
        table.save_tsv(out / f"embeddings{suffix}.tsv", g)
        with open(out / f"train_log{suffix}.jsonl", "w", encoding="utf-8") as f:
            for h in history:
                f.write(json.dumps(h) + "\n")
    return 0


def cmd_reconstruct(args) -> int:
    g = load_graph(args.nodes, args.edges)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(args, "reconstruct")
    edge_types = [args.edge_type] if args.edge_type else [t.label for t in g.edge_types]
    rng = seeding.substream(args.seed, seeding.NONEDGES)
    reports = []
    for i, emb_path in enumerate(args.embeddings):
        emb = load_embeddings_for_graph(emb_path, g)
        if args.dims:
            expected = [int(x) for x in str(args.dims).split(",") if x]
            if emb.dim != expected[i]:
                raise ValueError(
                    f"{emb_path}: embedding dimension {emb.dim} != declared {expected[i]}"
                )
        for et in edge_types:
            reports.append(reconstruct(g, emb, et, max_neg=args.max_neg, rng=rng).to_dict())
    with open(out / "reconstruction.json", "w", encoding="utf-8") as f:
        json.dump(reports, f, indent=2)
    print(json.dumps(reports, indent=2))
    return 0


def cmd_linkpred(args) -> int:
    g = load_graph(args.nodes, args.edges)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(args, "linkpred")
    split_dir = Path(args.split_dir) if args.split_dir else out / "split"
    if (split_dir / "split.json").exists():
        split = load_link_split(split_dir, g)
    else:
        rng = seeding.substream(args.seed, seeding.SPLITS)
        split = make_link_split(g, args.edge_type, fraction=args.fraction, rng=rng)
        save_link_split(split, split_dir, g)
    if split.warning:
        print(f"warning: {split.warning}", file=sys.stderr)
    wcfg, scfg, tcfg = _pipeline_configs(args)
    tg = split.train_graph
    walks = generate_walks(tg, wcfg, threads=args.threads)
    corpus = build_corpus(walks, scfg.window, tg.n_nodes)
    reports = []
    dims = _dims(args)
    for d in dims:
        table, _ = train(tg, corpus, tcfg, d)
        suffix = "" if len(dims) == 1 else f"_d{d}"
        table.save_tsv(out / f"embeddings{suffix}.tsv", tg)
        reports.append(link_prediction_eval(split, table).to_dict())
    with open(out / "link_prediction.json", "w", encoding="utf-8") as f:
        json.dump(reports, f, indent=2)
    print(json.dumps(reports, indent=2))
    return 0


SWEEPABLE = {
    "batch_size": ("batch", int),
    "window": ("window", int),
    "walks": ("walks", int),
    "walk_length": ("walk_length", int),
    "negatives": ("negatives", int),
}


def cmd_sweep(args) -> int:
    if args.param not in SWEEPABLE:
        raise ValueError(f"unknown sweep parameter {args.param!r}; choose from {sorted(SWEEPABLE)}")
    g = load_graph(args.nodes, args.edges)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(args, "sweep")
    attr, cast = SWEEPABLE[args.param]
    values = [cast(x) for x in str(args.values).split(",") if x]
    rng = seeding.substream(args.seed, seeding.SPLITS)
    split = make_link_split(g, args.edge_type, fraction=args.fraction, rng=rng)
    if split.warning:
        print(f"warning: {split.warning}", file=sys.stderr)
    tg = split.train_graph
    records = []
    for value in values:
        setattr(args, attr, value)
        wcfg, scfg, tcfg = _pipeline_configs(args)
        walks = generate_walks(tg, wcfg, threads=args.threads)
        corpus = build_corpus(walks, scfg.window, tg.n_nodes)
        table, _ = train(tg, corpus, tcfg, args.dim)
        report = link_prediction_eval(split, table)
        records.append(
            {
                "param": args.param,
                "value": value,
                "auc": report.auc,
                "dimension": args.dim,
                "config": {
                    "walks": wcfg.walks_per_node,
                    "walk_length": wcfg.walk_length,
                    "window": scfg.window,
                    "negatives": tcfg.negatives_per_positive,
                    "lr": tcfg.lr,
                    "batch": tcfg.batch_size,
                    "epochs": tcfg.epochs,
                    "seed": args.seed,
                },
            }
        )
    with open(out / "sweep.json", "w", encoding="utf-8") as f:
        json.dump(records, f, indent=2)
    print(json.dumps(records, indent=2))
    return 0


def cmd_project(args) -> int:
    g = load_graph(args.nodes, args.edges)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_manifest(args, "project")
    emb = load_embeddings_for_graph(args.embeddings, g)
    export_projection(emb, out / "projection.tsv", g)
    if args.region_type:
        boundaries = [float(x) for x in str(args.boundaries).split(",") if x]
        report = region_stats(g, emb, args.region_type, boundaries)
        with open(out / "regions.json", "w", encoding="utf-8") as f:
            json.dump(report.to_dict(), f, indent=2)
        print(json.dumps(report.to_dict(), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperwalk",
        description="Heterogeneous network embedding in hyperbolic space "
        "with self-guided random walks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="embed a network and write embeddings + log")
    _add_common(p)
    _add_pipeline(p)
    p.add_argument("--dim", type=int, default=_env("dim", int, 10))
    p.add_argument("--dims", default=_env("dims", str, None), help="comma list, e.g. 2,5,10")
    p.add_argument("--dump-walks", default=None, help="optional walk dump path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("reconstruct", help="network-reconstruction AUC report")
    _add_common(p)
    p.add_argument("--embeddings", action="append", required=True, help="embedding TSV (repeatable)")
    p.add_argument("--dims", default=None, help="declared dimension per embeddings file")
    p.add_argument("--edge-type", default=None)
    p.add_argument("--max-neg", type=int, default=_env("max_neg", int, 1_000_000))
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("linkpred", help="20%% split, retrain, link-prediction AUC")
    _add_common(p)
    _add_pipeline(p)
    p.add_argument("--dim", type=int, default=_env("dim", int, 10))
    p.add_argument("--dims", default=None, help="comma list of dimensions")
    p.add_argument("--edge-type", required=True)
    p.add_argument("--fraction", type=float, default=_env("fraction", float, 0.2))
    p.add_argument("--split-dir", default=None, help="reuse/persist the split here")
    p.set_defaults(func=cmd_linkpred)

    p = sub.add_parser("sweep", help="single-parameter sensitivity sweep (link prediction)")
    _add_common(p)
    _add_pipeline(p)
    p.add_argument("--param", required=True, help=f"one of {sorted(SWEEPABLE)}")
    p.add_argument("--values", required=True, help="comma list of values")
    p.add_argument("--edge-type", required=True)
    p.add_argument("--fraction", type=float, default=0.2)
    p.add_argument("--dim", type=int, default=5)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("project", help="Poincare-disk projection and region stats")
    _add_common(p)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--region-type", default=None, help="node type for region stats")
    p.add_argument("--boundaries", default="2,4,6")
    p.set_defaults(func=cmd_project)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for attr in ("nodes", "edges"):
        path = getattr(args, attr, None)
        if path is not None and not os.path.exists(path):
            print(f"error: no such file: {path}", file=sys.stderr)
            return 2
    emb = getattr(args, "embeddings", None)
    for path in [emb] if isinstance(emb, str) else (emb or []):
        if not os.path.exists(path):
            print(f"error: no such file: {path}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except Exception as exc:  # pragma: no cover - defensive catch-all
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
