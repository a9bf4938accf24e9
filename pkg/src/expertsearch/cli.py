"""Command-line driver: build, query, serve, eval, compare, gen-synthetic."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .corpus import SOURCES
from .evaluation import (
    DEFAULT_CUTOFFS,
    format_precision_table,
    macro_average,
    read_qrels,
    read_run,
    read_topics,
)
from .evidence import PropagationConfig, TypeFactorConfig
from .experiments import comparison_matrix
from .pipeline import (
    BuildConfig,
    Collection,
    build_artifacts,
    load_artifacts,
    write_artifacts,
)
from .retrieval import IndexConfig, rank_experts
from .service import DEFAULT_BIND, serve
from .synthetic import SyntheticConfig, gen_synthetic

logger = logging.getLogger(__name__)

ENV_INDEX_DIR = "EXPERTSEARCH_INDEX_DIR"
ENV_BIND = "EXPERTSEARCH_BIND"


def _sources(text: str) -> tuple[str, ...]:
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _db_factor(text: str) -> tuple[str, float]:
    kind, _, value = text.partition("=")
    if not value:
        raise argparse.ArgumentTypeError(f"expected KIND=FACTOR, got {text!r}")
    return kind.strip(), float(value)


def _require_files(*paths) -> None:
    for path in paths:
        if path is not None and not Path(path).exists():
            raise FileNotFoundError(f"input file not found: {path}")


def _index_dir(args) -> str:
    index_dir = args.index or os.environ.get(ENV_INDEX_DIR)
    if not index_dir:
        raise ValueError(f"no index directory given (use --index or {ENV_INDEX_DIR})")
    return index_dir


def cmd_build(args) -> int:
    _require_files(args.corpus, args.org, args.links, args.aliases)
    config = BuildConfig(
        propagation=PropagationConfig(args.down_same_factor, args.up_away_factor, args.weight_floor),
        index=IndexConfig(args.k1, args.b, args.idf_floor),
        type_factors=TypeFactorConfig(
            args.person_factor,
            args.project_factor,
            args.group_factor,
            tuple(args.db_factor or ()),
        ),
        sources=args.sources,
        system=args.system,
    )
    collection = Collection.load(args.corpus, args.org, args.links, args.aliases)
    artifacts = build_artifacts(collection, config)
    input_paths = {"corpus": args.corpus, "org": args.org}
    if args.links:
        input_paths["links"] = args.links
    if args.aliases:
        input_paths["aliases"] = args.aliases
    write_artifacts(artifacts, args.out, input_paths)
    for key, value in artifacts.stats.items():
        print(f"{key}: {value}")
    if artifacts.org.warnings:
        print(f"org warnings: {len(artifacts.org.warnings)}", file=sys.stderr)
    return 0


def cmd_query(args) -> int:
    loaded = load_artifacts(_index_dir(args))
    results = rank_experts(args.query, args.k, loaded.index, loaded.org, args.role)
    if args.json:
        for result in results:
            print(
                json.dumps(
                    {
                        "person_id": result.person_id,
                        "score": result.score,
                        "fragments": [[doc_id, score] for doc_id, score in result.fragments],
                    },
                    sort_keys=True,
                )
            )
        return 0
    for position, result in enumerate(results, 1):
        person = loaded.org.persons.get(result.person_id)
        display = person.display_name if person else result.person_id
        top_doc = result.fragments[0][0] if result.fragments else "-"
        top_url = loaded.index.documents[top_doc].url if top_doc != "-" else "-"
        print(f"{position:>3}  {result.person_id}  {display:<24}  {result.score:10.4f}  {top_url}")
    return 0


def cmd_serve(args) -> int:
    bind = args.bind or os.environ.get(ENV_BIND) or DEFAULT_BIND
    serve(_index_dir(args), bind)
    return 0


def cmd_eval(args) -> int:
    _require_files(args.run, args.qrels, args.topics)
    run = read_run(args.run)
    qrels = read_qrels(args.qrels)
    topic_ids = [t.topic_id for t in read_topics(args.topics)] if args.topics else None
    if topic_ids is not None:
        missing = sorted(set(run.results) - set(topic_ids))
        for topic_id in missing:
            logger.warning("run topic %s not in the topic file", topic_id)
    cutoffs = args.cutoffs
    macro = macro_average(run, qrels, cutoffs, topic_ids)
    if args.json:
        print(json.dumps({"run_tag": run.run_tag, "macro": {str(k): macro[k] for k in cutoffs}}, sort_keys=True))
    else:
        print(format_precision_table([(run.run_tag.capitalize(), [macro[k] for k in cutoffs])], cutoffs))
    return 0


def cmd_compare(args) -> int:
    _require_files(*args.runs, args.qrels, args.topics)
    runs = [read_run(path) for path in args.runs]
    qrels = read_qrels(args.qrels)
    topic_ids = [t.topic_id for t in read_topics(args.topics)] if args.topics else None
    print(comparison_matrix(runs, qrels, args.cutoff, topic_ids))
    return 0


def cmd_gen_synthetic(args) -> int:
    config = SyntheticConfig(args.persons, args.projects, args.docs, args.topics, args.structured_ratio)
    generated = gen_synthetic(config, args.seed)
    paths = generated.write(args.out)
    for name, path in sorted(paths.items()):
        print(f"{name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="expertsearch",
        description="Expertise search over organizational structure and document content.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build evidence and index from input files")
    p.add_argument("--corpus", required=True, help="JSON-lines corpus file")
    p.add_argument("--org", required=True, help="organizational structure XML")
    p.add_argument("--links", help="tab-separated src/dst link file")
    p.add_argument("--aliases", help="tab-separated alias/canonical URL file")
    p.add_argument("--out", required=True, help="output index directory")
    p.add_argument("--sources", type=_sources, default=SOURCES, help="comma-separated source subset (default: all)")
    p.add_argument("--system", choices=("new", "base"), default="new", help="evidence mode (default: new)")
    p.add_argument("--down-same-factor", type=float, default=0.5, help="attenuation for down/same links (default: 0.5)")
    p.add_argument("--up-away-factor", type=float, default=0.1, help="attenuation for up/away links (default: 0.1)")
    p.add_argument("--weight-floor", type=float, default=0.001, help="minimum propagated weight kept (default: 0.001)")
    p.add_argument("--k1", type=float, default=1.2, help="BM25 k1 (default: 1.2)")
    p.add_argument("--b", type=float, default=0.75, help="BM25 b (default: 0.75)")
    p.add_argument("--idf-floor", type=float, default=0.0, help="minimum idf (default: 0)")
    p.add_argument("--person-factor", type=float, default=10.0, help="type factor for personal homepages (default: 10)")
    p.add_argument("--project-factor", type=float, default=10.0, help="type factor for project homepages (default: 10)")
    p.add_argument("--group-factor", type=float, default=10.0, help="type factor for group homepages (default: 10)")
    p.add_argument("--db-factor", type=_db_factor, action="append", metavar="KIND=FACTOR",
                   help="type factor for a db record kind (default: 1)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="rank experts for a query against a built index")
    p.add_argument("query", help="query text")
    p.add_argument("-k", type=int, default=10, help="number of experts to return (default: 10)")
    p.add_argument("--role", help="only return persons holding this role id")
    p.add_argument("--index", help=f"index directory (or {ENV_INDEX_DIR})")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="serve the query API over HTTP")
    p.add_argument("--index", help=f"index directory (or {ENV_INDEX_DIR})")
    p.add_argument("--bind", help=f"host:port to bind (or {ENV_BIND}; default {DEFAULT_BIND})")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("eval", help="macro precision table for a run file")
    p.add_argument("--run", required=True, help="run file")
    p.add_argument("--qrels", required=True, help="graded judgments file")
    p.add_argument("--topics", help="topics file fixing the topic set")
    p.add_argument("--cutoffs", type=lambda t: tuple(int(x) for x in t.split(",")),
                   default=DEFAULT_CUTOFFS, help="comma-separated cutoffs (default: 1,3,5,10)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="pairwise win/loss comparison matrix for runs")
    p.add_argument("runs", nargs="+", help="two or more run files")
    p.add_argument("--qrels", required=True, help="graded judgments file")
    p.add_argument("--topics", help="topics file fixing the topic set")
    p.add_argument("--cutoff", type=int, default=5, help="precision cutoff (default: 5)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen-synthetic", help="generate a deterministic synthetic collection")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=42, help="random seed (default: 42)")
    p.add_argument("--persons", type=int, default=20)
    p.add_argument("--projects", type=int, default=5)
    p.add_argument("--docs", type=int, default=200)
    p.add_argument("--topics", type=int, default=30)
    p.add_argument("--structured-ratio", type=float, default=0.3,
                   help="fraction of topics whose topical pages omit the expert's name (default: 0.3)")
    p.set_defaults(func=cmd_gen_synthetic)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("EXPERTSEARCH_LOGLEVEL", "WARNING"))
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
