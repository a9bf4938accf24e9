#!/usr/bin/env python3
"""Run the full desk-scale experiment: synthetic collection, seven runs,
precision table, and pairwise comparison matrices.

Usage:
    python scripts/run_experiments.py [--seed 42] [--out runs/]
"""

import argparse
import sys
import time
from pathlib import Path

from expertsearch.evaluation import write_run
from expertsearch.experiments import comparison_matrix, run_standard_suite
from expertsearch.synthetic import SyntheticConfig, gen_synthetic


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--persons", type=int, default=20)
    parser.add_argument("--projects", type=int, default=5)
    parser.add_argument("--docs", type=int, default=200)
    parser.add_argument("--topics", type=int, default=30)
    parser.add_argument("--structured-ratio", type=float, default=0.3)
    parser.add_argument("--out", default=None, help="directory for run files and collection dump")
    parser.add_argument("--cutoff", type=int, default=5, help="cutoff for the comparison matrices")
    args = parser.parse_args()

    started = time.monotonic()
    config = SyntheticConfig(args.persons, args.projects, args.docs, args.topics, args.structured_ratio)
    generated = gen_synthetic(config, args.seed)
    print(
        f"collection: {len(generated.corpus)} docs, {len(generated.org.persons)} persons, "
        f"{len(generated.topics)} topics ({len(generated.structured_topics)} hidden-name)"
    )

    suite = run_standard_suite(generated.collection(), generated.topics, generated.qrels)
    print()
    print("Average precision for all runs")
    print(suite.table)

    topic_ids = [t.topic_id for t in generated.topics]
    qrels = generated.qrels

    print()
    print(f"New system vs base system (p@{args.cutoff}, win/loss overall-improvement, * = significant)")
    base_web = suite.results["base-web"].run
    print(
        comparison_matrix(
            [base_web, suite.results["new-web"].run, suite.results["new-web+db"].run],
            qrels,
            args.cutoff,
            topic_ids,
        )
    )

    print()
    print(f"Base system across collections (p@{args.cutoff})")
    print(
        comparison_matrix(
            [suite.results[tag].run for tag in ("base-intranet", "base-extranet", "base-web")],
            qrels,
            args.cutoff,
            topic_ids,
        )
    )

    print()
    print(f"New system across collections (p@{args.cutoff})")
    print(
        comparison_matrix(
            [
                suite.results[tag].run
                for tag in ("new-extranet", "new-extranet+db", "new-web", "new-web+db")
            ],
            qrels,
            args.cutoff,
            topic_ids,
        )
    )

    if args.out:
        out = Path(args.out)
        generated.write(out / "collection")
        for tag, result in suite.results.items():
            write_run(result.run, out / f"{tag}.run.tsv")
        print(f"\nwrote collection and run files under {out}/")

    print(f"\ntotal time: {time.monotonic() - started:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
