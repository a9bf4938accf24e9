#!/usr/bin/env python3
"""Build an index from a fresh synthetic collection and serve the query API.

Handy for trying the CLI and the web UI without real crawl data:

    python scripts/serve_demo.py --bind 127.0.0.1:8765
"""

import argparse
import sys
import tempfile
from pathlib import Path

from expertsearch.pipeline import build_artifacts, write_artifacts
from expertsearch.service import serve
from expertsearch.synthetic import SyntheticConfig, gen_synthetic


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--bind", default="127.0.0.1:8765")
    parser.add_argument("--index", default=None, help="index directory (default: temp dir)")
    args = parser.parse_args()

    generated = gen_synthetic(SyntheticConfig(), args.seed)
    index_dir = Path(args.index) if args.index else Path(tempfile.mkdtemp(prefix="expertsearch-"))
    artifacts = build_artifacts(generated.collection())
    write_artifacts(artifacts, index_dir)
    print(f"index built at {index_dir}")
    example = generated.topics[0].query_text
    print(f"try: curl 'http://{args.bind}/api/search?q={example.replace(' ', '+')}&k=5'")
    serve(index_dir, args.bind)
    return 0


if __name__ == "__main__":
    sys.exit(main())
