#!/usr/bin/env python3
"""Regenerate the bundled demo corpus and model files.

The bundle is deterministic for a given seed, so rerunning this script
over a clean checkout is a no-op diff.
"""

import argparse
from pathlib import Path

from topicatlas import synth


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/demo", help="output directory")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--docs-per-topic", type=int, default=25)
    args = parser.parse_args()

    bundle = synth.demo_bundle(seed=args.seed, docs_per_topic=args.docs_per_topic)
    paths = synth.write_bundle(bundle, args.out)
    for name, path in sorted(paths.items()):
        size = Path(path).stat().st_size
        print(f"{name:10s} {path} ({size} bytes)")
    print(
        f"{bundle.corpus.size} documents, {bundle.model.n_topics} topics, "
        f"{len(bundle.model.vocabulary)} terms"
    )


if __name__ == "__main__":
    main()
