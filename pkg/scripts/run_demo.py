#!/usr/bin/env python3
"""End-to-end walkthrough on the bundled demo corpus.

Builds the similarity network, detects communities, labels every topic,
prints the labels next to the plain top-words baseline, and shows how a
facet filter changes one topic's label. Pass --serve to keep the HTTP
service running on the same session afterwards.
"""

import argparse

from topicatlas import synth
from topicatlas.service import apply_filter, build_session, create_app, relabel


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--target-density", type=float, default=0.25)
    parser.add_argument("--serve", action="store_true")
    parser.add_argument("--addr", default="127.0.0.1:8234")
    args = parser.parse_args()

    bundle = synth.demo_bundle(seed=args.seed)
    print(f"corpus: {bundle.corpus.size} docs, {bundle.model.n_topics} topics")

    session = build_session(
        bundle.corpus, bundle.model, bundle.stopwords,
        target_density=args.target_density, seed=args.seed,
    )
    print(
        f"network: xi={session.xi:.4f}, {len(session.graph.edges)} edges, "
        f"{session.partition.n_communities} communities"
    )

    print(f"\n{'topic':>5}  {'community':>9}  label")
    for node in session.graph.nodes:
        print(f"{node.topic_id:>5}  {node.community:>9}  {node.label}")

    key, value = bundle.flip_facet
    flt = apply_filter(session, {key: value}, [])
    out = relabel(session, [bundle.flip_topic], flt.spec.filter_id)
    before = session.labels[bundle.flip_topic][0]
    after = out[bundle.flip_topic]["labels"][0]
    print(
        f"\nfilter {key}={value}: topic {bundle.flip_topic} label "
        f"{before!r} -> {after!r}"
    )

    if args.serve:
        import uvicorn

        host, _, port = args.addr.rpartition(":")
        print(f"\nserving on http://{args.addr} (ctrl-c to stop)")
        uvicorn.run(create_app(session), host=host, port=int(port),
                    log_level="warning")


if __name__ == "__main__":
    main()
