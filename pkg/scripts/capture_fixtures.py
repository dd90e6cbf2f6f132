"""Record demo-service HTTP payloads as JSON fixtures for the frontend tests.

The explorer is tested against recorded responses, not a live server; this
script regenerates those recordings from the same bundle the demo uses.
"""

import argparse
import json
from pathlib import Path

from fastapi.testclient import TestClient

from topicatlas.service import build_session, create_app
from topicatlas.synth import demo_bundle


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", type=Path, default=Path("frontend/tests/fixtures"))
    args = ap.parse_args()

    demo = demo_bundle()
    session = build_session(
        demo.corpus, demo.model, demo.stopwords, target_density=0.25, seed=42
    )
    client = TestClient(create_app(session))
    args.out.mkdir(parents=True, exist_ok=True)

    def dump(name: str, payload: object) -> None:
        path = args.out / name
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        print(f"  {name}")

    dump("health.json", client.get("/health").json())
    graph = client.get("/graph", params={"labels": "true"}).json()
    dump("graph.json", graph)
    topics = [n["id"] for n in graph["nodes"]]

    ident = client.post("/filter", json={}).json()
    dump("filter_identity.json", ident)
    dump(
        "relabel_identity.json",
        client.post(
            "/relabel", json={"filter_id": ident["filter_id"], "topics": topics}
        ).json(),
    )

    year = client.post("/filter", json={"facets": {"year": "2000"}}).json()
    dump("filter_year2000.json", year)
    dump(
        "relabel_year2000.json",
        client.post(
            "/relabel", json={"filter_id": year["filter_id"], "topics": topics}
        ).json(),
    )
    dump(
        "graph_year2000.json",
        client.get(
            "/graph", params={"labels": "true", "filter_id": year["filter_id"]}
        ).json(),
    )
    dump(
        "documents_topic0_year2000.json",
        client.get(
            "/topics/0/documents",
            params={"filter_id": year["filter_id"], "page": 0, "page_size": 5},
        ).json(),
    )

    # keyword filter that empties every topic except 0, for the dimming path
    coral = client.post("/filter", json={"keywords": ["coral"]}).json()
    dump("filter_coral.json", coral)
    dump(
        "relabel_coral.json",
        client.post(
            "/relabel", json={"filter_id": coral["filter_id"], "topics": topics}
        ).json(),
    )
    dump(
        "graph_coral.json",
        client.get(
            "/graph", params={"labels": "true", "filter_id": coral["filter_id"]}
        ).json(),
    )
    dump(
        "documents_topic7_coral.json",
        client.get(
            "/topics/7/documents", params={"filter_id": coral["filter_id"]}
        ).json(),
    )
    print(f"wrote fixtures to {args.out}")


if __name__ == "__main__":
    main()
