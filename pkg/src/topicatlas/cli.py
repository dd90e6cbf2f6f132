"""Batch driver: model files in, labeled network artifacts out.

Stages run in a fixed order with explicit names so a failure can say
where it happened; on any failure the partially written artifacts are
deleted. A manifest captures every parameter (including applied
defaults) and the content hash of every artifact, and contains nothing
run-dependent, so two runs over the same inputs produce byte-identical
manifests no matter where their output directories live.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .graph import EXPORT_FORMATS, export_graph, louvain
from .labeling import label_topics, write_comparison_report, write_label_report
from .model import (
    ValidationError,
    assign_clusters,
    load_corpus,
    load_stopwords,
    load_topic_model,
)
from .service import build_session, create_app
from .similarity import pairwise_similarities, save_similarities, select_threshold
from .similarity import build_network as _build_network
from .textprep import DEFAULT_STOPWORDS, analyze_corpus

DEFAULT_TARGET_DENSITY = 0.01
DEFAULT_CANDIDATES = 5
DEFAULT_LABELS = 1

STAGES = (
    "load-corpus", "load-model", "textprep", "similarity", "threshold",
    "network", "communities", "labeling", "export",
)


class PipelineError(RuntimeError):
    """A stage failed; carries the stage name and the original cause."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineConfig:
    corpus: str
    beta: str
    theta: str
    vocab: str
    out: str
    stopwords: str | None = None
    xi: float | None = None
    target_density: float | None = None
    candidates: int = DEFAULT_CANDIDATES
    labels: int = DEFAULT_LABELS
    seed: int = 0
    formats: tuple[str, ...] = tuple(EXPORT_FORMATS)
    workers: int = 1
    defaults_applied: list[str] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if self.xi is not None and self.target_density is not None:
            raise ValidationError("set either xi or target_density, not both")
        if self.xi is None and self.target_density is None:
            self.target_density = DEFAULT_TARGET_DENSITY
            self.defaults_applied.append(f"target_density={DEFAULT_TARGET_DENSITY}")
        if not self.candidates >= self.labels >= 1:
            raise ValidationError(
                f"need candidates >= labels >= 1, got C={self.candidates} L={self.labels}"
            )
        unknown = [f for f in self.formats if f not in EXPORT_FORMATS]
        if unknown:
            raise ValidationError(f"unknown export formats {unknown}")
        if self.workers < 1:
            raise ValidationError("workers must be positive")
        if self.stopwords is None:
            self.defaults_applied.append("stopwords=builtin")
        for name, default in (
            ("candidates", DEFAULT_CANDIDATES), ("labels", DEFAULT_LABELS),
            ("seed", 0), ("workers", 1),
        ):
            if getattr(self, name) == default:
                self.defaults_applied.append(f"{name}={default}")
        if tuple(self.formats) == EXPORT_FORMATS:
            self.defaults_applied.append("formats=" + ",".join(EXPORT_FORMATS))


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class _Tracker:
    """Remembers which stage is running and which files were written."""

    def __init__(self) -> None:
        self.stage = STAGES[0]
        self.written: list[Path] = []

    def at(self, stage: str) -> None:
        assert stage in STAGES
        self.stage = stage

    def emit(self, path: Path, text: str) -> None:
        path.write_text(text, encoding="utf-8")
        self.written.append(path)

    def wrote(self, path: Path) -> None:
        self.written.append(path)

    def discard_all(self) -> None:
        for path in self.written:
            path.unlink(missing_ok=True)


def run_pipeline(
    config: PipelineConfig,
    *,
    include_labels: bool = True,
    include_graph: bool = True,
    include_communities: bool = True,
    include_comparison: bool = True,
) -> dict:
    """Execute the batch stages and return the manifest that was written.

    The include flags let the lighter subcommands skip whole stage
    groups; the full pipeline runs everything.
    """
    if include_communities and not include_graph:
        raise ValidationError("communities require the graph stages")
    if not include_graph and not include_labels:
        raise ValidationError("nothing to do")
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    track = _Tracker()
    try:
        track.at("load-corpus")
        corpus = load_corpus(config.corpus)
        stopwords = (
            load_stopwords(config.stopwords) if config.stopwords
            else DEFAULT_STOPWORDS
        )

        track.at("load-model")
        model = load_topic_model(config.beta, config.theta, config.vocab)
        if model.n_documents != corpus.size:
            raise ValidationError(
                f"theta has {model.n_documents} documents but corpus has {corpus.size}"
            )
        assignment = assign_clusters(model)

        analysis = None
        if include_labels:
            track.at("textprep")
            analysis = analyze_corpus(corpus, stopwords, workers=config.workers)

        resolved: dict = {
            "n_documents": corpus.size,
            "n_topics": model.n_topics,
            "vocabulary_size": len(model.vocabulary),
        }

        graph = None
        if include_graph:
            track.at("similarity")
            sims = pairwise_similarities(model.beta)
            sims_path = out_dir / "similarities.tsv"
            save_similarities(sims, sims_path)
            track.wrote(sims_path)

            track.at("threshold")
            if config.xi is not None:
                xi = float(config.xi)
            else:
                xi = select_threshold(sims, config.target_density)

            track.at("network")
            graph = _build_network(sims, xi, assignment)
            resolved.update(
                xi=xi, edges=len(graph.edges), realized_density=graph.density
            )

        if include_communities:
            track.at("communities")
            partition = louvain(graph, seed=config.seed)
            for node in graph.nodes:
                node.community = partition.community_of[node.topic_id]
            resolved["communities"] = partition.n_communities
            track.emit(out_dir / "communities.tsv", "".join(
                f"{t}\t{partition.community_of[t]}\n"
                for t in sorted(partition.community_of)
            ))

        if include_labels:
            track.at("labeling")
            labels = label_topics(
                assignment, corpus, analysis, model,
                c=config.candidates, l=config.labels,
            )
            if include_graph:
                for node in graph.nodes:
                    cands = labels[node.topic_id]
                    node.label = cands[0].display if cands else ""
            labels_path = out_dir / "labels.tsv"
            write_label_report(labels, labels_path)
            track.wrote(labels_path)
            if include_comparison:
                comparison_path = out_dir / "comparison.tsv"
                write_comparison_report(labels, model, config.labels, comparison_path)
                track.wrote(comparison_path)

        if include_graph:
            track.at("export")
            for fmt in config.formats:
                track.emit(out_dir / f"graph.{fmt}", export_graph(graph, fmt))

        manifest = {
            "schema_version": 1,
            "parameters": {
                "corpus": str(config.corpus),
                "beta": str(config.beta),
                "theta": str(config.theta),
                "vocab": str(config.vocab),
                "stopwords": str(config.stopwords) if config.stopwords else None,
                "xi": config.xi,
                "target_density": config.target_density,
                "candidates": config.candidates,
                "labels": config.labels,
                "seed": config.seed,
                "formats": list(config.formats),
                "workers": config.workers,
                "include_labels": include_labels,
                "include_graph": include_graph,
                "include_communities": include_communities,
                "include_comparison": include_comparison,
                "defaults_applied": list(config.defaults_applied),
            },
            "resolved": resolved,
            "artifacts": {
                p.name: _sha256(p) for p in sorted(track.written)
            },
        }
        manifest_path = out_dir / "manifest.json"
        track.emit(
            manifest_path,
            json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        )
        return manifest
    except Exception as exc:
        track.discard_all()
        raise PipelineError(track.stage, exc) from exc


def _add_common(parser: argparse.ArgumentParser, graph_opts: bool = True) -> None:
    parser.add_argument("--corpus", required=True)
    parser.add_argument("--beta", required=True)
    parser.add_argument("--theta", required=True)
    parser.add_argument("--vocab", required=True)
    parser.add_argument("--stopwords", default=None)
    parser.add_argument("--candidates", type=int, default=DEFAULT_CANDIDATES)
    parser.add_argument("--labels", type=int, default=DEFAULT_LABELS)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--workers", type=int, default=1)
    if graph_opts:
        parser.add_argument("--xi", type=float, default=None)
        parser.add_argument("--target-density", type=float, default=None)
        parser.add_argument(
            "--format", action="append", choices=EXPORT_FORMATS, default=None,
            help="repeatable; default: all formats",
        )


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse normally sys.exits with status 2; route flag mistakes to
    # the validation exit code instead
    def error(self, message: str) -> None:
        raise _UsageError(message)


def _config_from(args: argparse.Namespace) -> PipelineConfig:
    formats = getattr(args, "format", None) or list(EXPORT_FORMATS)
    return PipelineConfig(
        corpus=args.corpus,
        beta=args.beta,
        theta=args.theta,
        vocab=args.vocab,
        out=args.out,
        stopwords=args.stopwords,
        xi=getattr(args, "xi", None),
        target_density=getattr(args, "target_density", None),
        candidates=args.candidates,
        labels=args.labels,
        seed=args.seed,
        formats=tuple(formats),
        workers=args.workers,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="topicatlas", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, blurb in (
        ("build-network", "similarity matrix, threshold, and graph exports"),
        ("communities", "build-network plus community detection"),
        ("label", "document analysis and label reports only"),
        ("report", "labels plus side-by-side comparison with top words"),
        ("export", "full pipeline: network, communities, labels, exports"),
    ):
        p = sub.add_parser(name, help=blurb)
        _add_common(p)
        p.add_argument("--out", required=True)

    serve = sub.add_parser("serve", help="run the filter/relabel HTTP service")
    _add_common(serve)
    serve.add_argument("--serve-addr", default="127.0.0.1:8234")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    toggles = {
        "build-network": dict(include_labels=False, include_communities=False,
                              include_comparison=False),
        "communities": dict(include_labels=False, include_comparison=False),
        "label": dict(include_graph=False, include_communities=False,
                      include_comparison=False),
        "report": dict(include_graph=False, include_communities=False),
        "export": {},
    }
    try:
        if args.command == "serve":
            return _serve(args)
        config = _config_from(args)
        manifest = run_pipeline(config, **toggles[args.command])
        print(f"wrote {len(manifest['artifacts'])} artifacts to {args.out}")
        return 0
    except (ValueError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PipelineError as exc:
        if isinstance(exc.cause, ValueError):
            print(f"error: {exc}", file=sys.stderr)
            return 1
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _serve(args: argparse.Namespace) -> int:
    import uvicorn

    host, _, port = args.serve_addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValidationError(f"bad --serve-addr {args.serve_addr!r}, want host:port")

    corpus = load_corpus(args.corpus)
    stopwords = (
        load_stopwords(args.stopwords) if args.stopwords else DEFAULT_STOPWORDS
    )
    model = load_topic_model(args.beta, args.theta, args.vocab)
    session = build_session(
        corpus, model, stopwords,
        xi=args.xi, target_density=args.target_density,
        c=args.candidates, l=args.labels, seed=args.seed, workers=args.workers,
    )
    app = create_app(session)
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return 0


if __name__ == "__main__":
    sys.exit(main())
