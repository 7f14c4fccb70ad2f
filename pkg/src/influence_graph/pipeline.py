"""Pipeline orchestration: configuration, staged execution, manifest.

Stages communicate exclusively through files in the output directory, so
running `run_pipeline` and chaining the stage subcommands with the same
configuration produce identical artifact files. Every stage re-reads its
inputs from disk; there is no hidden in-memory state.
"""

from __future__ import annotations

import csv
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from . import __version__
from .clustering import OTHER, ClusterAssignment, consolidate_small, exemplars, kmeans
from .corpus import (
    DEFAULT_MAX_YEAR,
    DEFAULT_MIN_YEAR,
    Corpus,
    filter_by_min_works,
    load_corpus,
    write_corpus,
)
from .embedding import FeatureMatrix, fit_pca, transform_pca
from .errors import ComputationError, PipelineError, ValidationError
from .graphio import graph_from_edge_csv, write_edge_csv, write_graphml
from .metrics import (
    compute_node_metrics,
    decadal_report,
    write_decade_csv,
    write_decade_long_csv,
    write_metrics_csv,
    write_year_diff_csv,
    year_difference_distribution,
)
from .netbuild import ARTIST, ISN, SSN, build_isn, build_ssn, project_to_artists


@dataclass
class PipelineConfig:
    metadata: str
    features: str
    out: str
    pca_k: int = 100
    kmeans_k: int = 20
    min_cluster_size: int = 3
    percentile: float = 90.0
    min_works: int = 100
    seed: int = 42
    ssn_mode: str = "pairs"  # pairs | chain
    ssn_threshold: bool = True
    d5_window: int | None = None
    threads: int = 1
    min_year: int = DEFAULT_MIN_YEAR
    max_year: int = DEFAULT_MAX_YEAR
    kmeans_max_iter: int = 300
    kmeans_tol: float = 1e-6

    def validate(self, require_inputs: bool = True) -> None:
        problems = []
        if require_inputs:
            for label, path in (("metadata", self.metadata), ("features", self.features)):
                if not path:
                    problems.append(f"missing required {label} path")
                elif not Path(path).is_file():
                    problems.append(f"{label} file not found: {path}")
        if not self.out:
            problems.append("missing required output directory")
        if self.pca_k < 1:
            problems.append(f"pca_k must be >= 1, got {self.pca_k}")
        if self.kmeans_k < 1:
            problems.append(f"kmeans_k must be >= 1, got {self.kmeans_k}")
        if self.min_cluster_size < 1:
            problems.append(f"min_cluster_size must be >= 1, got {self.min_cluster_size}")
        if not 0.0 < self.percentile < 100.0:
            problems.append(f"percentile must be in (0, 100), got {self.percentile}")
        if self.min_works < 1:
            problems.append(f"min_works must be >= 1, got {self.min_works}")
        if self.ssn_mode not in ("pairs", "chain"):
            problems.append(f"ssn_mode must be pairs or chain, got {self.ssn_mode!r}")
        if self.d5_window is not None and self.d5_window < 0:
            problems.append(f"d5_window must be >= 0, got {self.d5_window}")
        if self.threads < 1:
            problems.append(f"threads must be >= 1, got {self.threads}")
        if self.min_year > self.max_year:
            problems.append("min_year must not exceed max_year")
        if self.kmeans_max_iter < 1:
            problems.append(f"kmeans_max_iter must be >= 1, got {self.kmeans_max_iter}")
        if self.kmeans_tol <= 0:
            problems.append(f"kmeans_tol must be > 0, got {self.kmeans_tol}")
        if problems:
            raise ValidationError("; ".join(problems))

    @classmethod
    def from_file(cls, path) -> "PipelineConfig":
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        defaults = {"metadata": "", "features": "", "out": ""}
        return cls(**{**defaults, **raw})


# stage -> files it writes (relative to the output directory)
STAGE_FILES: dict[str, tuple[str, ...]] = {
    "ingest": ("corpus_metadata.csv", "corpus_features.csv"),
    "reduce": ("reduced_features.csv",),
    "cluster": ("clusters.csv", "cluster_exemplars.csv"),
    "net-isn": ("isn_edges.csv", "isn.graphml"),
    "net-ssn": ("ssn_edges.csv", "ssn.graphml"),
    "project": (
        "artist_isn_edges.csv",
        "artist_isn.graphml",
        "artist_ssn_edges.csv",
        "artist_ssn.graphml",
    ),
    "metrics": (
        "metrics_isn.csv",
        "metrics_ssn.csv",
        "metrics_artist_isn.csv",
        "metrics_artist_ssn.csv",
    ),
    "report": (
        "decades_isn_betweenness.csv",
        "decades_isn_betweenness_long.csv",
        "decades_isn_d5.csv",
        "decades_isn_d5_long.csv",
        "decades_ssn_betweenness.csv",
        "decades_ssn_betweenness_long.csv",
        "decades_ssn_d5.csv",
        "decades_ssn_d5_long.csv",
        "year_difference_isn.csv",
        "year_difference_ssn.csv",
    ),
}

STAGE_ORDER = tuple(STAGE_FILES)

MANIFEST_FILE = "manifest.json"

_PRODUCER = {
    name: stage for stage, names in STAGE_FILES.items() for name in names
}


def _require(out: Path, *names: str) -> None:
    for name in names:
        if not (out / name).is_file():
            raise ValidationError(
                f"missing intermediate file {name}; run the "
                f"`{_PRODUCER[name]}` stage first"
            )


def _read_stage_corpus(out: Path) -> Corpus:
    _require(out, "corpus_metadata.csv", "corpus_features.csv")
    return load_corpus(
        out / "corpus_metadata.csv",
        out / "corpus_features.csv",
        min_year=-(10**9),
        max_year=10**9,
    )


def _read_feature_csv(path) -> FeatureMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        ids, rows = [], []
        for row in reader:
            ids.append(row[0])
            rows.append([float(x) for x in row[1:]])
    return FeatureMatrix(np.array(rows), tuple(ids))


def _write_feature_csv(m: FeatureMatrix, path, prefix: str = "c") -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["artwork_id"] + [f"{prefix}{i}" for i in range(m.dim)])
        for row_id, row in zip(m.row_ids, m.rows):
            writer.writerow([row_id] + [repr(float(v)) for v in row])


def _write_clusters_csv(corpus: Corpus, assignment: ClusterAssignment, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["artwork_id", "cluster_label"])
        for artwork_id, label in zip(corpus.artwork_ids, assignment.labels):
            writer.writerow([artwork_id, "other" if label == OTHER else int(label)])


def _read_cluster_labels(path, corpus: Corpus) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["artwork_id", "cluster_label"]:
            raise ValidationError(f"{path}: bad cluster header {header!r}")
        by_id = {row[0]: row[1] for row in reader}
    labels = []
    for artwork_id in corpus.artwork_ids:
        if artwork_id not in by_id:
            raise ValidationError(f"{path}: no cluster label for {artwork_id!r}")
        text = by_id[artwork_id]
        labels.append(OTHER if text == "other" else int(text))
    return np.array(labels, dtype=np.int64)


def _labels_to_assignment(labels: np.ndarray, dim: int) -> ClusterAssignment:
    n_clusters = int(labels.max()) + 1 if (labels != OTHER).any() else 0
    return ClusterAssignment(
        labels=labels,
        centroids=np.zeros((n_clusters, dim)),
        inertia=0.0,
        cluster_sse=np.zeros(n_clusters),
    )


def stage_ingest(config: PipelineConfig) -> None:
    out = Path(config.out)
    corpus = load_corpus(
        config.metadata,
        config.features,
        min_year=config.min_year,
        max_year=config.max_year,
    )
    corpus = filter_by_min_works(corpus, config.min_works)
    if not corpus.records:
        raise ValidationError(
            f"no artist has at least {config.min_works} works; corpus is empty"
        )
    write_corpus(corpus, out / "corpus_metadata.csv", out / "corpus_features.csv")


def stage_reduce(config: PipelineConfig) -> None:
    out = Path(config.out)
    corpus = _read_stage_corpus(out)
    matrix = FeatureMatrix.from_corpus(corpus)
    model = fit_pca(matrix, config.pca_k)
    reduced = transform_pca(model, matrix)
    _write_feature_csv(reduced, out / "reduced_features.csv")


def stage_cluster(config: PipelineConfig) -> None:
    out = Path(config.out)
    _require(out, "reduced_features.csv")
    corpus = _read_stage_corpus(out)
    reduced = _read_feature_csv(out / "reduced_features.csv")
    assignment = kmeans(
        reduced,
        config.kmeans_k,
        seed=config.seed,
        max_iter=config.kmeans_max_iter,
        tol=config.kmeans_tol,
    )
    assignment = consolidate_small(assignment, config.min_cluster_size)
    _write_clusters_csv(corpus, assignment, out / "clusters.csv")
    with open(out / "cluster_exemplars.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cluster", "rank", "artwork_id"])
        for cluster, ids in enumerate(exemplars(reduced, assignment, count=3)):
            for rank, artwork_id in enumerate(ids, start=1):
                writer.writerow([cluster, rank, artwork_id])


def stage_net_isn(config: PipelineConfig) -> None:
    out = Path(config.out)
    _require(out, "reduced_features.csv")
    corpus = _read_stage_corpus(out)
    reduced = _read_feature_csv(out / "reduced_features.csv")
    graph = build_isn(corpus, reduced, config.percentile, threads=config.threads)
    write_edge_csv(graph, out / "isn_edges.csv")
    write_graphml(graph, out / "isn.graphml")


def stage_net_ssn(config: PipelineConfig) -> None:
    out = Path(config.out)
    _require(out, "reduced_features.csv", "clusters.csv")
    corpus = _read_stage_corpus(out)
    reduced = _read_feature_csv(out / "reduced_features.csv")
    labels = _read_cluster_labels(out / "clusters.csv", corpus)
    assignment = _labels_to_assignment(labels, reduced.dim)
    graph = build_ssn(
        corpus,
        reduced,
        assignment,
        config.percentile,
        mode=config.ssn_mode,
        apply_threshold=config.ssn_threshold,
        threads=config.threads,
    )
    write_edge_csv(graph, out / "ssn_edges.csv")
    write_graphml(graph, out / "ssn.graphml")


def stage_project(config: PipelineConfig) -> None:
    out = Path(config.out)
    _require(out, "isn_edges.csv", "ssn_edges.csv")
    corpus = _read_stage_corpus(out)
    for kind, name in ((ISN, "isn"), (SSN, "ssn")):
        graph = graph_from_edge_csv(kind, corpus, out / f"{name}_edges.csv")
        projected = project_to_artists(graph)
        write_edge_csv(projected, out / f"artist_{name}_edges.csv")
        write_graphml(projected, out / f"artist_{name}.graphml")


def stage_metrics(config: PipelineConfig) -> None:
    out = Path(config.out)
    _require(out, "isn_edges.csv", "ssn_edges.csv",
             "artist_isn_edges.csv", "artist_ssn_edges.csv")
    corpus = _read_stage_corpus(out)
    jobs = (
        (ISN, "isn_edges.csv", "metrics_isn.csv"),
        (SSN, "ssn_edges.csv", "metrics_ssn.csv"),
        (ARTIST, "artist_isn_edges.csv", "metrics_artist_isn.csv"),
        (ARTIST, "artist_ssn_edges.csv", "metrics_artist_ssn.csv"),
    )
    for kind, edges_name, metrics_name in jobs:
        graph = graph_from_edge_csv(kind, corpus, out / edges_name)
        rows = compute_node_metrics(graph, seed=config.seed, d5_window=config.d5_window)
        write_metrics_csv(rows, out / metrics_name)


def stage_report(config: PipelineConfig) -> None:
    out = Path(config.out)
    _require(out, "isn_edges.csv", "ssn_edges.csv")
    corpus = _read_stage_corpus(out)
    for kind, name in ((ISN, "isn"), (SSN, "ssn")):
        graph = graph_from_edge_csv(kind, corpus, out / f"{name}_edges.csv")
        for metric in ("betweenness", "d5"):
            bins = decadal_report(graph, corpus, metric, d5_window=config.d5_window)
            write_decade_csv(bins, out / f"decades_{name}_{metric}.csv")
            write_decade_long_csv(bins, out / f"decades_{name}_{metric}_long.csv")
        write_year_diff_csv(
            year_difference_distribution(graph), out / f"year_difference_{name}.csv"
        )


STAGES = {
    "ingest": stage_ingest,
    "reduce": stage_reduce,
    "cluster": stage_cluster,
    "net-isn": stage_net_isn,
    "net-ssn": stage_net_ssn,
    "project": stage_project,
    "metrics": stage_metrics,
    "report": stage_report,
}


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(config: PipelineConfig, path) -> None:
    """Reproducibility record: config echo (minus the output location),
    input content hashes, and versions. Stable across repeated runs."""
    echo = asdict(config)
    echo.pop("out")
    manifest = {
        "config": echo,
        "inputs": {
            "metadata": {"path": config.metadata, "sha256": _sha256(config.metadata)},
            "features": {"path": config.features, "sha256": _sha256(config.features)},
        },
        "versions": {
            "influence-graph": __version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_stage(name: str, config: PipelineConfig) -> None:
    config.validate(require_inputs=name == "ingest")
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    STAGES[name](config)


def run_pipeline(config: PipelineConfig) -> None:
    """All stages in order plus the manifest; any stage error aborts with
    a stage-tagged message and the files this run created are removed."""
    config.validate(require_inputs=True)
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    created: list[Path] = []
    try:
        for name in STAGE_ORDER:
            for artifact in STAGE_FILES[name]:
                created.append(out / artifact)
            try:
                STAGES[name](config)
            except PipelineError as exc:
                cls = ComputationError if isinstance(exc, ComputationError) else ValidationError
                raise cls(f"[{name}] {exc}") from exc
        created.append(out / MANIFEST_FILE)
        write_manifest(config, out / MANIFEST_FILE)
    except Exception:
        for path in created:
            path.unlink(missing_ok=True)
        raise
