"""Artwork corpus: data model, CSV ingestion and validation.

Interchange formats (UTF-8, comma-delimited, '.' decimal point):

* metadata CSV: header ``artwork_id,artist_id,year``, one row per artwork
* features CSV: header ``artwork_id,f0,...,f{d-1}``, real numbers in
  decimal or scientific notation

Validation problems are reported to stderr as ``ERROR <row>: <message>``
lines (row = 1-based physical line number, header is row 1) before a
CorpusValidationError is raised.
"""

from __future__ import annotations

import csv
import math
import sys
from dataclasses import dataclass, field

from .errors import CorpusValidationError, ValidationError

DEFAULT_MIN_YEAR = 1500
DEFAULT_MAX_YEAR = 2100


@dataclass(frozen=True)
class ArtworkRecord:
    artwork_id: str
    artist_id: str
    year: int
    features: tuple[float, ...]


@dataclass(frozen=True)
class Corpus:
    """Immutable, validated corpus; records sorted by (year, artwork_id)."""

    records: tuple[ArtworkRecord, ...]
    feature_dim: int
    artist_index: dict[str, tuple[int, ...]] = field(repr=False)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def artwork_ids(self) -> tuple[str, ...]:
        return tuple(r.artwork_id for r in self.records)

    @property
    def artists(self) -> tuple[str, ...]:
        return tuple(sorted(self.artist_index))

    def year_of(self) -> dict[str, int]:
        return {r.artwork_id: r.year for r in self.records}

    def artist_of(self) -> dict[str, str]:
        return {r.artwork_id: r.artist_id for r in self.records}


def _build_index(records) -> dict[str, tuple[int, ...]]:
    index: dict[str, list[int]] = {}
    for i, rec in enumerate(records):
        index.setdefault(rec.artist_id, []).append(i)
    return {a: tuple(ix) for a, ix in sorted(index.items())}


def make_corpus(records) -> Corpus:
    """Assemble a Corpus from validated records (sorts, indexes, checks)."""
    records = sorted(records, key=lambda r: (r.year, r.artwork_id))
    if not records:
        raise ValidationError("corpus has no records")
    dim = len(records[0].features)
    seen: set[str] = set()
    for rec in records:
        if len(rec.features) != dim:
            raise ValidationError(
                f"feature dimension mismatch for {rec.artwork_id!r}: "
                f"{len(rec.features)} != {dim}"
            )
        if rec.artwork_id in seen:
            raise ValidationError(f"duplicate artwork_id {rec.artwork_id!r}")
        seen.add(rec.artwork_id)
    return Corpus(tuple(records), dim, _build_index(records))


def _read_rows(path):
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        for row in reader:
            yield reader.line_num, row


def _report(problems, stream) -> None:
    for row, message in problems:
        print(f"ERROR {row}: {message}", file=stream)


def load_corpus(
    metadata_path,
    features_path,
    *,
    min_year: int = DEFAULT_MIN_YEAR,
    max_year: int = DEFAULT_MAX_YEAR,
    report_stream=None,
) -> Corpus:
    """Load and join the metadata and features CSVs into a Corpus.

    Deterministic: the same two files always produce the same Corpus
    (records sorted by (year, artwork_id), which is a total order because
    artwork_id is unique).
    """
    stream = sys.stderr if report_stream is None else report_stream
    problems: list[tuple[int, str]] = []

    meta: dict[str, tuple[str, int, int]] = {}
    meta_rows = _read_rows(metadata_path)
    try:
        _, header = next(meta_rows)
    except StopIteration:
        problems.append((1, f"{metadata_path}: empty file"))
        header = None
    if header is not None and header != ["artwork_id", "artist_id", "year"]:
        problems.append((1, f"{metadata_path}: bad header {header!r}"))
    else:
        for line_num, row in meta_rows:
            if len(row) != 3:
                problems.append((line_num, f"expected 3 columns, got {len(row)}"))
                continue
            artwork_id, artist_id, year_text = row
            if not artwork_id:
                problems.append((line_num, "empty artwork_id"))
                continue
            if artwork_id in meta:
                problems.append((line_num, f"duplicate artwork_id {artwork_id!r}"))
                continue
            try:
                year = int(year_text)
            except ValueError:
                problems.append((line_num, f"unparseable year {year_text!r}"))
                continue
            if not min_year <= year <= max_year:
                problems.append(
                    (line_num, f"year {year} outside [{min_year}, {max_year}]")
                )
                continue
            meta[artwork_id] = (artist_id, year, line_num)

    feats: dict[str, tuple[float, ...]] = {}
    dim = None
    feat_rows = _read_rows(features_path)
    try:
        _, header = next(feat_rows)
    except StopIteration:
        problems.append((1, f"{features_path}: empty file"))
        header = None
    if header is not None:
        dim = len(header) - 1
        if dim < 1 or header != ["artwork_id"] + [f"f{i}" for i in range(dim)]:
            problems.append((1, f"{features_path}: bad header {header!r}"))
            dim = None
    if dim is not None:
        for line_num, row in feat_rows:
            if len(row) != dim + 1:
                problems.append(
                    (line_num, f"expected {dim + 1} columns, got {len(row)}")
                )
                continue
            artwork_id = row[0]
            if artwork_id in feats:
                problems.append((line_num, f"duplicate artwork_id {artwork_id!r}"))
                continue
            values = []
            bad = False
            for i, cell in enumerate(row[1:]):
                try:
                    value = float(cell)
                except ValueError:
                    problems.append((line_num, f"unparseable value f{i}={cell!r}"))
                    bad = True
                    break
                if not math.isfinite(value):
                    problems.append((line_num, f"non-finite value f{i}={cell!r}"))
                    bad = True
                    break
                values.append(value)
            if bad:
                continue
            if artwork_id not in meta:
                problems.append(
                    (line_num, f"features for unknown artwork_id {artwork_id!r}")
                )
                continue
            feats[artwork_id] = tuple(values)

    for artwork_id, (_, _, line_num) in meta.items():
        if artwork_id not in feats:
            problems.append((line_num, f"no features for artwork_id {artwork_id!r}"))

    if problems:
        problems.sort()
        _report(problems, stream)
        raise CorpusValidationError(metadata_path, problems)

    records = [
        ArtworkRecord(artwork_id, artist_id, year, feats[artwork_id])
        for artwork_id, (artist_id, year, _) in meta.items()
    ]
    return make_corpus(records)


def filter_by_min_works(corpus: Corpus, min_count: int) -> Corpus:
    """Keep only artists with at least min_count artworks; order preserved.

    An empty result is valid and keeps the original feature_dim.
    """
    if min_count < 1:
        raise ValidationError(f"min_count must be >= 1, got {min_count}")
    keep = {a for a, ix in corpus.artist_index.items() if len(ix) >= min_count}
    records = tuple(r for r in corpus.records if r.artist_id in keep)
    return Corpus(records, corpus.feature_dim, _build_index(records))


def write_corpus(corpus: Corpus, metadata_path, features_path) -> None:
    """Write the canonical CSV pair (sorted records, round-trip floats)."""
    with open(metadata_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["artwork_id", "artist_id", "year"])
        for rec in corpus.records:
            writer.writerow([rec.artwork_id, rec.artist_id, rec.year])
    with open(features_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["artwork_id"] + [f"f{i}" for i in range(corpus.feature_dim)])
        for rec in corpus.records:
            writer.writerow([rec.artwork_id] + [repr(float(v)) for v in rec.features])
