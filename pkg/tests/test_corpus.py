import io
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from influence_graph.corpus import (
    ArtworkRecord,
    filter_by_min_works,
    load_corpus,
    make_corpus,
    write_corpus,
)
from influence_graph.errors import CorpusValidationError, ValidationError


def write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def valid_files(tmp_path, n=3, d=4):
    meta = "artwork_id,artist_id,year\n" + "".join(
        f"a{i},artist{i % 2},{1800 + i}\n" for i in range(n)
    )
    feats = "artwork_id," + ",".join(f"f{j}" for j in range(d)) + "\n" + "".join(
        f"a{i}," + ",".join(str(0.5 * i + j) for j in range(d)) + "\n" for i in range(n)
    )
    return (
        write(tmp_path / "metadata.csv", meta),
        write(tmp_path / "features.csv", feats),
    )


def test_load_valid_rows(tmp_path):
    meta, feats = valid_files(tmp_path, n=3, d=4)
    corpus = load_corpus(meta, feats)
    assert len(corpus) == 3
    assert corpus.feature_dim == 4
    assert corpus.artwork_ids == ("a0", "a1", "a2")  # sorted by (year, id)
    assert corpus.artist_index == {"artist0": (0, 2), "artist1": (1,)}


def test_records_sorted_by_year_then_id(tmp_path):
    meta = write(
        tmp_path / "m.csv",
        "artwork_id,artist_id,year\nb,x,1800\na,y,1800\nc,z,1700\n",
    )
    feats = write(
        tmp_path / "f.csv",
        "artwork_id,f0\nb,1\na,2\nc,3\n",
    )
    corpus = load_corpus(meta, feats)
    assert corpus.artwork_ids == ("c", "a", "b")


def test_orphan_feature_row_is_reported(tmp_path):
    meta = write(tmp_path / "m.csv", "artwork_id,artist_id,year\nx1,a,1800\n")
    feats = write(tmp_path / "f.csv", "artwork_id,f0\nx1,1.0\nghost,2.0\n")
    report = io.StringIO()
    with pytest.raises(CorpusValidationError):
        load_corpus(meta, feats, report_stream=report)
    assert "ghost" in report.getvalue()
    assert report.getvalue().startswith("ERROR ")


def test_duplicate_metadata_id_is_reported(tmp_path):
    meta = write(
        tmp_path / "m.csv",
        "artwork_id,artist_id,year\nx1,a,1800\nx1,b,1801\n",
    )
    feats = write(tmp_path / "f.csv", "artwork_id,f0\nx1,1.0\n")
    report = io.StringIO()
    with pytest.raises(CorpusValidationError):
        load_corpus(meta, feats, report_stream=report)
    assert "duplicate artwork_id 'x1'" in report.getvalue()
    # row number of the offending line (header is row 1)
    assert "ERROR 3:" in report.getvalue()


def test_missing_features_for_metadata_row(tmp_path):
    meta = write(
        tmp_path / "m.csv",
        "artwork_id,artist_id,year\nx1,a,1800\nx2,b,1801\n",
    )
    feats = write(tmp_path / "f.csv", "artwork_id,f0\nx1,1.0\n")
    report = io.StringIO()
    with pytest.raises(CorpusValidationError):
        load_corpus(meta, feats, report_stream=report)
    assert "no features for artwork_id 'x2'" in report.getvalue()


@pytest.mark.parametrize(
    "bad_cell,message",
    [("not-a-number", "unparseable"), ("inf", "non-finite"), ("nan", "non-finite")],
)
def test_bad_feature_values(tmp_path, bad_cell, message):
    meta = write(tmp_path / "m.csv", "artwork_id,artist_id,year\nx1,a,1800\n")
    feats = write(tmp_path / "f.csv", f"artwork_id,f0\nx1,{bad_cell}\n")
    report = io.StringIO()
    with pytest.raises(CorpusValidationError):
        load_corpus(meta, feats, report_stream=report)
    assert message in report.getvalue()


def test_unparseable_year(tmp_path):
    meta = write(tmp_path / "m.csv", "artwork_id,artist_id,year\nx1,a,Edo era\n")
    feats = write(tmp_path / "f.csv", "artwork_id,f0\nx1,1.0\n")
    report = io.StringIO()
    with pytest.raises(CorpusValidationError):
        load_corpus(meta, feats, report_stream=report)
    assert "unparseable year" in report.getvalue()


def test_year_range_enforced(tmp_path):
    meta = write(tmp_path / "m.csv", "artwork_id,artist_id,year\nx1,a,1200\n")
    feats = write(tmp_path / "f.csv", "artwork_id,f0\nx1,1.0\n")
    with pytest.raises(CorpusValidationError):
        load_corpus(meta, feats, report_stream=io.StringIO())
    # but a widened range admits the same file
    corpus = load_corpus(meta, feats, min_year=1000)
    assert corpus.records[0].year == 1200


def test_ragged_feature_row(tmp_path):
    meta = write(
        tmp_path / "m.csv",
        "artwork_id,artist_id,year\nx1,a,1800\nx2,b,1801\n",
    )
    feats = write(tmp_path / "f.csv", "artwork_id,f0,f1\nx1,1.0,2.0\nx2,1.0\n")
    report = io.StringIO()
    with pytest.raises(CorpusValidationError):
        load_corpus(meta, feats, report_stream=report)
    assert "expected 3 columns" in report.getvalue()


def test_load_is_deterministic(tmp_path):
    meta, feats = valid_files(tmp_path)
    first = load_corpus(meta, feats)
    second = load_corpus(meta, feats)
    assert first == second
    out_m, out_f = tmp_path / "out_m.csv", tmp_path / "out_f.csv"
    write_corpus(first, out_m, out_f)
    reloaded = load_corpus(out_m, out_f)
    assert reloaded == first
    # writing the reloaded corpus reproduces the bytes
    out_m2, out_f2 = tmp_path / "out_m2.csv", tmp_path / "out_f2.csv"
    write_corpus(reloaded, out_m2, out_f2)
    assert out_m2.read_bytes() == out_m.read_bytes()
    assert out_f2.read_bytes() == out_f.read_bytes()


def records_strategy():
    record = st.tuples(
        st.integers(0, 999),
        st.integers(0, 5),
        st.integers(1500, 2100),
    )
    return st.lists(record, min_size=1, max_size=40, unique_by=lambda r: r[0]).map(
        lambda rows: [
            ArtworkRecord(f"id{i}", f"artist{a}", y, (float(i), 1.0))
            for (i, a, y) in rows
        ]
    )


@given(records_strategy())
def test_filter_min_count_one_is_identity(records):
    corpus = make_corpus(records)
    assert filter_by_min_works(corpus, 1) == corpus


@given(records_strategy(), st.integers(1, 10))
def test_filter_keeps_only_large_artists(records, min_count):
    corpus = make_corpus(records)
    filtered = filter_by_min_works(corpus, min_count)
    counts = {a: len(ix) for a, ix in corpus.artist_index.items()}
    for rec in filtered.records:
        assert counts[rec.artist_id] >= min_count
    kept = {a for a, c in counts.items() if c >= min_count}
    assert len(filtered.records) == sum(counts[a] for a in kept)
    # ordering preserved
    kept_ids = [r.artwork_id for r in corpus.records if r.artist_id in kept]
    assert list(filtered.artwork_ids) == kept_ids


def test_filter_boundary_is_inclusive():
    records = [
        ArtworkRecord(f"a{i}", "A", 1800 + i, (1.0,)) for i in range(150)
    ] + [ArtworkRecord(f"b{i}", "B", 1800 + i, (1.0,)) for i in range(99)]
    corpus = make_corpus(records)
    filtered = filter_by_min_works(corpus, 100)
    assert set(r.artist_id for r in filtered.records) == {"A"}
    assert len(filtered) == 150


def test_filter_can_empty_the_corpus():
    corpus = make_corpus([ArtworkRecord("a", "A", 1800, (1.0,))])
    filtered = filter_by_min_works(corpus, 2)
    assert len(filtered) == 0
    assert filtered.feature_dim == 1


def test_filter_rejects_bad_min_count():
    corpus = make_corpus([ArtworkRecord("a", "A", 1800, (1.0,))])
    with pytest.raises(ValidationError):
        filter_by_min_works(corpus, 0)
