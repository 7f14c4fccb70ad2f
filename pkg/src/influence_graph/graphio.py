"""Graph serialization: GraphML, DOT, and the CSV edge list.

The CSV edge list is the interchange format between pipeline stages and
must round-trip bit-exactly: weights are printed with 9 significant
digits, and re-reading then re-writing a file reproduces it byte for
byte. GraphML and DOT are write-only exports for external tools; all
three are emitted deterministically (canonical node and edge order).
"""

from __future__ import annotations

import csv
from xml.sax.saxutils import escape, quoteattr

from .corpus import Corpus
from .errors import ValidationError
from .netbuild import ARTIST, ISN, SSN, GraphNode, InfluenceGraph


def format_weight(w: float) -> str:
    return f"{w:.9g}"


def write_edge_csv(g: InfluenceGraph, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src", "dst", "weight"])
        for src, dst, weight in g.edges:
            writer.writerow([src, dst, format_weight(weight)])


def read_edge_csv(path) -> list[tuple[str, str, float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["src", "dst", "weight"]:
            raise ValidationError(f"{path}: bad edge list header {header!r}")
        return [(src, dst, float(weight)) for src, dst, weight in reader]


def graph_from_edge_csv(kind: str, corpus: Corpus, path) -> InfluenceGraph:
    """Rebuild a graph from its edge list plus the corpus node universe.

    Artwork graphs get one node per corpus record; ARTIST graphs one node
    per corpus artist, matching what build/projection emit.
    """
    edges = tuple(read_edge_csv(path))
    if kind in (ISN, SSN):
        nodes = tuple(
            GraphNode(r.artwork_id, "artwork", r.artist_id, r.year)
            for r in corpus.records
        )
    elif kind == ARTIST:
        nodes = tuple(GraphNode(a, "artist", a, None) for a in corpus.artists)
    else:
        raise ValidationError(f"unknown graph kind {kind!r}")
    return InfluenceGraph(kind, nodes, edges)


def write_graphml(g: InfluenceGraph, path) -> None:
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="kind" for="node" attr.name="kind" attr.type="string"/>',
        '  <key id="artist_id" for="node" attr.name="artist_id" attr.type="string"/>',
        '  <key id="year" for="node" attr.name="year" attr.type="int"/>',
        '  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>',
        f'  <graph id={quoteattr(g.kind)} edgedefault="directed">',
    ]
    for node in g.nodes:
        lines.append(f"    <node id={quoteattr(node.node_id)}>")
        lines.append(f'      <data key="kind">{escape(node.kind)}</data>')
        lines.append(f'      <data key="artist_id">{escape(node.artist_id)}</data>')
        if node.year is not None:
            lines.append(f'      <data key="year">{node.year}</data>')
        lines.append("    </node>")
    for src, dst, weight in g.edges:
        lines.append(f"    <edge source={quoteattr(src)} target={quoteattr(dst)}>")
        lines.append(f'      <data key="weight">{format_weight(weight)}</data>')
        lines.append("    </edge>")
    lines += ["  </graph>", "</graphml>", ""]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(g: InfluenceGraph, path) -> None:
    lines = [f"digraph {_dot_quote(g.kind)} {{"]
    for node in g.nodes:
        lines.append(f"  {_dot_quote(node.node_id)};")
    for src, dst, weight in g.edges:
        lines.append(
            f"  {_dot_quote(src)} -> {_dot_quote(dst)} "
            f"[label={_dot_quote(format_weight(weight))}];"
        )
    lines += ["}", ""]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines))
