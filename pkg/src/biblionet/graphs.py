"""Weighted undirected collaboration and co-occurrence graphs.

Five graph kinds are built from a corpus: co-authorship, country and
institution collaboration (where repeated values within one paper
become self-loops), and research-area / keyword co-occurrence.  Edge
weight counts pairwise co-occurrences across records.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path
from xml.etree import ElementTree

from .normalize import ExtractionMode, NormalizationRules, extract_countries, extract_institutions
from .wos_ingest import Corpus


class GraphKind(str, Enum):
    COAUTHOR = "coauthor"
    COUNTRY = "country"
    INSTITUTION = "institution"
    RESEARCH_AREA = "research_area"
    KEYWORD = "keyword"


SELF_LOOP_KINDS = frozenset({GraphKind.COUNTRY, GraphKind.INSTITUTION})


def canonical_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass
class WeightedGraph:
    """Undirected weighted graph with labeled nodes.

    Edge keys are stored in canonical (lexicographic) orientation;
    self-pairs are allowed only for the country and institution kinds.
    """

    kind: GraphKind
    nodes: set[str] = field(default_factory=set)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def self_loops(self) -> list[tuple[str, str]]:
        return [pair for pair in self.edges if pair[0] == pair[1]]

    def add_pair(self, a: str, b: str, weight: int = 1) -> None:
        if a == b and self.kind not in SELF_LOOP_KINDS:
            raise ValueError(f"self-loops are not allowed in {self.kind.value} graphs")
        pair = canonical_pair(a, b)
        self.nodes.add(a)
        self.nodes.add(b)
        self.edges[pair] = self.edges.get(pair, 0) + weight

    def adjacency(self) -> dict[str, set[str]]:
        """Neighbor sets of the simple-graph view (self-loops ignored)."""
        adj: dict[str, set[str]] = {node: set() for node in self.nodes}
        for (a, b) in self.edges:
            if a != b:
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def degree(self, node: str) -> int:
        """Distinct-neighbor degree, self-loops excluded."""
        return len(self.adjacency()[node])

    def weighted_degree(self, node: str) -> int:
        """Sum of incident edge weights; a self-loop counts twice."""
        total = 0
        for (a, b), weight in self.edges.items():
            if a == node:
                total += weight
            if b == node:
                total += weight
        return total

    def validate(self) -> None:
        for (a, b), weight in self.edges.items():
            if a not in self.nodes or b not in self.nodes:
                raise ValueError(f"edge ({a!r}, {b!r}) references unknown node")
            if weight < 1:
                raise ValueError(f"edge ({a!r}, {b!r}) has nonpositive weight {weight}")
            if not a <= b:
                raise ValueError(f"edge ({a!r}, {b!r}) is not in canonical orientation")
            if a == b and self.kind not in SELF_LOOP_KINDS:
                raise ValueError(f"self-loop {a!r} in {self.kind.value} graph")


def build_coauthorship(corpus: Corpus) -> WeightedGraph:
    """One node per author; each shared paper adds 1 to the pair weight.

    Solo authors become isolated nodes.
    """
    graph = WeightedGraph(GraphKind.COAUTHOR)
    for record in corpus.records:
        authors = record.distinct_authors()
        graph.nodes.update(authors)
        for a, b in combinations(authors, 2):
            graph.add_pair(a, b)
    return graph


def _build_multiset_graph(corpus: Corpus, kind: GraphKind, values_of) -> WeightedGraph:
    graph = WeightedGraph(kind)
    for record in corpus.records:
        values = values_of(record)
        graph.nodes.update(values)
        # pairs over the multiset: equal labels from different address
        # segments become self-loops (intra-country / intra-institution
        # collaboration)
        for a, b in combinations(values, 2):
            graph.add_pair(a, b)
    return graph


def build_country_graph(corpus: Corpus, rules: NormalizationRules | None = None) -> WeightedGraph:
    """Country collaboration graph over per-segment country multisets."""
    return _build_multiset_graph(
        corpus, GraphKind.COUNTRY,
        lambda record: extract_countries(record.addresses, ExtractionMode.MULTISET, rules),
    )


def build_institution_graph(corpus: Corpus) -> WeightedGraph:
    """Institution collaboration graph over per-segment institution multisets."""
    return _build_multiset_graph(
        corpus, GraphKind.INSTITUTION,
        lambda record: extract_institutions(record.addresses, ExtractionMode.MULTISET),
    )


def build_cooccurrence(corpus: Corpus, field: str) -> WeightedGraph:
    """Co-occurrence graph of research areas or author keywords.

    Values are de-duplicated within a record, so no self-loops arise.
    """
    if field == "research_area":
        kind = GraphKind.RESEARCH_AREA
        values_of = lambda record: list(dict.fromkeys(record.research_areas))
    elif field == "keyword":
        kind = GraphKind.KEYWORD
        values_of = lambda record: list(dict.fromkeys(record.author_keywords))
    else:
        raise ValueError(f"unknown co-occurrence field {field!r}")
    graph = WeightedGraph(kind)
    for record in corpus.records:
        values = values_of(record)
        graph.nodes.update(values)
        for a, b in combinations(values, 2):
            graph.add_pair(a, b)
    return graph


@dataclass(frozen=True)
class GraphFacts:
    node_count: int
    edge_count: int
    self_loop_count: int
    isolated_count: int
    component_count: int
    component_sizes: tuple[int, ...]


def connected_components(graph: WeightedGraph) -> list[set[str]]:
    """Components of the simple-graph view, largest first.

    Ties on size break by smallest member label for determinism.
    """
    adj = graph.adjacency()
    seen: set[str] = set()
    components = []
    for start in sorted(graph.nodes):
        if start in seen:
            continue
        component = {start}
        frontier = [start]
        seen.add(start)
        while frontier:
            node = frontier.pop()
            for neighbor in adj[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    component.add(neighbor)
                    frontier.append(neighbor)
        components.append(component)
    components.sort(key=lambda c: (-len(c), min(c)))
    return components


def graph_facts(graph: WeightedGraph) -> GraphFacts:
    """Node/edge/self-loop/isolation/component summary.

    A node is isolated only when it has no incident edges at all; a
    node carrying just a self-loop is not isolated.
    """
    touched: set[str] = set()
    for (a, b) in graph.edges:
        touched.add(a)
        touched.add(b)
    components = connected_components(graph)
    return GraphFacts(
        node_count=graph.node_count,
        edge_count=graph.edge_count,
        self_loop_count=len(graph.self_loops()),
        isolated_count=len(graph.nodes - touched),
        component_count=len(components),
        component_sizes=tuple(len(c) for c in components),
    )


def top_weighted_edges(
    graph: WeightedGraph, k: int, include_self_loops: bool = True
) -> list[tuple[str, str, int]]:
    """Heaviest k edges, ties by canonical pair ascending."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    edges = [
        (a, b, weight)
        for (a, b), weight in graph.edges.items()
        if include_self_loops or a != b
    ]
    edges.sort(key=lambda edge: (-edge[2], edge[0], edge[1]))
    return edges[:k]


def degree_counts(graph: WeightedGraph) -> Counter:
    """Histogram of distinct-neighbor degrees."""
    adj = graph.adjacency()
    return Counter(len(neighbors) for neighbors in adj.values())


def write_graphml(graph: WeightedGraph, path: str | Path) -> None:
    """GraphML export with an integer `weight` edge attribute."""
    root = ElementTree.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    key = ElementTree.SubElement(root, "key")
    key.set("id", "weight")
    key.set("for", "edge")
    key.set("attr.name", "weight")
    key.set("attr.type", "int")
    container = ElementTree.SubElement(root, "graph")
    container.set("id", graph.kind.value)
    container.set("edgedefault", "undirected")
    for node in sorted(graph.nodes):
        ElementTree.SubElement(container, "node", id=node)
    for (a, b) in sorted(graph.edges):
        edge = ElementTree.SubElement(container, "edge", source=a, target=b)
        data = ElementTree.SubElement(edge, "data", key="weight")
        data.text = str(graph.edges[(a, b)])
    tree = ElementTree.ElementTree(root)
    ElementTree.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)


def _dot_quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(graph: WeightedGraph, path: str | Path) -> None:
    """DOT export with a `weight` edge attribute."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"graph {graph.kind.value} {{\n")
        for node in sorted(graph.nodes):
            fh.write(f"  {_dot_quote(node)};\n")
        for (a, b) in sorted(graph.edges):
            fh.write(f"  {_dot_quote(a)} -- {_dot_quote(b)} [weight={graph.edges[(a, b)]}];\n")
        fh.write("}\n")


def write_edge_csv(graph: WeightedGraph, path: str | Path) -> None:
    """Edge list as CSV (label_a, label_b, weight) in canonical order."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["label_a", "label_b", "weight"])
        for (a, b) in sorted(graph.edges):
            writer.writerow([a, b, graph.edges[(a, b)]])
