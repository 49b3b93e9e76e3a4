"""Per-year co-authorship graphs and egocentric network shapes.

An ego "shape" is the depersonalised signature of a researcher's immediate
co-authorship network: the node and edge counts of the subgraph induced on
the researcher and their co-authors. The residual clustering coefficient is

    C = 2E / (N (N - 1)),   N = total_nodes - 1,   E = total_edges - N,

i.e. the edge density left among the co-authors once the central researcher
and their spokes are removed. C is kept as an exact rational.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

from .corpus import Corpus


class ShapeKey(NamedTuple):
    total_nodes: int
    total_edges: int


@dataclass(frozen=True)
class EgoShape:
    researcher_id: str
    year: int
    total_nodes: int   # ego included
    total_edges: int   # ego's spokes included

    @property
    def n_co(self) -> int:
        return self.total_nodes - 1

    @property
    def e_residual(self) -> int:
        return self.total_edges - self.n_co

    @property
    def clustering_coefficient(self) -> Fraction:
        n, e = self.n_co, self.e_residual
        if n <= 1:
            # Denominator vanishes; a solo author or a single co-author has no
            # residual connectivity to measure.
            return Fraction(0)
        return Fraction(2 * e, n * (n - 1))

    @property
    def key(self) -> ShapeKey:
        return ShapeKey(self.total_nodes, self.total_edges)


class CoauthorGraph:
    """Undirected co-authorship graph over a year window.

    Edge multiplicity counts the number of shared papers; shape computations
    collapse multiplicities to simple edges, the most-frequent-collaborator
    filter reads them directly.
    """

    def __init__(self, window: tuple[int, int]):
        self.window = window
        self.adj: dict[str, dict[str, int]] = {}

    @property
    def nodes(self):
        return self.adj.keys()

    def add_node(self, node: str):
        self.adj.setdefault(node, {})

    def add_paper(self, researcher_ids):
        for rid in researcher_ids:
            self.add_node(rid)
        for u, v in combinations(sorted(set(researcher_ids)), 2):
            self.adj[u][v] = self.adj[u].get(v, 0) + 1
            self.adj[v][u] = self.adj[v].get(u, 0) + 1

    def n_edges(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2

    def neighbors(self, node: str):
        return self.adj[node].keys()

    def has_edge(self, u: str, v: str) -> bool:
        return v in self.adj.get(u, ())

    def edge_multiplicities(self):
        """Iterate (u, v, multiplicity) with u < v."""
        for u, nb in self.adj.items():
            for v, mult in nb.items():
                if u < v:
                    yield u, v, mult


def build_graph(corpus: Corpus, window: tuple[int, int]) -> CoauthorGraph:
    """Co-authorship graph over eligible publications in [start, end]."""
    start, end = window
    if start > end:
        raise ValueError(f"empty year window {window}")
    g = CoauthorGraph((start, end))
    for year in range(start, end + 1):
        for pid in corpus.eligible_pub_ids(year):
            g.add_paper(corpus.publications[pid].resolved_ids)
    return g


def ego_shape(graph: CoauthorGraph, researcher: str) -> EgoShape:
    """Shape of one researcher's egocentric network within `graph`."""
    if researcher not in graph.adj:
        raise KeyError(f"researcher {researcher} not in graph")
    nb = set(graph.adj[researcher])
    # Edges among co-authors, each counted from both endpoints.
    within = sum(len(nb.intersection(graph.adj[u])) for u in nb) // 2
    return EgoShape(
        researcher_id=researcher,
        year=graph.window[0],
        total_nodes=1 + len(nb),
        total_edges=len(nb) + within,
    )


def all_ego_shapes(graph: CoauthorGraph) -> dict[str, EgoShape]:
    """Ego shapes for every node, via one triangle pass over the edges."""
    within = dict.fromkeys(graph.adj, 0)
    adjsets = {u: set(nb) for u, nb in graph.adj.items()}
    for u, nbu in adjsets.items():
        for v in nbu:
            if u < v:
                # Each common neighbour w sees the edge (u, v) inside its ego.
                for w in nbu & adjsets[v]:
                    within[w] += 1
    year = graph.window[0]
    return {
        u: EgoShape(u, year, 1 + len(adjsets[u]), len(adjsets[u]) + within[u])
        for u in adjsets
    }


def shape_frequency_table(corpus: Corpus, year: int,
                          shapes: dict[str, EgoShape] | None = None) -> Counter:
    """Frequency of each shape over researchers active in `year`.

    Counts are per analysis year; the sum of counts equals the number of
    researchers with at least one eligible publication that year.
    """
    if shapes is None:
        shapes = all_ego_shapes(build_graph(corpus, (year, year)))
    return Counter(s.key for s in shapes.values())


def uniqueness_bin(count: int) -> int:
    """Order-of-magnitude rarity bin: floor(log10(count)).

    Bin 0 holds shapes seen fewer than 10 times; boundary counts (10, 100,
    ...) go to the higher bin.
    """
    if count < 1:
        raise ValueError(f"shape frequency must be >= 1, got {count}")
    return len(str(count)) - 1
