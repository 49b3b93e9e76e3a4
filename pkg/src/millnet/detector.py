"""Suspicious-author filter cascade and connected-component analysis.

Candidates must clear five filters for an analysis year:

  F1  young ego (career stage I-II by default)
  F2  rare network shape (seen fewer than 10 times that year)
  F3  more than 20 eligible publications in the year
  F4  a most-frequent collaborator at stage I-III
  F5  at least half of the ego network at stage I-II

The surviving candidates are then connected by co-authorship over a two-year
window and the largest connected component is kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Corpus, active_researchers, career_stage, publication_age
from .graph import all_ego_shapes, build_graph, shape_frequency_table

# Bit positions of the five filters in a candidate bitmask.
F1_YOUNG_EGO = 1
F2_RARE_SHAPE = 2
F3_HIGH_VOLUME = 4
F4_YOUNG_TOP_COLLABORATOR = 8
F5_YOUNG_NETWORK = 16
ALL_FILTERS = F1_YOUNG_EGO | F2_RARE_SHAPE | F3_HIGH_VOLUME \
    | F4_YOUNG_TOP_COLLABORATOR | F5_YOUNG_NETWORK

#: Stage set used for the "young network" fraction (filter F5).
YOUNG_STAGES = frozenset({1, 2})


@dataclass(frozen=True)
class DetectorParams:
    rare_shape_max: int = 10          # F2: shape frequency strictly below this
    min_pubs_per_year: int = 20       # F3: strictly exceeded
    ego_stages: frozenset = frozenset({1, 2})
    collaborator_stages: frozenset = frozenset({1, 2, 3})
    young_fraction_min: float = 0.5   # F5: inclusive threshold
    lcc_window_years: int = 2

    def __post_init__(self):
        if self.rare_shape_max < 1 or self.min_pubs_per_year < 1:
            raise ValueError("thresholds must be positive")
        if not 0.0 <= self.young_fraction_min <= 1.0:
            raise ValueError("young_fraction_min must lie in [0, 1]")
        if self.lcc_window_years < 1:
            raise ValueError("lcc_window_years must be positive")


@dataclass
class SuspiciousCohort:
    year: int
    window: tuple[int, int]
    candidates: set[str]
    lcc_members: set[str]
    component_sizes: list[int] = field(default_factory=list)  # descending


def filter_bitmasks(corpus: Corpus, year: int, params: DetectorParams) -> dict[str, int]:
    """Per-researcher bitmask of passed filters over the year's active population."""
    lo, hi = corpus.year_range
    if not lo <= year <= hi:
        raise ValueError(f"year {year} outside corpus range {lo}-{hi}")
    year_graph = build_graph(corpus, (year, year))
    shapes = all_ego_shapes(year_graph)
    freq = shape_frequency_table(corpus, year, shapes=shapes)

    stage_cache: dict[str, int] = {}

    def stage_of(rid: str) -> int:
        st = stage_cache.get(rid)
        if st is None:
            age = publication_age(corpus.profiles[rid], year)
            st = career_stage(min(age, 100)).stage
            stage_cache[rid] = st
        return st

    masks: dict[str, int] = {}
    for rid in year_graph.nodes:
        mask = 0
        if stage_of(rid) in params.ego_stages:
            mask |= F1_YOUNG_EGO
        if freq[shapes[rid].key] < params.rare_shape_max:
            mask |= F2_RARE_SHAPE
        if corpus.profiles[rid].pubs_by_year.get(year, 0) > params.min_pubs_per_year:
            mask |= F3_HIGH_VOLUME
        neighbours = year_graph.adj[rid]
        if neighbours:
            top = max(neighbours.values())
            # Permissive tie rule: pass if any maximal-multiplicity
            # collaborator is young enough.
            if any(mult == top and stage_of(co) in params.collaborator_stages
                   for co, mult in neighbours.items()):
                mask |= F4_YOUNG_TOP_COLLABORATOR
            young = sum(1 for co in neighbours if stage_of(co) in YOUNG_STAGES)
            if young >= params.young_fraction_min * len(neighbours):
                mask |= F5_YOUNG_NETWORK
        masks[rid] = mask
    return masks


def candidate_filter(corpus: Corpus, year: int, params: DetectorParams) -> set[str]:
    """Researchers passing all five filters for the analysis year."""
    masks = filter_bitmasks(corpus, year, params)
    return {rid for rid, mask in masks.items() if mask == ALL_FILTERS}


class UnionFind:
    """Disjoint sets with union by size and path compression."""

    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.size = {x: 1 for x in self.parent}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def connected_components(nodes, edges) -> list[set]:
    """All connected components, largest first (ties by smallest member id)."""
    nodes = set(nodes)
    uf = UnionFind(nodes)
    for u, v in edges:
        if u not in nodes or v not in nodes:
            raise ValueError(f"edge ({u}, {v}) has an endpoint outside the node set")
        uf.union(u, v)
    groups: dict[str, set] = {}
    for n in nodes:
        groups.setdefault(uf.find(n), set()).add(n)
    return sorted(groups.values(), key=lambda comp: (-len(comp), min(comp)))


def largest_connected_component(nodes, edges) -> set:
    """Maximum-cardinality component; ties broken by smallest member id."""
    components = connected_components(nodes, edges)
    return components[0] if components else set()


def suspicious_cohort(corpus: Corpus, year: int, params: DetectorParams) -> SuspiciousCohort:
    """Year cohort: filtered candidates plus their largest connected component.

    Candidate edges require direct co-authorship on an eligible publication
    within [year, year + lcc_window_years - 1]; no paths through
    non-candidate intermediaries.
    """
    window = (year, year + params.lcc_window_years - 1)
    lo, hi = corpus.year_range
    if window[1] > hi or window[0] < lo:
        raise ValueError(f"window {window} exceeds corpus range {lo}-{hi}")
    candidates = candidate_filter(corpus, year, params)
    if not candidates:
        return SuspiciousCohort(year, window, set(), set(), [])
    window_graph = build_graph(corpus, window)
    edges = [
        (u, v)
        for u in sorted(candidates)
        for v in window_graph.adj.get(u, ())
        if v in candidates and u < v
    ]
    components = connected_components(candidates, edges)
    return SuspiciousCohort(
        year=year,
        window=window,
        candidates=candidates,
        lcc_members=set(components[0]),
        component_sizes=[len(c) for c in components],
    )


def stage12_population(corpus: Corpus, year: int) -> set[str]:
    """Active researchers that year with a Stage I or II publication age."""
    out = set()
    for rid in active_researchers(corpus, year):
        age = publication_age(corpus.profiles[rid], year)
        if career_stage(min(age, 100)).stage in YOUNG_STAGES:
            out.add(rid)
    return out


def cohort_trend(corpus: Corpus, years, params: DetectorParams) -> list[dict]:
    """Yearly candidate and LCC shares of the Stage I-II population."""
    rows = []
    for year in years:
        cohort = suspicious_cohort(corpus, year, params)
        base = stage12_population(corpus, year)
        n_base = len(base)
        rows.append({
            "year": year,
            "n_stage12": n_base,
            "n_candidates": len(cohort.candidates),
            "n_lcc": len(cohort.lcc_members),
            "pct_candidates": 100.0 * len(cohort.candidates) / n_base if n_base else 0.0,
            "pct_lcc": 100.0 * len(cohort.lcc_members) / n_base if n_base else 0.0,
        })
    return rows
