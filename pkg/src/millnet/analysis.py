"""Null-model baselines, flag-list validation and peer-review proximity.

All Monte Carlo routines derive one sub-seed per sample from (seed, index),
so results are reproducible bit-for-bit regardless of scheduling.
"""

from __future__ import annotations

import hashlib
import random
import statistics
from dataclasses import dataclass, field

from .corpus import Corpus, career_stage, publication_age
from .detector import SuspiciousCohort, connected_components
from .errors import DataError
from .graph import CoauthorGraph, all_ego_shapes, build_graph


def _subseed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def graph_density(graph: CoauthorGraph) -> float:
    """Simple-edge density 2|E| / n(n-1); multiplicities collapsed."""
    n = len(graph.adj)
    if n < 2:
        raise ValueError("density undefined for graphs with fewer than 2 nodes")
    return 2.0 * graph.n_edges() / (n * (n - 1))


def _induced_metrics(window_graph: CoauthorGraph, members: set[str]):
    """Density and LCC ratio of the subgraph induced on `members`.

    Members absent from the window graph count as isolated nodes.
    """
    n = len(members)
    if n < 2:
        raise ValueError("need at least 2 members")
    edges = [
        (u, v)
        for u in members
        for v in window_graph.adj.get(u, ())
        if v in members and u < v
    ]
    density = 2.0 * len(edges) / (n * (n - 1))
    components = connected_components(members, edges)
    lcc_ratio = len(components[0]) / n
    return density, lcc_ratio


@dataclass
class NullModelResult:
    sample_size: int
    n_samples: int
    densities: list[float]
    lcc_ratios: list[float]
    observed_density: float
    observed_lcc_ratio: float
    seed: int
    pool_size: int

    @property
    def mean_density(self) -> float:
        return statistics.fmean(self.densities)

    @property
    def sd_density(self) -> float:
        return statistics.pstdev(self.densities)

    @property
    def mean_lcc_ratio(self) -> float:
        return statistics.fmean(self.lcc_ratios)

    @property
    def sd_lcc_ratio(self) -> float:
        return statistics.pstdev(self.lcc_ratios)


def null_density_baseline(corpus: Corpus, year: int, cohort: SuspiciousCohort,
                          n_samples: int, seed: int,
                          c_max: float = 0.4, min_pubs: int = 20,
                          invert_c: bool = False) -> NullModelResult:
    """Density/LCC-ratio distribution over random researcher samples.

    The sampling pool holds researchers active in `year` with clustering
    coefficient strictly below `c_max` (above, when `invert_c` is set) and
    more than `min_pubs` eligible publications, excluding the cohort's own
    candidates. Each sample matches the cohort size and is drawn without
    replacement; the sample graph spans the cohort's window.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    k = len(cohort.candidates)
    if k < 2:
        raise ValueError("cohort too small for a density baseline")
    shapes = all_ego_shapes(build_graph(corpus, (year, year)))
    pool = []
    for rid, shape in shapes.items():
        if rid in cohort.candidates:
            continue
        if corpus.profiles[rid].pubs_by_year.get(year, 0) <= min_pubs:
            continue
        c = shape.clustering_coefficient
        if (c > c_max) if invert_c else (c < c_max):
            pool.append(rid)
    pool.sort()
    if len(pool) < k:
        raise DataError(
            f"sampling pool has {len(pool)} researchers, need {k}")

    window_graph = build_graph(corpus, cohort.window)
    observed_density, observed_lcc = _induced_metrics(window_graph, cohort.candidates)

    densities, ratios = [], []
    for i in range(n_samples):
        rng = random.Random(_subseed(seed, i))
        sample = set(rng.sample(pool, k))
        d, r = _induced_metrics(window_graph, sample)
        densities.append(d)
        ratios.append(r)
    return NullModelResult(
        sample_size=k, n_samples=n_samples,
        densities=densities, lcc_ratios=ratios,
        observed_density=observed_density, observed_lcc_ratio=observed_lcc,
        seed=seed, pool_size=len(pool),
    )


# ---------------------------------------------------------------------------
# Flag-list overlap
# ---------------------------------------------------------------------------

def cohort_members(cohorts) -> set[str]:
    """Union of LCC membership over one or more cohorts."""
    if isinstance(cohorts, SuspiciousCohort):
        cohorts = [cohorts]
    members: set[str] = set()
    for c in cohorts:
        members |= c.lcc_members
    return members


def _window_pub_ids(corpus: Corpus, window) -> list[str]:
    """Eligible publications in the window with at least one resolved author."""
    out = []
    for year in range(window[0], window[1] + 1):
        for pid in corpus.eligible_pub_ids(year):
            if corpus.publications[pid].resolved_ids:
                out.append(pid)
    return out


def _one_degree_set(corpus: Corpus, members: set[str], window) -> set[str]:
    """Members plus everyone who co-authored with one in the window."""
    reached = set(members)
    for pid in _window_pub_ids(corpus, window):
        ids = corpus.publications[pid].resolved_ids
        if any(rid in members for rid in ids):
            reached.update(ids)
    return reached


def _paper_stats(corpus: Corpus, pub_ids) -> dict:
    n = len(pub_ids)
    if n == 0:
        return {"n_papers": 0, "avg_authors": 0.0, "avg_resolved_authors": 0.0,
                "pct_international": 0.0, "pct_single_institution": 0.0}
    total_authors = total_resolved = international = single_inst = 0
    for pid in pub_ids:
        pub = corpus.publications[pid]
        total_authors += len(pub.authorships)
        total_resolved += len(pub.resolved_ids)
        countries = {a.country for a in pub.authorships if a.country}
        if len(countries) >= 2:
            international += 1
        institutions = {a.institution_id for a in pub.authorships if a.institution_id}
        if len(institutions) == 1:
            single_inst += 1
    return {
        "n_papers": n,
        "avg_authors": total_authors / n,
        "avg_resolved_authors": total_resolved / n,
        "pct_international": 100.0 * international / n,
        "pct_single_institution": 100.0 * single_inst / n,
    }


@dataclass
class OverlapReport:
    window: tuple[int, int]
    flaglist_name: str
    n_flagged_eligible: int
    pct_direct: float
    pct_one_degree: float
    pct_researchers_direct: float
    pct_researchers_connected: float
    matched_stats: dict = field(default_factory=dict)
    unmatched_stats: dict = field(default_factory=dict)


def flaglist_overlap(corpus: Corpus, cohorts, flaglist, window) -> OverlapReport:
    """Overlap between a flagged-paper list and the suspicious cohort."""
    members = cohort_members(cohorts)
    window_pubs = _window_pub_ids(corpus, window)
    flagged = sorted(flaglist.pub_ids.intersection(window_pubs))
    if not flagged:
        raise DataError(
            f"flag list {flaglist.name}: no eligible flagged papers in window {window}")

    one_degree = _one_degree_set(corpus, members, window)
    direct_papers, onedeg_papers = [], []
    flagged_authors: set[str] = set()
    for pid in flagged:
        ids = corpus.publications[pid].resolved_ids
        flagged_authors.update(ids)
        if any(rid in members for rid in ids):
            direct_papers.append(pid)
        if any(rid in one_degree for rid in ids):
            onedeg_papers.append(pid)

    # Researcher-side coverage: cohort members who authored a flagged paper,
    # or who co-authored in the window with someone who did.
    direct_members = members & flagged_authors
    connected_members = set(direct_members)
    for pid in window_pubs:
        ids = corpus.publications[pid].resolved_ids
        if any(rid in flagged_authors for rid in ids):
            connected_members.update(rid for rid in ids if rid in members)

    n_flagged = len(flagged)
    n_members = len(members)
    direct_set = set(direct_papers)
    return OverlapReport(
        window=tuple(window),
        flaglist_name=flaglist.name,
        n_flagged_eligible=n_flagged,
        pct_direct=100.0 * len(direct_papers) / n_flagged,
        pct_one_degree=100.0 * len(onedeg_papers) / n_flagged,
        pct_researchers_direct=100.0 * len(direct_members) / n_members if n_members else 0.0,
        pct_researchers_connected=100.0 * len(connected_members) / n_members if n_members else 0.0,
        matched_stats=_paper_stats(corpus, [p for p in flagged if p in direct_set]),
        unmatched_stats=_paper_stats(corpus, [p for p in flagged if p not in direct_set]),
    )


def random_publication_baseline(corpus: Corpus, cohorts, set_size: int, window,
                                n_samples: int, seed: int) -> dict:
    """Flag-list headline metrics over random publication sets of equal size."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    members = cohort_members(cohorts)
    population = _window_pub_ids(corpus, window)
    if len(population) < set_size:
        raise DataError(
            f"only {len(population)} eligible publications in window, need {set_size}")
    one_degree = _one_degree_set(corpus, members, window)
    has_direct, has_onedeg = {}, {}
    for pid in population:
        ids = corpus.publications[pid].resolved_ids
        has_direct[pid] = any(rid in members for rid in ids)
        has_onedeg[pid] = any(rid in one_degree for rid in ids)

    direct_pcts, onedeg_pcts = [], []
    for i in range(n_samples):
        rng = random.Random(_subseed(seed, i))
        sample = rng.sample(population, set_size)
        direct_pcts.append(100.0 * sum(has_direct[p] for p in sample) / set_size)
        onedeg_pcts.append(100.0 * sum(has_onedeg[p] for p in sample) / set_size)
    return {
        "set_size": set_size,
        "n_samples": n_samples,
        "seed": seed,
        "mean_pct_direct": statistics.fmean(direct_pcts),
        "sd_pct_direct": statistics.pstdev(direct_pcts),
        "mean_pct_one_degree": statistics.fmean(onedeg_pcts),
        "sd_pct_one_degree": statistics.pstdev(onedeg_pcts),
    }


def retraction_overlap(corpus: Corpus, cohorts, flaglist, window) -> float:
    """Share (percent) of retraction-flagged papers with a cohort author."""
    return flaglist_overlap(corpus, cohorts, flaglist, window).pct_direct


def citation_cartel_score(corpus: Corpus, flagged: set[str]) -> float:
    """Fraction of citations into the flagged set that come from flagged papers."""
    in_edges = flagged_sources = 0
    for pub in corpus.publications.values():
        if not pub.cited_pub_ids:
            continue
        src_flagged = pub.pub_id in flagged
        for cited in pub.cited_pub_ids:
            if cited in flagged:
                in_edges += 1
                if src_flagged:
                    flagged_sources += 1
    if in_edges == 0:
        raise DataError("no citations into the flagged set: score undefined")
    return flagged_sources / in_edges


def peer_review_overlap(reviews, corpus: Corpus, cohorts, window,
                        min_reviews: int = 250, stages: frozenset = frozenset({1, 2}),
                        journal_min_pubs_per_year: int = 50,
                        journal_ratio_flag: float = 0.5) -> dict:
    """High-volume young peer reviewers and their proximity to the cohort.

    Keeps Stage I/II researchers whose summed review count over the window
    strictly exceeds `min_reviews` (stage taken at the window's last year).
    """
    if not reviews:
        raise DataError("no peer review records supplied")
    members = cohort_members(cohorts)
    y0, y1 = window
    totals: dict[str, int] = {}
    journal_reviews: dict[str, int] = {}
    for rec in reviews:
        if not y0 <= rec.year <= y1:
            continue
        totals[rec.researcher_id] = totals.get(rec.researcher_id, 0) + rec.review_count
        if rec.journal_id:
            journal_reviews[rec.journal_id] = \
                journal_reviews.get(rec.journal_id, 0) + rec.review_count

    high = []
    for rid, total in sorted(totals.items()):
        profile = corpus.profiles.get(rid)
        if profile is None or total <= min_reviews:
            continue
        age = publication_age(profile, y1) if profile.first_pub_year <= y1 else 0
        if career_stage(min(age, 100)).stage in stages:
            high.append(rid)

    one_degree = _one_degree_set(corpus, members, window)
    in_cohort = [rid for rid in high if rid in members]
    coauthored = [rid for rid in high
                  if rid not in members and rid in one_degree]
    matched = set(in_cohort) | set(coauthored)
    reviews_matched = sum(totals[rid] for rid in high if rid in matched)
    reviews_unmatched = sum(totals[rid] for rid in high if rid not in matched)

    # Journal-level review load: reviews per eligible publication, for
    # journals above the yearly volume floor.
    n_years = y1 - y0 + 1
    journal_pubs: dict[str, int] = {}
    for pid in _window_pub_ids(corpus, window):
        jid = corpus.publications[pid].journal_id
        journal_pubs[jid] = journal_pubs.get(jid, 0) + 1
    journal_ratios = []
    for jid in sorted(journal_reviews):
        pubs = journal_pubs.get(jid, 0)
        if pubs > journal_min_pubs_per_year * n_years:
            ratio = journal_reviews[jid] / pubs
            journal_ratios.append({
                "journal_id": jid,
                "reviews": journal_reviews[jid],
                "publications": pubs,
                "ratio": ratio,
                "flagged": ratio > journal_ratio_flag,
            })

    n_high = len(high)
    return {
        "window": list(window),
        "min_reviews": min_reviews,
        "n_high_reviewers": n_high,
        "pct_in_cohort": 100.0 * len(in_cohort) / n_high if n_high else 0.0,
        "pct_coauthored_with_cohort": 100.0 * len(coauthored) / n_high if n_high else 0.0,
        "reviews_matched": reviews_matched,
        "reviews_unmatched": reviews_unmatched,
        "high_reviewers": high,
        "journal_ratios": journal_ratios,
    }
