"""Null-model baselines, overlap validation and peer-review proximity."""

import pytest

from millnet.analysis import (citation_cartel_score, flaglist_overlap,
                              graph_density, null_density_baseline,
                              peer_review_overlap,
                              random_publication_baseline,
                              retraction_overlap)
from millnet.corpus import FlagList, PeerReviewRecord
from millnet.detector import DetectorParams, SuspiciousCohort, suspicious_cohort
from millnet.errors import DataError
from millnet.graph import CoauthorGraph

from conftest import build_corpus, paper

PARAMS = DetectorParams()


def cohort_of(members, year=2020, window=(2020, 2021)):
    """Minimal cohort where every candidate made the main component."""
    return SuspiciousCohort(year, window, set(members), set(members),
                            [len(members)])


# -- density -------------------------------------------------------------------

def test_graph_density_of_triangle_and_path():
    g = CoauthorGraph((0, 0))
    g.add_paper(["a", "b", "c"])
    assert graph_density(g) == 1.0
    g2 = CoauthorGraph((0, 0))
    g2.add_paper(["a", "b"])
    g2.add_paper(["b", "c"])
    assert g2.n_edges() == 2
    assert graph_density(g2) == pytest.approx(2 / 3)


def test_graph_density_needs_two_nodes():
    g = CoauthorGraph((0, 0))
    g.add_node("a")
    with pytest.raises(ValueError):
        graph_density(g)


# -- null model ------------------------------------------------------------------

def _null(corpus, cohort, seed, **kw):
    return null_density_baseline(corpus, 2014, cohort, n_samples=20,
                                 seed=seed, **kw)


def test_null_model_reproducible_and_seed_sensitive(small_synth):
    corpus, _, _, _ = small_synth
    cohort = suspicious_cohort(corpus, 2014, PARAMS)
    a = _null(corpus, cohort, seed=3)
    b = _null(corpus, cohort, seed=3)
    c = _null(corpus, cohort, seed=4)
    assert a.densities == b.densities
    assert a.lcc_ratios == b.lcc_ratios
    assert a.densities != c.densities


def test_null_pool_excludes_cohort_candidates(small_synth):
    """Baseline samples never contain the researchers being scored."""
    corpus, truth, _, _ = small_synth
    cohort = suspicious_cohort(corpus, 2014, PARAMS)
    result = _null(corpus, cohort, seed=3)
    assert result.sample_size == len(cohort.candidates)
    assert result.pool_size >= result.sample_size
    # the observed cohort is denser and less connected than prolific
    # low-clustering organic researchers
    assert result.observed_density > result.mean_density
    assert result.observed_lcc_ratio < result.mean_lcc_ratio


def test_null_model_rejects_undersized_pool():
    records = [paper(f"p{i}", 2014, [f"a{i}", f"b{i}"]) for i in range(4)]
    records.append(paper("q", 2015, ["a0"]))
    corpus = build_corpus(records)
    cohort = cohort_of(["a0", "a1", "a2"], 2014, (2014, 2015))
    with pytest.raises(DataError, match="pool"):
        null_density_baseline(corpus, 2014, cohort, n_samples=5, seed=1)


def test_null_model_inverted_pool(small_synth):
    """The high-clustering variant samples a different population."""
    corpus, _, _, _ = small_synth
    full = suspicious_cohort(corpus, 2014, PARAMS)
    # a small sub-cohort keeps both pool variants feasible
    members = sorted(full.candidates)[:10]
    cohort = SuspiciousCohort(2014, full.window, set(members),
                              set(members), [len(members)])
    low = _null(corpus, cohort, seed=3, c_max=0.4, min_pubs=5)
    high = _null(corpus, cohort, seed=3, c_max=0.4, min_pubs=5, invert_c=True)
    assert low.pool_size != high.pool_size
    assert low.densities != high.densities


# -- flag-list overlap -------------------------------------------------------------

def overlap_fixture():
    """Four flagged papers: two by the cohort, one by a direct co-author,
    one disconnected."""
    records = [
        paper("f1", 2020, ["m1", "m2"]),
        paper("f2", 2020, ["m2", "x1"]),
        paper("f3", 2020, ["x1", "x2"]),      # x1 co-authored with m2
        paper("f4", 2020, ["z1", "z2"]),      # no link at all
        paper("g1", 2021, ["m1", "other"]),
        paper("old", 2010, ["m1", "m2"]),     # outside window
    ]
    corpus = build_corpus(records)
    flags = FlagList("fixture", "tortured_phrase",
                     {"f1", "f2", "f3", "f4", "old"})
    cohort = cohort_of(["m1", "m2"])
    return corpus, flags, cohort


def test_overlap_direct_and_one_degree_counts():
    corpus, flags, cohort = overlap_fixture()
    report = flaglist_overlap(corpus, [cohort], flags, (2020, 2021))
    assert report.n_flagged_eligible == 4      # 'old' falls outside the window
    assert report.pct_direct == pytest.approx(50.0)
    assert report.pct_one_degree == pytest.approx(75.0)
    assert report.pct_direct <= report.pct_one_degree
    assert report.pct_researchers_direct == pytest.approx(100.0)


def test_overlap_requires_flags_in_window():
    corpus, flags, cohort = overlap_fixture()
    with pytest.raises(DataError):
        flaglist_overlap(corpus, [cohort],
                         FlagList("far", "tortured_phrase", {"old"}),
                         (2020, 2021))


def test_matched_and_unmatched_paper_stats():
    corpus, flags, cohort = overlap_fixture()
    report = flaglist_overlap(corpus, [cohort], flags, (2020, 2021))
    assert report.matched_stats["avg_authors"] == pytest.approx(2.0)
    assert report.unmatched_stats["avg_authors"] == pytest.approx(2.0)


def test_retraction_overlap_is_direct_share():
    corpus, flags, cohort = overlap_fixture()
    assert retraction_overlap(corpus, [cohort], flags, (2020, 2021)) \
        == pytest.approx(50.0)


def test_random_baseline_reproducible(small_synth):
    corpus, _, flags, _ = small_synth
    cohort = suspicious_cohort(corpus, 2014, PARAMS)
    a = random_publication_baseline(corpus, [cohort], 200, (2014, 2015), 10, 7)
    b = random_publication_baseline(corpus, [cohort], 200, (2014, 2015), 10, 7)
    assert a == b
    assert a["mean_pct_direct"] <= a["mean_pct_one_degree"]


def test_flagged_overlap_dominates_random_sets(small_synth):
    """Mill-heavy flag lists touch the cohort far more than random sets."""
    corpus, _, flags, _ = small_synth
    cohort = suspicious_cohort(corpus, 2014, PARAMS)
    report = flaglist_overlap(corpus, [cohort], flags, (2014, 2015))
    base = random_publication_baseline(
        corpus, [cohort], report.n_flagged_eligible, (2014, 2015), 20, 7)
    assert report.pct_direct > base["mean_pct_direct"]
    assert report.pct_direct <= report.pct_one_degree


# -- citations ---------------------------------------------------------------------

def test_citation_cartel_score_counts_in_edges():
    records = [
        paper("t1", 2020, ["a"]),
        paper("t2", 2020, ["b"]),
        paper("s1", 2021, ["c"], cited=["t1", "t2"]),       # outside sources
        paper("s2", 2021, ["d"], cited=["t1", "zz"]),       # zz: unknown target
    ]
    corpus = build_corpus(records)
    # make s1 itself flagged: its two citations become intra-set
    assert citation_cartel_score(corpus, {"t1", "t2", "s1"}) \
        == pytest.approx(2 / 3)
    assert citation_cartel_score(corpus, {"t1"}) == pytest.approx(0.0)


def test_citation_cartel_score_needs_in_edges():
    corpus = build_corpus([paper("t1", 2020, ["a"])])
    with pytest.raises(DataError):
        citation_cartel_score(corpus, {"t1"})


# -- peer review --------------------------------------------------------------------

def review_fixture():
    records = [
        paper("p1", 2020, ["m1", "m2"]),
        paper("p2", 2020, ["m2", "near"]),
        paper("p3", 2020, ["far1", "far2"]),
        paper("anchor", 1990, ["vet"]),
        paper("p4", 2020, ["vet", "x"]),
    ]
    corpus = build_corpus(records)
    cohort = cohort_of(["m1", "m2"], window=(2020, 2020))
    reviews = [
        PeerReviewRecord("m1", 2020, 251, "j1"),     # member, over threshold
        PeerReviewRecord("near", 2020, 300, "j1"),   # co-author of a member
        PeerReviewRecord("far1", 2020, 250, "j1"),   # exactly at threshold: out
        PeerReviewRecord("vet", 2020, 400, "j1"),    # Stage VII: out
        PeerReviewRecord("x", 2019, 9999, "j1"),     # outside window: out
    ]
    return corpus, cohort, reviews


def test_high_reviewer_selection_is_strict_and_young():
    corpus, cohort, reviews = review_fixture()
    result = peer_review_overlap(reviews, corpus, [cohort], (2020, 2020))
    assert result["high_reviewers"] == ["m1", "near"]
    assert result["pct_in_cohort"] == pytest.approx(50.0)
    assert result["pct_coauthored_with_cohort"] == pytest.approx(50.0)
    assert result["reviews_matched"] == 551
    assert result["reviews_unmatched"] == 0


def test_journal_review_ratio_flagging():
    corpus, cohort, reviews = review_fixture()
    result = peer_review_overlap(reviews, corpus, [cohort], (2020, 2020),
                                 journal_min_pubs_per_year=0)
    (ratio_row,) = result["journal_ratios"]
    assert ratio_row["journal_id"] == "j1"
    assert ratio_row["publications"] == 4
    assert ratio_row["ratio"] > 0.5
    assert ratio_row["flagged"]


def test_peer_review_requires_records(small_synth):
    corpus, _, _, _ = small_synth
    cohort = suspicious_cohort(corpus, 2014, PARAMS)
    with pytest.raises(DataError):
        peer_review_overlap([], corpus, [cohort], (2013, 2015))


def test_mill_reviewers_sit_near_the_cohort(small_synth):
    corpus, truth, _, reviews = small_synth
    cohort = suspicious_cohort(corpus, 2014, PARAMS)
    result = peer_review_overlap(reviews, corpus, [cohort],
                                 (2013, 2015))
    assert result["n_high_reviewers"] > 0
    near = result["pct_in_cohort"] + result["pct_coauthored_with_cohort"]
    assert near > 50.0
