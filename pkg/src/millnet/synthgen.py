"""Labeled synthetic corpora: an organic mentorship-structured research
network plus an injected authorship-for-sale network.

Organic papers are written by persistent lab groups (new researchers attach
to a mentor and the mentor's lab), which yields dense egocentric networks.
Mill papers draw their authors by random collision from a pool of one-year
customers plus reused foundation authors, which yields sparse, rare ego
shapes with high per-year volume. A configurable slice of customers goes to
an independent secondary mill so the candidate graph is not one single
component. Everything is deterministic under the seed.
"""

from __future__ import annotations

import bisect
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import (Authorship, Corpus, FlagList, PeerReviewRecord,
                     PublicationRecord)
from .detector import SuspiciousCohort
from .errors import DataError


def _poisson(rng: random.Random, lam: float) -> int:
    """Knuth's method; fine for the small rates used here."""
    if lam <= 0:
        return 0
    limit = math.exp(-lam)
    k, p = 0, 1.0
    while True:
        p *= rng.random()
        if p <= limit:
            return k
        k += 1


def _schedule_value(schedule, year: int) -> int:
    """A schedule is either a constant or a {year: count} mapping."""
    if isinstance(schedule, dict):
        return int(schedule.get(year, schedule.get(str(year), 0)))
    return int(schedule)


@dataclass
class OrganicConfig:
    new_researchers_per_year: object = 3000       # int or {year: int}
    warmup_researchers_per_year: int = 700        # used before warmup_until
    warmup_until: int = 2009
    mentor_attach_probability: float = 0.7
    mentor_age_range: tuple = (10, 25)
    team_size_mean: float = 2.6
    lead_rate_by_stage: dict = field(default_factory=lambda: {
        1: 0.45, 2: 0.6, 3: 0.65, 4: 0.65, 5: 0.6, 6: 0.5, 7: 0.4, 8: 0.3})
    dropout_rate: float = 0.12
    dropout_from_age: int = 3
    lab_split_age: int = 12
    lab_split_probability: float = 0.3
    hubs_per_year: int = 70                        # cross-lab prolific attachers
    hub_min_age: int = 10
    hub_attachments_per_year: int = 21
    countries: list = field(default_factory=lambda: [
        ("AA", 0.4), ("BB", 0.3), ("CC", 0.2), ("DD", 0.1)])
    institutions_per_country: int = 6
    journals_per_lab: int = 3
    n_journals: int = 240
    n_publishers: int = 7
    reviewer_fraction: float = 0.01
    reviews_per_organic_reviewer: float = 12.0


@dataclass
class MillConfig:
    start_year: int = 2018
    customers_per_year: object = field(default_factory=lambda: {
        2018: 80, 2019: 140, 2020: 220, 2021: 300, 2022: 380, 2023: 380})
    papers_per_customer: int = 25
    authors_per_paper_mean: float = 5.5
    foundation_author_count: int = 8
    foundation_reuse_probability: float = 0.65
    n_journals: int = 10
    publisher_id: str = "pub_mill"
    secondary_pool_fraction: float = 0.12          # independent sub-mill share
    intra_mill_citation_probability: float = 0.8
    citations_per_mill_paper_mean: float = 2.0
    mill_reviewer_count: int = 12
    reviews_per_reviewer_year: float = 115.0
    reviewer_span_years: int = 3
    customer_countries: list = field(default_factory=lambda: [
        ("EE", 0.6), ("AA", 0.25), ("CC", 0.15)])


@dataclass
class SynthConfig:
    seed: int = 20240101
    years: tuple = (1996, 2023)
    organic: OrganicConfig = field(default_factory=OrganicConfig)
    mill: MillConfig = field(default_factory=MillConfig)
    flag_fraction: float = 0.3

    def __post_init__(self):
        if self.years[0] > self.years[1]:
            raise ValueError("years range is empty")
        if not 0.0 <= self.flag_fraction <= 1.0:
            raise ValueError("flag_fraction must lie in [0, 1]")
        if self.mill.start_year < self.years[0] or self.mill.start_year > self.years[1]:
            raise ValueError("mill.start_year outside corpus years")

    @classmethod
    def from_dict(cls, data: dict) -> "SynthConfig":
        data = dict(data)
        organic = OrganicConfig(**data.pop("organic", {}))
        mill = MillConfig(**data.pop("mill", {}))
        years = data.pop("years", (1996, 2023))
        return cls(organic=organic, mill=mill, years=tuple(years), **data)


@dataclass
class GroundTruth:
    mill_researchers: set[str]
    mill_papers: set[str]
    foundation_authors: set[str]
    mill_reviewers: set[str]


@dataclass
class _Researcher:
    rid: str
    first_year: int                  # creation year
    lab: int
    mentor: str | None
    country: str
    institution: str
    active: bool = True
    is_hub: bool = False
    first_paper_year: int | None = None   # publication age starts here


class _Generator:
    def __init__(self, config: SynthConfig):
        self.cfg = config
        self.rng = random.Random(config.seed)
        self.researchers: dict[str, _Researcher] = {}
        self.labs: dict[int, list[str]] = {}
        self.lab_meta: dict[int, dict] = {}
        self.active: list[str] = []
        self.hubs: list[str] = []
        self.records: list[PublicationRecord] = []
        self.reviews: list[PeerReviewRecord] = []
        self.n_labs = 0
        self.pub_counter = 0
        self.papers_by_year: dict[int, list[int]] = {}   # indexes into records
        # Mill state
        self.mill_papers: list[str] = []
        self.mill_customers: set[str] = set()
        self.foundation: dict[str, list[str]] = {}       # pool -> foundation ids
        self.mill_journals: dict[str, list[str]] = {}    # pool -> journal ids
        self.mill_reviewers: set[str] = set()
        self._setup_catalog()

    # -- world setup --------------------------------------------------------

    def _setup_catalog(self):
        org = self.cfg.organic
        self.publishers = [f"pub_{i:02d}" for i in range(org.n_publishers)]
        self.journals = {}
        for j in range(org.n_journals):
            jid = f"j_{j:03d}"
            self.journals[jid] = self.publishers[j % len(self.publishers)]
        mill = self.cfg.mill
        for pool in ("main", "cell"):
            ids = [f"j_mill_{pool}_{i:02d}" for i in range(mill.n_journals)]
            for jid in ids:
                self.journals[jid] = mill.publisher_id
            self.mill_journals[pool] = ids

    def _pick_country(self, weighted):
        codes = [c for c, _ in weighted]
        weights = [w for _, w in weighted]
        return self.rng.choices(codes, weights=weights, k=1)[0]

    def _pick_institution(self, country: str) -> str:
        n = self.cfg.organic.institutions_per_country
        weights = [1.0 / (i + 1) for i in range(n)]
        idx = self.rng.choices(range(n), weights=weights, k=1)[0]
        return f"inst_{country}_{idx}"

    def _new_lab(self, country=None, institution=None) -> int:
        lab = self.n_labs
        self.n_labs += 1
        country = country or self._pick_country(self.cfg.organic.countries)
        institution = institution or self._pick_institution(country)
        journals = self.rng.sample(sorted(j for j in self.journals
                                          if j.startswith("j_")
                                          and "mill" not in j),
                                   self.cfg.organic.journals_per_lab)
        self.labs[lab] = []
        self.lab_meta[lab] = {"country": country, "institution": institution,
                              "journals": journals}
        return lab

    def _new_researcher(self, year: int, prefix: str, lab: int,
                        mentor: str | None, country: str, institution: str):
        rid = f"{prefix}{len(self.researchers):06d}"
        r = _Researcher(rid, year, lab, mentor, country, institution)
        self.researchers[rid] = r
        if lab >= 0:
            self.labs[lab].append(rid)
        self.active.append(rid)
        return r

    def _emit_paper(self, year, doc_type, journal_id, member_ids) -> PublicationRecord:
        self.pub_counter += 1
        pid = f"p{self.pub_counter:07d}"
        authorships = []
        for rid in member_ids:
            r = self.researchers[rid]
            if r.first_paper_year is None or year < r.first_paper_year:
                r.first_paper_year = year
            authorships.append(Authorship(rid, r.institution, r.country))
        rec = PublicationRecord(pid, year, doc_type, journal_id,
                                self.journals[journal_id], authorships)
        self.records.append(rec)
        return rec

    # -- organic dynamics ----------------------------------------------------

    def _organic_intake(self, year: int):
        org = self.cfg.organic
        if year <= org.warmup_until:
            n_new = org.warmup_researchers_per_year
        else:
            n_new = _schedule_value(org.new_researchers_per_year, year)
        lo, hi = org.mentor_age_range
        mentors = [rid for rid in self.active
                   if not self.researchers[rid].is_hub
                   and self.researchers[rid].lab >= 0
                   and self.researchers[rid].first_paper_year is not None
                   and lo <= year - self.researchers[rid].first_paper_year <= hi]
        for _ in range(n_new):
            if mentors:
                mentor = self.rng.choice(mentors)
                m = self.researchers[mentor]
                self._new_researcher(year, "r", m.lab, mentor,
                                     m.country, m.institution)
            else:
                lab = self._new_lab()
                meta = self.lab_meta[lab]
                self._new_researcher(year, "r", lab, None,
                                     meta["country"], meta["institution"])

    def _lab_splits(self, year: int):
        org = self.cfg.organic
        for rid in self.active:
            r = self.researchers[rid]
            if r.is_hub or r.mentor is None or r.lab < 0:
                continue
            if (year - r.first_year >= org.lab_split_age
                    and self.rng.random() < org.lab_split_probability):
                old = self.lab_meta[r.lab]
                self.labs[r.lab].remove(rid)
                lab = self._new_lab(old["country"],
                                    self._pick_institution(old["country"]))
                self.labs[lab].append(rid)
                r.lab = lab
                r.mentor = None

    def _promote_hubs(self, year: int):
        org = self.cfg.organic
        eligible = [rid for rid in self.active
                    if not self.researchers[rid].is_hub
                    and self.researchers[rid].lab >= 0
                    and self.researchers[rid].first_paper_year is not None
                    and year - self.researchers[rid].first_paper_year >= org.hub_min_age]
        for rid in self.rng.sample(eligible, min(org.hubs_per_year, len(eligible))):
            self.researchers[rid].is_hub = True
            self.hubs.append(rid)

    def _team_for(self, rid: str, year: int) -> list[str]:
        org = self.cfg.organic
        r = self.researchers[rid]
        size = 1 + _poisson(self.rng, org.team_size_mean - 1.0)
        team = [rid]
        if (r.mentor and self.researchers[r.mentor].active
                and year - r.first_year <= 6
                and self.rng.random() < org.mentor_attach_probability):
            team.append(r.mentor)
        labmates = [x for x in self.labs.get(r.lab, ())
                    if x not in team and self.researchers[x].active]
        need = min(size - len(team), len(labmates))
        if need > 0:
            team.extend(self.rng.sample(labmates, need))
        return team[:20]

    def _organic_papers(self, year: int):
        org = self.cfg.organic
        papers = []
        for rid in list(self.active):
            r = self.researchers[rid]
            if r.is_hub or r.lab < 0:
                continue
            age = year - r.first_year
            stage = min(age // 5 + 1, 8)
            rate = org.lead_rate_by_stage.get(stage, 0.5)
            for _ in range(_poisson(self.rng, rate)):
                team = self._team_for(rid, year)
                meta = self.lab_meta[r.lab]
                jid = self.rng.choice(meta["journals"])
                rec = self._emit_paper(year, "research_article", jid, team)
                papers.append(len(self.records) - 1)
        # Hubs attach across labs: prolific, weakly clustered profiles.
        for hub in self.hubs:
            if not self.researchers[hub].active or not papers:
                continue
            n_attach = org.hub_attachments_per_year + _poisson(self.rng, 2.0)
            for idx in self.rng.sample(papers, min(n_attach, len(papers))):
                rec = self.records[idx]
                ids = {a.researcher_id for a in rec.authorships}
                if hub in ids or len(rec.authorships) >= 20:
                    continue
                h = self.researchers[hub]
                if h.first_paper_year is None or year < h.first_paper_year:
                    h.first_paper_year = year
                rec.authorships.append(Authorship(hub, h.institution, h.country))
        self.papers_by_year.setdefault(year, []).extend(papers)

    def _dropout(self, year: int):
        org = self.cfg.organic
        survivors = []
        for rid in self.active:
            r = self.researchers[rid]
            if (year - r.first_year >= org.dropout_from_age
                    and self.rng.random() < org.dropout_rate):
                r.active = False
                if r.lab in self.labs and rid in self.labs[r.lab]:
                    self.labs[r.lab].remove(rid)
            else:
                survivors.append(rid)
        self.active = survivors

    # -- mill dynamics -------------------------------------------------------

    def _ensure_foundation(self, pool: str, year: int):
        mill = self.cfg.mill
        if pool in self.foundation:
            return
        count = mill.foundation_author_count if pool == "main" \
            else max(2, mill.foundation_author_count // 4)
        ids = []
        for _ in range(count):
            country = self._pick_country(mill.customer_countries)
            r = self._new_researcher(year, f"f_{pool}_", -1, None,
                                     country, self._pick_institution(country))
            ids.append(r.rid)
        self.foundation[pool] = ids

    def _mill_pool_papers(self, year: int, pool: str, customers: list[str],
                          truth_papers: list[str]):
        mill = self.cfg.mill
        self._ensure_foundation(pool, year)
        foundation = self.foundation[pool]
        journals = self.mill_journals[pool]
        # Round-robin assignment of a resident foundation author per journal.
        journal_foundation = {jid: foundation[i % len(foundation)]
                              for i, jid in enumerate(journals)}
        slots = [rid for rid in customers for _ in range(mill.papers_per_customer)]
        self.rng.shuffle(slots)
        base_mean = max(mill.authors_per_paper_mean
                        - mill.foundation_reuse_probability, 1.5)
        pos = 0
        while pos < len(slots):
            size = max(2, 1 + _poisson(self.rng, base_mean - 1.0))
            team, scan = [], pos
            while scan < len(slots) and len(team) < size:
                if slots[scan] not in team:
                    team.append(slots[scan])
                    slots[pos], slots[scan] = slots[scan], slots[pos]
                    pos += 1
                scan += 1
            if not team:
                break
            jid = self.rng.choice(journals)
            if (self.rng.random() < mill.foundation_reuse_probability
                    and journal_foundation[jid] not in team):
                team.append(journal_foundation[jid])
            rec = self._emit_paper(year, "research_article", jid, team)
            truth_papers.append(rec.pub_id)
            self.papers_by_year.setdefault(year, []).append(len(self.records) - 1)

    def _mill_year(self, year: int, truth_papers: list[str]):
        mill = self.cfg.mill
        n = _schedule_value(mill.customers_per_year, year)
        if n <= 0:
            return
        n_cell = int(round(n * mill.secondary_pool_fraction))
        pools = {"main": n - n_cell, "cell": n_cell}
        new_reviewers = []
        for pool in ("main", "cell"):
            count = pools[pool]
            if count <= 0:
                continue
            customers = []
            for _ in range(count):
                country = self._pick_country(mill.customer_countries)
                r = self._new_researcher(year, f"m_{pool}_", -1, None,
                                         country, self._pick_institution(country))
                customers.append(r.rid)
                self.mill_customers.add(r.rid)
            self._mill_pool_papers(year, pool, customers, truth_papers)
            if pool == "main":
                k = min(mill.mill_reviewer_count, len(customers))
                new_reviewers = self.rng.sample(customers, k)
        # Complicit reviewers review the mill journals for a few years.
        last = self.cfg.years[1]
        for rid in new_reviewers:
            self.mill_reviewers.add(rid)
            for offset in range(mill.reviewer_span_years):
                ryear = year + offset
                if ryear > last:
                    break
                jid = self.rng.choice(self.mill_journals["main"])
                count = _poisson(self.rng, mill.reviews_per_reviewer_year)
                self.reviews.append(PeerReviewRecord(rid, ryear, count, jid))

    def _organic_reviews(self, year: int):
        org = self.cfg.organic
        organic_active = [rid for rid in self.active
                          if self.researchers[rid].lab >= 0]
        k = int(len(organic_active) * org.reviewer_fraction)
        for rid in self.rng.sample(organic_active, k):
            r = self.researchers[rid]
            jid = self.rng.choice(self.lab_meta[r.lab]["journals"])
            count = _poisson(self.rng, org.reviews_per_organic_reviewer)
            if count:
                self.reviews.append(PeerReviewRecord(rid, year, count, jid))

    def _mill_citations(self, mill_paper_ids: list[str]):
        """Citations into mill papers: mostly from other mill papers."""
        mill = self.cfg.mill
        mill_set = set(mill_paper_ids)
        by_id = {rec.pub_id: rec for rec in self.records}
        # Sources are drawn from papers no older than the cited target, so the
        # configured intra-mill probability survives into the emitted edges.
        organic_sorted = sorted(
            ((rec.year, rec.pub_id) for rec in self.records
             if rec.pub_id not in mill_set))
        mill_by_year = sorted((by_id[pid].year, pid) for pid in mill_paper_ids)
        for tyear, target in mill_by_year:
            org_lo = bisect.bisect_left(organic_sorted, (tyear, ""))
            mill_lo = bisect.bisect_left(mill_by_year, (tyear, ""))
            for _ in range(_poisson(self.rng, mill.citations_per_mill_paper_mean)):
                if self.rng.random() < mill.intra_mill_citation_probability:
                    if mill_lo >= len(mill_by_year):
                        continue
                    source = mill_by_year[self.rng.randrange(mill_lo, len(mill_by_year))][1]
                else:
                    if org_lo >= len(organic_sorted):
                        continue
                    source = organic_sorted[self.rng.randrange(org_lo, len(organic_sorted))][1]
                src = by_id[source]
                if src.pub_id == target:
                    continue
                if src.cited_pub_ids is None:
                    src.cited_pub_ids = []
                src.cited_pub_ids.append(target)

    # -- main loop -----------------------------------------------------------

    def run(self):
        cfg = self.cfg
        truth_papers: list[str] = []
        for year in range(cfg.years[0], cfg.years[1] + 1):
            self._organic_intake(year)
            self._lab_splits(year)
            self._promote_hubs(year)
            self._organic_papers(year)
            if year >= cfg.mill.start_year:
                self._mill_year(year, truth_papers)
            self._organic_reviews(year)
            self._dropout(year)
        self._mill_citations(truth_papers)

        flag_ids = set()
        if truth_papers and cfg.flag_fraction > 0:
            k = max(1, int(round(len(truth_papers) * cfg.flag_fraction)))
            flag_ids = set(self.rng.sample(sorted(truth_papers), k))
        flags = FlagList("synthetic_mill_flags", "tortured_phrase", flag_ids) \
            if flag_ids else None

        foundation_all = {rid for ids in self.foundation.values() for rid in ids}
        truth = GroundTruth(
            mill_researchers=set(self.mill_customers) | foundation_all,
            mill_papers=set(truth_papers),
            foundation_authors=foundation_all,
            mill_reviewers=set(self.mill_reviewers),
        )
        corpus = Corpus.from_records(self.records)
        return corpus, truth, flags, self.reviews


def generate(config: SynthConfig):
    """Generate (Corpus, GroundTruth, FlagList | None, peer review records)."""
    return _Generator(config).run()


def evaluate(corpus: Corpus, cohort: SuspiciousCohort, truth: GroundTruth,
             min_mill_papers: int = 20, use_lcc: bool = True) -> dict:
    """Precision/recall of a detected cohort against generator labels.

    Recall is taken over mill researchers with at least `min_mill_papers`
    mill papers in the cohort year; precision over the whole detected set.
    An empty detected set has precision 1 by convention (no false positives);
    an empty qualifying set has recall 1 (vacuous).
    """
    unknown = truth.mill_researchers - corpus.profiles.keys()
    if unknown:
        raise DataError(
            f"{len(unknown)} ground-truth researchers missing from corpus "
            "(corpora mismatch?)")
    detected = cohort.lcc_members if use_lcc else cohort.candidates
    counts: dict[str, int] = {}
    for pid in truth.mill_papers:
        pub = corpus.publications.get(pid)
        if pub is None or pub.year != cohort.year:
            continue
        for rid in pub.resolved_ids:
            if rid in truth.mill_researchers:
                counts[rid] = counts.get(rid, 0) + 1
    qualifying = {rid for rid, c in counts.items() if c >= min_mill_papers}
    tp = len(detected & truth.mill_researchers)
    precision = tp / len(detected) if detected else 1.0
    recall = len(detected & qualifying) / len(qualifying) if qualifying else 1.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return {
        "year": cohort.year,
        "min_mill_papers": min_mill_papers,
        "n_detected": len(detected),
        "n_qualifying": len(qualifying),
        "true_positives": tp,
        "precision": precision,
        "recall": recall,
        "f1": f1,
    }


# ---------------------------------------------------------------------------
# Serialisation of generated artifacts
# ---------------------------------------------------------------------------

def write_outputs(outdir, corpus: Corpus, truth: GroundTruth, flags,
                  reviews) -> dict:
    """Write corpus JSONL, flag CSV, review CSV and ground-truth JSON.

    Returns {artifact name: path}. Output is byte-stable under a fixed seed.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = {}

    pub_path = outdir / "publications.jsonl"
    with open(pub_path, "w", encoding="utf-8") as fh:
        for pid in sorted(corpus.publications):
            pub = corpus.publications[pid]
            obj = {
                "pub_id": pub.pub_id,
                "year": pub.year,
                "doc_type": pub.doc_type,
                "journal_id": pub.journal_id,
                "publisher_id": pub.publisher_id,
                "authors": [
                    {k: v for k, v in (("researcher_id", a.researcher_id),
                                       ("institution_id", a.institution_id),
                                       ("country", a.country)) if v}
                    for a in pub.authorships
                ],
            }
            if pub.cited_pub_ids:
                obj["cited_pub_ids"] = sorted(pub.cited_pub_ids)
            fh.write(json.dumps(obj, sort_keys=True) + "\n")
    paths["publications"] = pub_path

    if flags is not None:
        flag_path = outdir / "flags.csv"
        with open(flag_path, "w", encoding="utf-8", newline="") as fh:
            fh.write("pub_id,flag_type\n")
            for pid in sorted(flags.pub_ids):
                fh.write(f"{pid},{flags.flag_type}\n")
        paths["flags"] = flag_path

    review_path = outdir / "reviews.csv"
    with open(review_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("researcher_id,year,journal_id,review_count\n")
        for rec in sorted(reviews, key=lambda r: (r.researcher_id, r.year,
                                                  r.journal_id or "")):
            fh.write(f"{rec.researcher_id},{rec.year},"
                     f"{rec.journal_id or ''},{rec.review_count}\n")
    paths["reviews"] = review_path

    truth_path = outdir / "ground_truth.json"
    with open(truth_path, "w", encoding="utf-8") as fh:
        json.dump({
            "mill_researchers": sorted(truth.mill_researchers),
            "mill_papers": sorted(truth.mill_papers),
            "foundation_authors": sorted(truth.foundation_authors),
            "mill_reviewers": sorted(truth.mill_reviewers),
        }, fh, indent=1, sort_keys=True)
        fh.write("\n")
    paths["ground_truth"] = truth_path
    return paths


def load_ground_truth(path) -> GroundTruth:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return GroundTruth(
        mill_researchers=set(data["mill_researchers"]),
        mill_papers=set(data["mill_papers"]),
        foundation_authors=set(data["foundation_authors"]),
        mill_reviewers=set(data["mill_reviewers"]),
    )
