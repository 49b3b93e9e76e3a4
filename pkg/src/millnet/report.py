"""Exposure aggregation: publisher, journal, country and institution profiles.

"Implicated" at the publisher/journal/country level means direct authorship
by a cohort member; the broader one-degree measure is used only for
institutional review loads. Every row carries raw numerator and denominator
so percentages are recomputable downstream.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import Corpus, active_researchers, career_stage, publication_age
from .detector import SuspiciousCohort
from .analysis import _one_degree_set

JOURNAL_BANDS = ("[0,2)", "[2,4)", ">=4")


@dataclass
class ExposureRow:
    entity_kind: str
    entity_id: str
    year: int
    total_pubs: int
    implicated_pubs: int

    @property
    def pct_implicated(self) -> float:
        return 100.0 * self.implicated_pubs / self.total_pubs if self.total_pubs else 0.0


def _entity_exposure(corpus: Corpus, members: set[str], year: int, kind: str,
                     entity_of) -> list[ExposureRow]:
    totals: Counter = Counter()
    implicated: Counter = Counter()
    for pid in corpus.eligible_pub_ids(year):
        pub = corpus.publications[pid]
        entity = entity_of(pub)
        totals[entity] += 1
        if any(rid in members for rid in pub.resolved_ids):
            implicated[entity] += 1
    return [ExposureRow(kind, entity, year, totals[entity], implicated[entity])
            for entity in sorted(totals)]


def publisher_profile(corpus: Corpus, cohorts: dict[int, SuspiciousCohort],
                      years) -> list[ExposureRow]:
    """Per publisher-year counts over eligible publications."""
    rows = []
    for year in years:
        members = cohorts[year].lcc_members
        rows.extend(_entity_exposure(corpus, members, year, "publisher",
                                     lambda p: p.publisher_id))
    return rows


def journal_band(pct: float) -> str:
    if pct < 2.0:
        return JOURNAL_BANDS[0]
    if pct < 4.0:
        return JOURNAL_BANDS[1]
    return JOURNAL_BANDS[2]


def journal_exposure(corpus: Corpus, cohort: SuspiciousCohort, year: int,
                     min_pubs: int = 50):
    """Per-journal exposure rows plus the three-band histogram.

    Only journals with strictly more than `min_pubs` eligible publications in
    the year are assessed.
    """
    rows = [r for r in _entity_exposure(corpus, cohort.lcc_members, year,
                                        "journal", lambda p: p.journal_id)
            if r.total_pubs > min_pubs]
    histogram = {band: 0 for band in JOURNAL_BANDS}
    for r in rows:
        histogram[journal_band(r.pct_implicated)] += 1
    return rows, histogram


def _stage(corpus: Corpus, rid: str, year: int) -> int:
    age = publication_age(corpus.profiles[rid], year)
    return career_stage(min(age, 100)).stage


def country_profile(corpus: Corpus, cohort: SuspiciousCohort) -> list[dict]:
    """Cohort membership, workforce share and implicated articles by country."""
    year = cohort.year
    members = cohort.lcc_members
    if not members:
        return []

    by_country: dict[str, set[str]] = {}
    for rid in members:
        country = corpus.profiles[rid].latest_country or "unknown"
        by_country.setdefault(country, set()).add(rid)

    workforce: Counter = Counter()
    for rid in active_researchers(corpus, year):
        if _stage(corpus, rid, year) in (1, 2):
            workforce[corpus.profiles[rid].latest_country or "unknown"] += 1

    # Article exposure: an article belongs to every country that appears on
    # its author list; it is implicated once a cohort member authors it.
    art_totals: Counter = Counter()
    art_implicated: Counter = Counter()
    for pid in corpus.eligible_pub_ids(year):
        pub = corpus.publications[pid]
        countries = {a.country for a in pub.authorships if a.country}
        hit = any(rid in members for rid in pub.resolved_ids)
        for country in countries:
            art_totals[country] += 1
            if hit:
                art_implicated[country] += 1

    rows = []
    for country in sorted(by_country):
        cohort_set = by_country[country]
        institutions = {corpus.profiles[rid].latest_institution
                        for rid in cohort_set
                        if corpus.profiles[rid].latest_institution}
        n_workforce = workforce.get(country, 0)
        rows.append({
            "country": country,
            "year": year,
            "n_cohort_researchers": len(cohort_set),
            "n_stage12_workforce": n_workforce,
            "pct_of_stage12_workforce":
                100.0 * len(cohort_set) / n_workforce if n_workforce else 0.0,
            "total_articles": art_totals.get(country, 0),
            "implicated_articles": art_implicated.get(country, 0),
            "pct_articles_implicated":
                100.0 * art_implicated.get(country, 0) / art_totals[country]
                if art_totals.get(country) else 0.0,
            "n_institutions": len(institutions),
        })
    return rows


def institution_review_load(corpus: Corpus, cohort: SuspiciousCohort, year: int,
                            min_researchers: int = 3000) -> list[dict]:
    """Average cohort-connected researchers per large institution, by country.

    Institutions qualify with strictly more than `min_researchers` unique
    researchers publishing (eligible papers) under their affiliation in the
    year. "Connected" researchers are cohort members or their direct
    co-authors in the year.
    """
    populations: dict[str, set[str]] = {}
    inst_countries: dict[str, Counter] = {}
    for pid in corpus.eligible_pub_ids(year):
        pub = corpus.publications[pid]
        for a in pub.authorships:
            if a.researcher_id and a.institution_id:
                populations.setdefault(a.institution_id, set()).add(a.researcher_id)
                if a.country:
                    inst_countries.setdefault(a.institution_id, Counter())[a.country] += 1

    connected = _one_degree_set(corpus, cohort.lcc_members, (year, year))

    per_country: dict[str, list[tuple[int, int]]] = {}
    for inst in sorted(populations):
        pop = populations[inst]
        if len(pop) <= min_researchers:
            continue
        counts = inst_countries.get(inst)
        country = (min(c for c, n in counts.items() if n == max(counts.values()))
                   if counts else "unknown")
        linked = pop & connected
        junior = sum(1 for rid in linked if _stage(corpus, rid, year) in (1, 2))
        per_country.setdefault(country, []).append((len(linked), junior))

    rows = []
    for country in sorted(per_country):
        loads = per_country[country]
        rows.append({
            "country": country,
            "year": year,
            "n_institutions": len(loads),
            "avg_connected_per_institution": sum(c for c, _ in loads) / len(loads),
            "avg_junior_connected": sum(j for _, j in loads) / len(loads),
        })
    return rows
