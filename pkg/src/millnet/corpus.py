"""Publication corpus: data model, ingestion and researcher-level derivations.

A corpus is an immutable collection of publication records plus derived
per-researcher profiles (first/last publication year, per-year eligible
publication counts, latest affiliation). All downstream graph and detection
work reads from a completed corpus and never mutates it.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError

DOC_TYPES = ("research_article", "review", "other")
FLAG_TYPES = ("tortured_phrase", "clay_feet", "retraction_integrity", "other")

#: Maximum author count for a publication to enter any network computation.
MAX_ELIGIBLE_AUTHORS = 20

#: Career stage bands over publication age: (stage number, low, high), per
#: five-year increments with the final band absorbing ages 35-100.
CAREER_STAGE_BANDS = (
    (1, 0, 4),
    (2, 5, 9),
    (3, 10, 14),
    (4, 15, 19),
    (5, 20, 24),
    (6, 25, 29),
    (7, 30, 34),
    (8, 35, 100),
)

STAGE_LABELS = {1: "I", 2: "II", 3: "III", 4: "IV",
                5: "V", 6: "VI", 7: "VII", 8: "VIII"}


@dataclass(frozen=True)
class CareerStage:
    stage: int            # 1..8, rendered as roman numerals I..VIII
    age_low: int
    age_high: int

    @property
    def label(self) -> str:
        return STAGE_LABELS[self.stage]


_STAGES = tuple(CareerStage(s, lo, hi) for s, lo, hi in CAREER_STAGE_BANDS)


def career_stage(age: int) -> CareerStage:
    """Map a publication age in years onto its career stage band."""
    if not 0 <= age <= 100:
        raise ValueError(f"publication age {age} outside [0, 100]")
    for st in _STAGES:
        if st.age_low <= age <= st.age_high:
            return st
    raise AssertionError("stage bands must partition [0, 100]")


@dataclass(frozen=True)
class Authorship:
    researcher_id: str | None = None   # None = author not resolved to a profile
    institution_id: str | None = None
    country: str | None = None


@dataclass
class PublicationRecord:
    pub_id: str
    year: int
    doc_type: str
    journal_id: str
    publisher_id: str
    authorships: list[Authorship]
    cited_pub_ids: list[str] | None = None

    def __post_init__(self):
        if self.doc_type not in DOC_TYPES:
            raise DataError(f"pub {self.pub_id}: unknown doc_type {self.doc_type!r}")
        if not self.authorships:
            raise DataError(f"pub {self.pub_id}: empty author list")
        seen = set()
        for a in self.authorships:
            if a.researcher_id is None:
                continue
            if a.researcher_id in seen:
                raise DataError(
                    f"pub {self.pub_id}: researcher {a.researcher_id} appears twice")
            seen.add(a.researcher_id)

    @property
    def resolved_ids(self) -> list[str]:
        return [a.researcher_id for a in self.authorships if a.researcher_id]

    @property
    def is_eligible(self) -> bool:
        """Research articles with at most 20 authors enter the graph universe."""
        return (self.doc_type == "research_article"
                and len(self.authorships) <= MAX_ELIGIBLE_AUTHORS)


@dataclass
class ResearcherProfile:
    researcher_id: str
    first_pub_year: int
    last_pub_year: int
    pubs_by_year: dict[int, int] = field(default_factory=dict)  # eligible pubs only
    latest_country: str | None = None
    latest_institution: str | None = None


@dataclass
class FlagList:
    name: str
    flag_type: str
    pub_ids: set[str]

    def __post_init__(self):
        if self.flag_type not in FLAG_TYPES:
            raise DataError(f"flag list {self.name}: unknown flag_type {self.flag_type!r}")
        if not self.pub_ids:
            raise DataError(f"flag list {self.name}: no publication ids")


@dataclass(frozen=True)
class PeerReviewRecord:
    researcher_id: str
    year: int
    review_count: int
    journal_id: str | None = None

    def __post_init__(self):
        if self.review_count < 0:
            raise DataError(
                f"reviewer {self.researcher_id}: negative review_count")


class Corpus:
    """Completed, read-only view over publications and derived profiles."""

    def __init__(self, publications: dict[str, PublicationRecord],
                 profiles: dict[str, ResearcherProfile]):
        self.publications = publications
        self.profiles = profiles
        self._eligible_by_year: dict[int, tuple[str, ...]] = {}

    @property
    def year_range(self) -> tuple[int, int]:
        if not self.publications:
            raise DataError("empty corpus has no year range")
        years = [p.year for p in self.publications.values()]
        return min(years), max(years)

    def eligible_pub_ids(self, year: int) -> tuple[str, ...]:
        """Publications of `year` that are research articles with <= 20 authors."""
        cached = self._eligible_by_year.get(year)
        if cached is None:
            cached = tuple(sorted(
                pid for pid, p in self.publications.items()
                if p.year == year and p.is_eligible))
            self._eligible_by_year[year] = cached
        return cached

    @classmethod
    def from_records(cls, records) -> "Corpus":
        publications: dict[str, PublicationRecord] = {}
        for rec in records:
            if rec.pub_id in publications:
                raise DataError(f"duplicate pub_id {rec.pub_id}")
            publications[rec.pub_id] = rec
        profiles = _derive_profiles(publications)
        return cls(publications, profiles)


def _derive_profiles(publications: dict[str, PublicationRecord]):
    """Rebuild all researcher profiles by a single scan over the publications."""
    years: dict[str, list[int]] = {}
    eligible_counts: dict[str, dict[int, int]] = {}
    # (year, pub_id) key of the paper supplying the latest affiliation; ties on
    # the latest year go to the lexicographically smallest pub_id.
    latest_key: dict[str, tuple[int, str]] = {}
    latest_aff: dict[str, tuple[str | None, str | None]] = {}

    for pid in sorted(publications):
        pub = publications[pid]
        eligible = pub.is_eligible
        for a in pub.authorships:
            rid = a.researcher_id
            if rid is None:
                continue
            years.setdefault(rid, []).append(pub.year)
            if eligible:
                per_year = eligible_counts.setdefault(rid, {})
                per_year[pub.year] = per_year.get(pub.year, 0) + 1
            key = (-pub.year, pid)
            if rid not in latest_key or key < latest_key[rid]:
                latest_key[rid] = key
                latest_aff[rid] = (a.country, a.institution_id)

    profiles = {}
    for rid, ys in years.items():
        country, institution = latest_aff[rid]
        profiles[rid] = ResearcherProfile(
            researcher_id=rid,
            first_pub_year=min(ys),
            last_pub_year=max(ys),
            pubs_by_year=eligible_counts.get(rid, {}),
            latest_country=country,
            latest_institution=institution,
        )
    return profiles


def publication_age(profile: ResearcherProfile, at_year: int) -> int:
    """Snapshot publication age: years elapsed since the first publication."""
    if at_year < profile.first_pub_year:
        raise ValueError(
            f"researcher {profile.researcher_id} not active before "
            f"{profile.first_pub_year} (asked for {at_year})")
    return at_year - profile.first_pub_year


def researcher_stage(corpus: Corpus, researcher_id: str, at_year: int) -> CareerStage:
    """Career stage of a researcher at a given analysis year."""
    age = publication_age(corpus.profiles[researcher_id], at_year)
    return career_stage(min(age, 100))


def eligible_publications(corpus: Corpus, year: int) -> set[str]:
    """Publication ids of that year passing the document-type and author-cap rules."""
    return set(corpus.eligible_pub_ids(year))


def active_researchers(corpus: Corpus, year: int) -> set[str]:
    """Resolved researchers with at least one eligible publication in `year`."""
    out = set()
    for pid in corpus.eligible_pub_ids(year):
        out.update(corpus.publications[pid].resolved_ids)
    return out


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def _authorship_from_json(obj, pub_id, lineno):
    if not isinstance(obj, dict):
        raise DataError(f"line {lineno}: pub {pub_id}: author entry is not an object")
    return Authorship(
        researcher_id=obj.get("researcher_id") or None,
        institution_id=obj.get("institution_id") or None,
        country=obj.get("country") or None,
    )


def _record_from_json(obj, lineno) -> PublicationRecord:
    try:
        pub_id = obj["pub_id"]
        year = int(obj["year"])
        doc_type = obj["doc_type"]
        journal_id = obj["journal_id"]
        publisher_id = obj["publisher_id"]
        authors = obj["authors"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"line {lineno}: missing or malformed field ({exc})") from exc
    if not isinstance(authors, list):
        raise DataError(f"line {lineno}: pub {pub_id}: 'authors' is not a list")
    authorships = [_authorship_from_json(a, pub_id, lineno) for a in authors]
    cited = obj.get("cited_pub_ids")
    if cited is not None and not isinstance(cited, list):
        raise DataError(f"line {lineno}: pub {pub_id}: 'cited_pub_ids' is not a list")
    return PublicationRecord(pub_id, year, doc_type, journal_id, publisher_id,
                             authorships, cited)


def iter_publications_jsonl(lines):
    """Parse a JSONL stream (one publication object per line)."""
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON: {exc}") from exc
        yield _record_from_json(obj, lineno)


def iter_publications_csv(lines):
    """Parse the per-authorship CSV alternative.

    One row per authorship; paper-level columns must repeat identically across
    a paper's rows. cited_pub_ids is a semicolon-separated list.
    """
    reader = csv.DictReader(lines)
    partial: dict[str, dict] = {}
    order: list[str] = []
    for lineno, row in enumerate(reader, start=2):
        try:
            pub_id = row["pub_id"]
            meta = (int(row["year"]), row["doc_type"], row["journal_id"],
                    row["publisher_id"], row.get("cited_pub_ids") or "")
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"line {lineno}: missing or malformed field ({exc})") from exc
        entry = partial.get(pub_id)
        if entry is None:
            partial[pub_id] = entry = {"meta": meta, "authors": []}
            order.append(pub_id)
        elif entry["meta"] != meta:
            raise DataError(f"line {lineno}: pub {pub_id}: inconsistent paper metadata")
        entry["authors"].append(Authorship(
            researcher_id=row.get("researcher_id") or None,
            institution_id=row.get("institution_id") or None,
            country=row.get("country") or None,
        ))
    for pub_id in order:
        entry = partial[pub_id]
        year, doc_type, journal_id, publisher_id, cited = entry["meta"]
        cited_list = [c for c in cited.split(";") if c] or None
        yield PublicationRecord(pub_id, year, doc_type, journal_id, publisher_id,
                                entry["authors"], cited_list)


def ingest_publications(source, fmt: str = "jsonl") -> Corpus:
    """Build a corpus from a JSONL/CSV path, file object or line iterable."""
    if fmt not in ("jsonl", "csv"):
        raise ValueError(f"unknown publication format {fmt!r}")
    parser = iter_publications_jsonl if fmt == "jsonl" else iter_publications_csv
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return Corpus.from_records(parser(fh))
    if isinstance(source, io.TextIOBase):
        return Corpus.from_records(parser(source))
    return Corpus.from_records(parser(iter(source)))


def load_flaglist(path, name: str | None = None) -> FlagList:
    """Read a flag-list CSV with columns pub_id, flag_type."""
    path = Path(path)
    pub_ids = set()
    flag_type = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), start=2):
            try:
                pid, ftype = row["pub_id"], row["flag_type"]
            except KeyError as exc:
                raise DataError(f"{path}: line {lineno}: missing column {exc}") from exc
            if flag_type is None:
                flag_type = ftype
            elif ftype != flag_type:
                raise DataError(f"{path}: line {lineno}: mixed flag_type values")
            pub_ids.add(pid)
    if not pub_ids:
        raise DataError(f"{path}: empty flag list")
    return FlagList(name or path.stem, flag_type, pub_ids)


def load_peer_reviews(path) -> list[PeerReviewRecord]:
    """Read peer-review CSV with columns researcher_id, year, journal_id, review_count."""
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), start=2):
            try:
                records.append(PeerReviewRecord(
                    researcher_id=row["researcher_id"],
                    year=int(row["year"]),
                    review_count=int(row["review_count"]),
                    journal_id=row.get("journal_id") or None,
                ))
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError(f"{path}: line {lineno}: bad row ({exc})") from exc
    return records
