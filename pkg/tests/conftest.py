"""Shared fixtures: hand-built micro corpora and a small synthetic corpus."""

from __future__ import annotations

import pytest

from millnet.corpus import Authorship, Corpus, PublicationRecord
from millnet.synthgen import MillConfig, OrganicConfig, SynthConfig, generate


def paper(pub_id, year, authors, doc_type="research_article",
          journal="j1", publisher="p1", cited=None):
    """Compact publication constructor for hand-written fixtures.

    `authors` entries may be researcher-id strings or
    (researcher_id, institution_id, country) tuples; None ids stay
    unresolved.
    """
    auths = []
    for a in authors:
        if isinstance(a, tuple):
            auths.append(Authorship(*a))
        else:
            auths.append(Authorship(a))
    return PublicationRecord(pub_id, year, doc_type, journal, publisher,
                             auths, cited)


def build_corpus(records) -> Corpus:
    return Corpus.from_records(records)


def small_synth_config(seed=11) -> SynthConfig:
    """A fast (~1 s) generator setup: ~6k researchers, ~24k papers."""
    organic = OrganicConfig(new_researchers_per_year=400,
                            warmup_researchers_per_year=150,
                            warmup_until=2000,
                            hubs_per_year=15)
    mill = MillConfig(start_year=2011,
                      customers_per_year={2011: 30, 2012: 45, 2013: 60,
                                          2014: 80, 2015: 90},
                      papers_per_customer=25)
    return SynthConfig(seed=seed, years=(1996, 2015),
                       organic=organic, mill=mill)


@pytest.fixture(scope="session")
def small_synth():
    """(corpus, truth, flags, reviews) for the small mill scenario."""
    return generate(small_synth_config())
