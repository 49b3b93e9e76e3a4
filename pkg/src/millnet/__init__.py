"""Detection of authorship-for-sale co-authorship fingerprints."""

from .corpus import (Authorship, CareerStage, Corpus, FlagList,
                     PeerReviewRecord, PublicationRecord, ResearcherProfile,
                     career_stage, eligible_publications, ingest_publications,
                     publication_age)
from .detector import (DetectorParams, SuspiciousCohort, candidate_filter,
                       cohort_trend, largest_connected_component,
                       suspicious_cohort)
from .errors import DataError, MillnetError
from .graph import (CoauthorGraph, EgoShape, ShapeKey, build_graph, ego_shape,
                    shape_frequency_table, uniqueness_bin)
from .synthgen import GroundTruth, SynthConfig, evaluate, generate

__all__ = [
    "Authorship", "CareerStage", "Corpus", "FlagList", "PeerReviewRecord",
    "PublicationRecord", "ResearcherProfile", "career_stage",
    "eligible_publications", "ingest_publications", "publication_age",
    "DetectorParams", "SuspiciousCohort", "candidate_filter", "cohort_trend",
    "largest_connected_component", "suspicious_cohort",
    "DataError", "MillnetError",
    "CoauthorGraph", "EgoShape", "ShapeKey", "build_graph", "ego_shape",
    "shape_frequency_table", "uniqueness_bin",
    "GroundTruth", "SynthConfig", "evaluate", "generate",
]

__version__ = "0.1.0"
