"""Citation hallucination detection: retrieve, verify, label."""

from .models import (CandidatePublication, LabeledVerdict, Label, MatchMethod, MatchResult,
                     ParsedCitation, ParseMethod, RawCitation, Source, StageRecord, Thresholds)

__version__ = "0.1.0"

__all__ = ["CandidatePublication", "LabeledVerdict", "Label", "MatchMethod", "MatchResult",
           "ParsedCitation", "ParseMethod", "RawCitation", "Source", "StageRecord", "Thresholds"]
