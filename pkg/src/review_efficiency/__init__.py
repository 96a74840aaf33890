"""Peer-review management efficiency from editor survey weight factors."""

from .scoring import (
    MAX_HEXAGON_AREA,
    DescriptiveStats,
    EfficiencySummary,
    aggregate_journal,
    descriptive_stats,
    e1,
    e2,
    efficiency_summary,
    hexagon_area,
    wf_vector,
)
from .survey import DEFAULT_SCHEMA, EditorResponse, JournalRecord, WfVector

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SCHEMA",
    "MAX_HEXAGON_AREA",
    "DescriptiveStats",
    "EditorResponse",
    "EfficiencySummary",
    "JournalRecord",
    "WfVector",
    "aggregate_journal",
    "descriptive_stats",
    "e1",
    "e2",
    "efficiency_summary",
    "hexagon_area",
    "wf_vector",
]
