"""Group-level analysis: subjects, groupings and the combined report."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from statistics import fmean
from typing import Optional, Sequence

from .ingest import Dataset, PrintedValues
from .scoring import (
    EfficiencySummary,
    aggregate_journal,
    efficiency_summary,
    wf_vector,
)
from .stats import (
    CorrelationResult,
    FitModel,
    GroupTestResult,
    RankCoherence,
    RankSizeFit,
    UndefinedStatisticError,
    compare_groups,
    kendall_tau_b,
    pearson,
    rank_size_fit,
)
from .survey import DEFAULT_SCHEMA, QuestionnaireSchema, WfVector

MEASURES = ("e1", "e2")


@dataclass(frozen=True)
class Subject:
    """One scored editor or journal as it enters the statistics."""

    subject_id: str
    summary: EfficiencySummary
    printed: Optional[PrintedValues] = None
    years: Optional[float] = None
    n_strategies: Optional[float] = None

    @property
    def wf(self) -> Optional[WfVector]:
        return self.summary.wf

    def measure(self, name: str) -> float:
        return self.summary.e1_percent if name == "e1" else self.summary.e2_percent


def summary_from_printed(subject_id: str, printed: PrintedValues, wf=None) -> EfficiencySummary:
    if printed.e1 is None or printed.e2 is None:
        raise ValueError(f"subject {subject_id} has no published E1/E2 values")
    return EfficiencySummary(
        subject_id=subject_id,
        wf=wf,
        sum_wf=printed.sum if printed.sum is not None else float("nan"),
        mean_wf=printed.mean if printed.mean is not None else float("nan"),
        e1_percent=printed.e1,
        hexagon_area_au=printed.area if printed.area is not None else float("nan"),
        e2_percent=printed.e2,
    )


def prescored_subjects(dataset: Dataset, prefer_published: bool = True) -> list[Subject]:
    """Subjects from a pre-scored table.

    With ``prefer_published`` the printed columns are used wherever they
    exist; otherwise values are recomputed from WF vectors when available.
    E-only subjects always use their printed values.
    """
    out = []
    for sid, s in dataset.prescored.items():
        has_printed = s.printed is not None and s.printed.e1 is not None and s.printed.e2 is not None
        if s.wf is not None and not (prefer_published and has_printed):
            summary = efficiency_summary(sid, s.wf)
        else:
            summary = summary_from_printed(sid, s.printed, s.wf)
        out.append(Subject(sid, summary, s.printed))
    return out


def editor_subjects(
    dataset: Dataset, schema: QuestionnaireSchema = DEFAULT_SCHEMA, journal_id: Optional[str] = None
) -> list[Subject]:
    out = []
    for r in dataset.responses:
        if journal_id is not None and r.journal_id != journal_id:
            continue
        out.append(Subject(
            r.editor_id,
            efficiency_summary(r.editor_id, wf_vector(r, schema)),
            years=float(r.years_as_editor),
            n_strategies=float(len(r.strategies)) if r.strategies else None,
        ))
    return out


def journal_subjects(dataset: Dataset, schema: QuestionnaireSchema = DEFAULT_SCHEMA) -> list[Subject]:
    """One subject per answered journal: WFs averaged over its editors."""
    by_journal: dict[str, list] = {}
    for r in dataset.responses:
        by_journal.setdefault(r.journal_id, []).append(r)
    out = []
    for jid, responses in by_journal.items():
        wf = aggregate_journal([wf_vector(r, schema) for r in responses])
        strategy_counts = [len(r.strategies) for r in responses if r.strategies]
        out.append(Subject(
            jid,
            efficiency_summary(jid, wf),
            years=fmean(r.years_as_editor for r in responses),
            n_strategies=fmean(strategy_counts) if strategy_counts else None,
        ))
    return out


def group_by_index(
    dataset: Dataset,
    schema: QuestionnaireSchema = DEFAULT_SCHEMA,
    carve_journal: Optional[str] = None,
    prefer_published: bool = True,
) -> dict[str, list[Subject]]:
    """Journal-level subjects split by index group (WOS / SCI).

    ``carve_journal`` adds that journal's editors as an extra editor-level
    group; the journal still counts in its index group.
    """
    groups: dict[str, list[Subject]] = {}
    index_of = {j.journal_id: j.index_group.value for j in dataset.journals}
    subjects = journal_subjects(dataset, schema) + prescored_subjects(dataset, prefer_published)
    for s in subjects:
        groups.setdefault(index_of.get(s.subject_id, "UNGROUPED"), []).append(s)
    if carve_journal is not None:
        groups[f"journal:{carve_journal}"] = editor_subjects(dataset, schema, carve_journal)
    return {k: groups[k] for k in sorted(groups)}


def dataset_subjects(
    dataset: Dataset, schema: QuestionnaireSchema = DEFAULT_SCHEMA, prefer_published: bool = True
) -> list[Subject]:
    """All subjects of a dataset at its natural level (used for fixtures)."""
    if dataset.subject_level == "editor":
        return editor_subjects(dataset, schema) + prescored_subjects(dataset, prefer_published)
    return journal_subjects(dataset, schema) + prescored_subjects(dataset, prefer_published)


def _columns(subjects: Sequence[Subject]) -> dict[str, list[float]]:
    cols: dict[str, list[float]] = {}
    if subjects and all(s.wf is not None for s in subjects):
        for i in range(6):
            cols[f"q{i + 1}"] = [s.wf[i] for s in subjects]
    means = [s.summary.mean_wf for s in subjects]
    if all(m == m for m in means):
        cols["mean_wf"] = means
    cols["e1"] = [s.summary.e1_percent for s in subjects]
    cols["e2"] = [s.summary.e2_percent for s in subjects]
    if subjects and all(s.years is not None for s in subjects):
        cols["years"] = [s.years for s in subjects]
    if subjects and all(s.n_strategies is not None for s in subjects):
        cols["n_strategies"] = [s.n_strategies for s in subjects]
    return cols


def correlation_matrix(subjects: Sequence[Subject]) -> dict[tuple[str, str], Optional[CorrelationResult]]:
    """Pearson r for every pair of available columns; None where undefined."""
    cols = _columns(subjects)
    out = {}
    for a, b in itertools.combinations(cols, 2):
        try:
            out[(a, b)] = pearson(cols[a], cols[b])
        except UndefinedStatisticError:
            out[(a, b)] = None
    return out


@dataclass
class AnalysisReport:
    groups: dict[str, list[Subject]]
    measures: tuple[str, ...]
    correlations: dict[str, dict] = field(default_factory=dict)
    coherence: dict[str, RankCoherence] = field(default_factory=dict)
    group_tests: dict[str, dict[tuple[str, str], GroupTestResult]] = field(default_factory=dict)
    fits: dict[tuple[str, str], tuple[RankSizeFit, RankSizeFit]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def linear_preferred(self, measure: str) -> dict[str, bool]:
        """Per group: does the linear fit reach at least the power-law R^2?"""
        return {
            g: lin.r_squared >= pw.r_squared
            for (g, m), (pw, lin) in self.fits.items() if m == measure
        }


def analyze(groups: dict[str, list[Subject]], measures: Sequence[str] = MEASURES) -> AnalysisReport:
    """Run correlations, E1/E2 coherence, group tests and rank-size fits.

    Undersized groups are skipped with a note. An undefined E1/E2 coherence
    raises UndefinedStatisticError.
    """
    report = AnalysisReport(groups=dict(groups), measures=tuple(measures))
    for name, subjects in groups.items():
        n = len(subjects)
        if n >= 3:
            report.correlations[name] = correlation_matrix(subjects)
        else:
            report.notes.append(f"group {name}: {n} subjects, correlations skipped (need 3)")
        if n >= 2:
            report.coherence[name] = kendall_tau_b(
                [s.measure("e1") for s in subjects], [s.measure("e2") for s in subjects]
            )
        else:
            report.notes.append(f"group {name}: {n} subject, coherence skipped (need 2)")
        for m in measures:
            if n < 3:
                report.notes.append(f"group {name}: rank-size fit of {m} skipped (need 3)")
                continue
            values = [s.measure(m) for s in subjects]
            labels = [s.subject_id for s in subjects]
            try:
                report.fits[(name, m)] = (
                    rank_size_fit(values, FitModel.POWER, labels),
                    rank_size_fit(values, FitModel.LINEAR, labels),
                )
            except ValueError as exc:
                report.notes.append(f"group {name}: rank-size fit of {m} failed: {exc}")
    nonempty = {g: s for g, s in groups.items() if s}
    if len(nonempty) >= 2:
        for m in measures:
            report.group_tests[m] = compare_groups(
                {g: [s.measure(m) for s in subs] for g, subs in nonempty.items()}
            )
    else:
        report.notes.append("Mann-Whitney comparisons need at least two groups")
    return report
