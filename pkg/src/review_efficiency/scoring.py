"""Weight-factor vectors, journal aggregation and the two efficiency measures.

E1 is the mean weight factor as a percentage of the maximal mean (4).
E2 is the area of the six-axis radar polygon as a percentage of the area
of the all-4 hexagon. Nothing is rounded along the way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .survey import (
    DEFAULT_SCHEMA,
    WF_MAX,
    ContractViolation,
    EditorResponse,
    QuestionnaireSchema,
    WfVector,
    resolve_answer,
)

SIN60 = math.sin(math.pi / 3)
MAX_HEXAGON_AREA = 0.5 * SIN60 * 6 * WF_MAX**2  # 48 sin 60 = 41.569...


@dataclass(frozen=True)
class EfficiencySummary:
    subject_id: str
    wf: Optional[WfVector]
    sum_wf: float
    mean_wf: float
    e1_percent: float
    hexagon_area_au: float
    e2_percent: float


@dataclass(frozen=True)
class DescriptiveStats:
    mean: float
    sd: Optional[float]
    cv: Optional[float]
    max: float
    n: int


def wf_vector(response: EditorResponse, schema: QuestionnaireSchema = DEFAULT_SCHEMA) -> WfVector:
    """Resolve a response's six answers to integer WF levels in question order."""
    if len(response.answers) != len(schema.scored_questions):
        raise ContractViolation(f"response {response.editor_id} does not answer every question")
    return WfVector(tuple(
        resolve_answer(q, a) for q, a in zip(schema.scored_questions, response.answers)
    ))


def aggregate_journal(vectors: Sequence[WfVector]) -> WfVector:
    """Component-wise mean of several editors' vectors."""
    if len(vectors) == 0:
        raise ContractViolation("cannot aggregate an empty list of WF vectors")
    n = len(vectors)
    # rational sums: the mean is correctly rounded and order-independent
    return WfVector(tuple(
        float(sum(map(Fraction, col)) / n) for col in zip(*(v.wf for v in vectors))
    ))


def e1(wf: WfVector) -> float:
    return math.fsum(wf) / len(wf) / WF_MAX * 100


def hexagon_area(wf: WfVector) -> float:
    """Area of the radar polygon drawn on six equiangular axes in question order.

    Consecutive axes are 60 degrees apart, so each triangle between axis i and
    i+1 contributes wf_i * wf_{i+1} * sin(60) / 2.
    """
    values = list(wf)
    products = (values[i] * values[(i + 1) % len(values)] for i in range(len(values)))
    return 0.5 * SIN60 * math.fsum(products)


def e2(wf: WfVector) -> float:
    return hexagon_area(wf) / MAX_HEXAGON_AREA * 100


def efficiency_summary(subject_id: str, wf: WfVector) -> EfficiencySummary:
    total = math.fsum(wf)
    area = hexagon_area(wf)
    return EfficiencySummary(
        subject_id=subject_id,
        wf=wf,
        sum_wf=total,
        mean_wf=total / len(wf),
        e1_percent=e1(wf),
        hexagon_area_au=area,
        e2_percent=area / MAX_HEXAGON_AREA * 100,
    )


def descriptive_stats(series: Sequence[float]) -> DescriptiveStats:
    """Mean, sample SD (n-1), CV and maximum of a series.

    SD and CV are None for fewer than two values; CV is None for a zero mean.
    """
    values = np.asarray(series, dtype=float)
    if values.size == 0:
        raise ContractViolation("descriptive statistics need at least one value")
    mean = float(values.mean())
    sd = float(values.std(ddof=1)) if values.size >= 2 else None
    cv = sd / mean if sd is not None and mean != 0 else None
    return DescriptiveStats(mean=mean, sd=sd, cv=cv, max=float(values.max()), n=int(values.size))
