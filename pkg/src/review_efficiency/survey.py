"""Questionnaire schema, answer-to-weight-factor mapping and survey domain types.

Each of the six scored questions has four options. Options are stored in
weight-factor order, so option index 1 is the least efficient answer (WF1)
and option index 4 the most efficient (WF4). Question 7 (how reviewers are
found) and the years-as-editor field are recorded but never scored.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

N_QUESTIONS = 6
WF_LEVELS = (1, 2, 3, 4)
WF_MIN = 1.0
WF_MAX = 4.0


class ValidationError(ValueError):
    """Input data does not satisfy the questionnaire contract."""


class ContractViolation(ValueError):
    """An operation was called outside its precondition."""


class AnswerKind(enum.Enum):
    CATEGORICAL = "categorical"
    COUNT = "count"
    PERCENTAGE = "percentage"


class StrategyCode(enum.Enum):
    PRIOR_REVIEWER = "PRIOR_REVIEWER"
    PRIOR_AUTHOR = "PRIOR_AUTHOR"
    PERSONAL_CONTACT = "PERSONAL_CONTACT"
    BIBLIOGRAPHIC_DB = "BIBLIOGRAPHIC_DB"
    SELF_REVIEW = "SELF_REVIEW"
    OTHER = "OTHER"


class Role(enum.Enum):
    EDITOR_IN_CHIEF = "EDITOR_IN_CHIEF"
    SUBEDITOR = "SUBEDITOR"


class IndexGroup(enum.Enum):
    WOS = "WOS"
    SCI = "SCI"


@dataclass(frozen=True)
class Interval:
    """Real interval with independently open or closed ends."""

    low: float
    high: float
    low_closed: bool = True
    high_closed: bool = False

    def __contains__(self, value: float) -> bool:
        above = value >= self.low if self.low_closed else value > self.low
        below = value <= self.high if self.high_closed else value < self.high
        return above and below

    def midpoint(self) -> float:
        if math.isinf(self.high):
            return self.low + 1.0
        return (self.low + self.high) / 2


@dataclass(frozen=True)
class Option:
    wf_level: int
    label: str
    bucket: Optional[Interval] = None


@dataclass(frozen=True)
class ScoredQuestion:
    index: int
    prompt: str
    options: tuple[Option, ...]
    answer_kind: AnswerKind = AnswerKind.CATEGORICAL
    valid_range: Optional[Interval] = None
    short_name: str = ""

    def __post_init__(self):
        if not 1 <= self.index <= N_QUESTIONS:
            raise ValidationError(f"question index {self.index} outside 1..{N_QUESTIONS}")
        levels = sorted(o.wf_level for o in self.options)
        if tuple(levels) != WF_LEVELS:
            raise ValidationError(
                f"question {self.index}: options must map onto WF levels 1..4, got {levels}"
            )
        if self.answer_kind is not AnswerKind.CATEGORICAL:
            if self.valid_range is None or any(o.bucket is None for o in self.options):
                raise ValidationError(
                    f"question {self.index}: numeric questions need a valid range and buckets"
                )


@dataclass(frozen=True)
class SearchStrategy:
    code: StrategyCode
    other_text: Optional[str] = None

    def __post_init__(self):
        if self.other_text is not None and self.code is not StrategyCode.OTHER:
            raise ValidationError("free text is only allowed with the OTHER strategy")

    @classmethod
    def parse(cls, token: str) -> "SearchStrategy":
        """Parse ``CODE`` or ``OTHER:free text``."""
        code, sep, text = token.strip().partition(":")
        try:
            parsed = StrategyCode(code.strip().upper())
        except ValueError:
            valid = ", ".join(c.value for c in StrategyCode)
            raise ValidationError(
                f"unknown strategy code {code.strip()!r}; valid codes: {valid}"
            ) from None
        return cls(parsed, text.strip() if sep and parsed is StrategyCode.OTHER else None)

    def __str__(self) -> str:
        if self.other_text:
            return f"{self.code.value}:{self.other_text}"
        return self.code.value


@dataclass(frozen=True)
class RawAnswer:
    """A numeric answer (count or percentage) still to be bucketed."""

    value: float


Answer = Union[int, RawAnswer, None]


@dataclass(frozen=True)
class EditorResponse:
    editor_id: str
    journal_id: str
    role: Role
    years_as_editor: int
    answers: tuple[Answer, ...]
    strategies: frozenset[SearchStrategy] = field(default_factory=frozenset)


@dataclass(frozen=True)
class JournalRecord:
    journal_id: str
    name: str
    index_group: IndexGroup
    issn: Optional[str] = None
    editors: tuple[str, ...] = ()


@dataclass(frozen=True)
class WfVector:
    """Six weight factors in question order, each within [1, 4]."""

    wf: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.wf)
        if len(values) != N_QUESTIONS:
            raise ValidationError(f"a WF vector has {N_QUESTIONS} components, got {len(values)}")
        for i, v in enumerate(values, start=1):
            if not (WF_MIN <= v <= WF_MAX):
                raise ValidationError(f"WF{i} = {v} outside [1, 4]")
        object.__setattr__(self, "wf", values)

    def __iter__(self):
        return iter(self.wf)

    def __len__(self):
        return N_QUESTIONS

    def __getitem__(self, i):
        return self.wf[i]


@dataclass(frozen=True)
class QuestionnaireSchema:
    scored_questions: tuple[ScoredQuestion, ...]
    strategy_options: tuple[StrategyCode, ...] = tuple(StrategyCode)
    version: str = "v1"

    def __post_init__(self):
        if len(self.scored_questions) != N_QUESTIONS:
            raise ValidationError(f"schema needs {N_QUESTIONS} scored questions")
        if [q.index for q in self.scored_questions] != list(range(1, N_QUESTIONS + 1)):
            raise ValidationError("scored questions must be in order 1..6")

    def question(self, index: int) -> ScoredQuestion:
        return self.scored_questions[index - 1]

    @property
    def short_names(self) -> tuple[str, ...]:
        return tuple(q.short_name for q in self.scored_questions)


def _pct_options(labels: Sequence[str], buckets: Sequence[Interval]) -> tuple[Option, ...]:
    return tuple(
        Option(level, label, bucket)
        for level, label, bucket in zip(WF_LEVELS, labels, buckets)
    )


_PERCENT = Interval(0.0, 100.0, True, True)
_PORTION_BUCKETS = (
    Interval(60.0, 100.0, False, True),
    Interval(40.0, 60.0, False, True),
    Interval(25.0, 40.0, True, True),
    Interval(0.0, 25.0, True, False),
)

DEFAULT_SCHEMA = QuestionnaireSchema(
    scored_questions=(
        ScoredQuestion(
            1,
            "How many reviewers do you invite in the first round?",
            _pct_options(
                (">4", "4", "3", "1-2"),
                (
                    Interval(4.0, math.inf, False, False),
                    Interval(3.0, 4.0, False, True),
                    Interval(2.0, 3.0, False, True),
                    Interval(1.0, 2.0, True, True),
                ),
            ),
            AnswerKind.COUNT,
            Interval(1.0, math.inf, True, False),
            "Reviewers invited",
        ),
        ScoredQuestion(
            2,
            "What is the portion of manuscripts for which a second round of "
            "reviewer invitation is needed?",
            _pct_options((">60%", "41-60%", "25-40%", "<25%"), _PORTION_BUCKETS),
            AnswerKind.PERCENTAGE,
            _PERCENT,
            "Second round",
        ),
        ScoredQuestion(
            3,
            "What is the portion of invitations to reviewers without response?",
            _pct_options((">60%", "41-60%", "25-40%", "<25%"), _PORTION_BUCKETS),
            AnswerKind.PERCENTAGE,
            _PERCENT,
            "No response",
        ),
        ScoredQuestion(
            4,
            "What is the portion of inadequate reports?",
            _pct_options(
                (">10%", "6-9%", "3-5%", "1-2%"),
                (
                    Interval(10.0, 100.0, False, True),
                    Interval(5.5, 10.0, True, True),
                    Interval(2.5, 5.5, True, False),
                    Interval(0.0, 2.5, True, False),
                ),
            ),
            AnswerKind.PERCENTAGE,
            _PERCENT,
            "Inadequate reports",
        ),
        ScoredQuestion(
            5,
            "How do you estimate the quality of reports?",
            _pct_options(
                (
                    "Predominantly poor",
                    "Equivalent number of good and poor",
                    "Predominantly good",
                    "Good",
                ),
                (None,) * 4,
            ),
            short_name="Report quality",
        ),
        ScoredQuestion(
            6,
            "How do you estimate the timeliness of report submission?",
            _pct_options(
                (">10 days after deadline", "<10 days after deadline", "On time", "Before deadline"),
                (None,) * 4,
            ),
            short_name="Timeliness",
        ),
    ),
    version="table-I",
)


def map_choice_to_wf(question: ScoredQuestion, option_index: int) -> int:
    """Return the WF level of the chosen option (1-based, WF order)."""
    if isinstance(option_index, bool) or not isinstance(option_index, int) \
            or not 1 <= option_index <= len(question.options):
        raise ValidationError(
            f"question {question.index}: option index {option_index!r} outside 1..4"
        )
    return question.options[option_index - 1].wf_level


def bucket_numeric_answer(question: ScoredQuestion, value: float) -> int:
    """Map a raw count or percentage onto the WF level of its bucket.

    Raises:
        ContractViolation: the question only takes categorical answers.
        ValidationError: the value lies outside the question's valid range.
    """
    if question.answer_kind is AnswerKind.CATEGORICAL:
        raise ContractViolation(f"question {question.index} accepts categorical answers only")
    value = float(value)
    if math.isnan(value) or value not in question.valid_range:
        raise ValidationError(
            f"question {question.index}: value {value} outside the valid range"
        )
    for option in question.options:
        if value in option.bucket:
            return option.wf_level
    raise ValidationError(f"question {question.index}: no bucket contains {value}")


def resolve_answer(question: ScoredQuestion, answer: Answer) -> int:
    if isinstance(answer, RawAnswer):
        return bucket_numeric_answer(question, answer.value)
    if answer is None:
        raise ValidationError(f"question {question.index}: missing answer")
    return map_choice_to_wf(question, answer)


@dataclass(frozen=True)
class Issue:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def validate_response(
    response: EditorResponse,
    schema: QuestionnaireSchema = DEFAULT_SCHEMA,
    journals: Union[Mapping[str, JournalRecord], Iterable[str], None] = None,
) -> list[Issue]:
    """List every problem with a response; an empty list means it is valid.

    ``journals`` may be a mapping or any collection of known journal ids.
    Passing None skips the journal lookup.
    """
    issues = []
    prefix = f"response[{response.editor_id}]"
    answers = tuple(response.answers)
    if len(answers) != N_QUESTIONS:
        issues.append(Issue(f"{prefix}.answers", f"expected {N_QUESTIONS} answers, got {len(answers)}"))
    for question in schema.scored_questions:
        path = f"{prefix}.q{question.index}"
        if question.index > len(answers) or answers[question.index - 1] is None:
            issues.append(Issue(path, f"missing answer to question {question.index}"))
            continue
        try:
            resolve_answer(question, answers[question.index - 1])
        except (ValidationError, ContractViolation) as exc:
            issues.append(Issue(path, str(exc)))
    if journals is not None and response.journal_id not in set(journals):
        issues.append(Issue(f"{prefix}.journal_id", f"unknown journal {response.journal_id!r}"))
    if not isinstance(response.role, Role):
        issues.append(Issue(f"{prefix}.role", f"invalid role {response.role!r}"))
    if isinstance(response.years_as_editor, bool) or not isinstance(response.years_as_editor, int) \
            or response.years_as_editor < 0:
        issues.append(Issue(f"{prefix}.years", f"invalid years as editor {response.years_as_editor!r}"))
    return issues
