"""Loading, validating and writing survey data and pre-scored WF tables.

CSV dialect: comma separated, UTF-8, header row, ``.`` decimal point.

Answer cells in ``responses.csv`` hold an option index 1..4 in WF order.
Two raw forms are accepted and bucketed at load time: ``17%`` for the
percentage questions and ``#3`` for the reviewer-count question.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Optional, TextIO, Union

from .survey import (
    DEFAULT_SCHEMA,
    N_QUESTIONS,
    Answer,
    ContractViolation,
    EditorResponse,
    IndexGroup,
    JournalRecord,
    QuestionnaireSchema,
    RawAnswer,
    Role,
    SearchStrategy,
    ValidationError,
    WfVector,
    resolve_answer,
)

RESPONSE_FIELDS = ["editor_id", "journal_id", "role", "years"] + [
    f"q{i}" for i in range(1, N_QUESTIONS + 1)
] + ["strategies"]
JOURNAL_FIELDS = ["journal_id", "name", "issn", "index_group"]
WF_FIELDS = [f"wf{i}" for i in range(1, N_QUESTIONS + 1)]
EXPECTED_FIELDS = ["exp_sum", "exp_mean", "exp_e1", "exp_area", "exp_e2"]
FIXTURE_NAMES = ("wos", "sci", "jscs")


class ParseError(ValueError):
    """One or more records could not be parsed; ``errors`` lists each location."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class DataWarning(UserWarning):
    pass


@dataclass(frozen=True)
class PrintedValues:
    """Published Sum/Average/E1/area/E2 kept as regression targets."""

    sum: Optional[float] = None
    mean: Optional[float] = None
    e1: Optional[float] = None
    area: Optional[float] = None
    e2: Optional[float] = None


@dataclass(frozen=True)
class ScoredSubject:
    """A journal or editor scored elsewhere: a WF vector, printed values, or both."""

    subject_id: str
    wf: Optional[WfVector] = None
    printed: Optional[PrintedValues] = None


@dataclass(frozen=True)
class Dataset:
    name: str
    journals: tuple[JournalRecord, ...] = ()
    responses: tuple[EditorResponse, ...] = ()
    prescored: Mapping[str, ScoredSubject] = field(default_factory=dict)
    provenance: str = ""
    subject_level: str = "journal"

    def __post_init__(self):
        known = {j.journal_id for j in self.journals}
        missing = sorted({r.journal_id for r in self.responses} - known)
        if self.journals and missing:
            raise ValidationError(f"responses reference unknown journals: {', '.join(missing)}")
        overlap = sorted({r.journal_id for r in self.responses} & set(self.prescored))
        if overlap:
            raise ValidationError(
                f"journals both pre-scored and answered: {', '.join(overlap)}"
            )

    def journal(self, journal_id: str) -> JournalRecord:
        for j in self.journals:
            if j.journal_id == journal_id:
                return j
        raise KeyError(journal_id)


def _to_float(text: str, where: str, errors: list[str]) -> Optional[float]:
    try:
        value = float(text)
    except ValueError:
        errors.append(f"{where}: {text!r} is not a number")
        return None
    if not math.isfinite(value):
        errors.append(f"{where}: {text!r} is not finite")
        return None
    return value


def parse_answer_cell(cell) -> Answer:
    """Turn one answer cell (CSV text or JSON value) into an Answer."""
    if cell is None:
        return None
    if isinstance(cell, bool):
        raise ValidationError(f"answer {cell!r} is not an option index")
    if isinstance(cell, int):
        return cell
    if isinstance(cell, float):
        if cell.is_integer():
            return int(cell)
        raise ValidationError(f"option index {cell!r} is not an integer")
    if isinstance(cell, dict) and "raw" in cell:
        return RawAnswer(float(cell["raw"]))
    text = str(cell).strip()
    if text == "":
        return None
    if text.endswith("%"):
        return RawAnswer(float(text[:-1]))
    if text.startswith("#"):
        return RawAnswer(float(text[1:]))
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"answer {text!r} is not an option index, 'N%' or '#N'") from None


def _answer_to_option(schema: QuestionnaireSchema, index: int, answer: Answer) -> int:
    question = schema.question(index)
    level = resolve_answer(question, answer)
    for pos, option in enumerate(question.options, start=1):
        if option.wf_level == level:
            return pos
    raise ValidationError(f"question {index}: no option with WF {level}")


def _record_to_response(
    record: Mapping, where: str, schema: QuestionnaireSchema, errors: list[str]
) -> Optional[EditorResponse]:
    start = len(errors)
    editor_id = str(record.get("editor_id") or "").strip()
    journal_id = str(record.get("journal_id") or "").strip()
    if not editor_id:
        errors.append(f"{where} field editor_id: empty")
    if not journal_id:
        errors.append(f"{where} field journal_id: empty")
    role = None
    try:
        role = Role(str(record.get("role") or "").strip().upper())
    except ValueError:
        errors.append(
            f"{where} field role: {record.get('role')!r} is not one of "
            f"{', '.join(r.value for r in Role)}"
        )
    years = None
    raw_years = record.get("years")
    try:
        years = int(str(raw_years).strip())
        if years < 0:
            raise ValueError
    except (TypeError, ValueError):
        errors.append(f"{where} field years: {raw_years!r} is not a non-negative integer")
    answers = []
    for i in range(1, N_QUESTIONS + 1):
        key = f"q{i}"
        try:
            answer = parse_answer_cell(record.get(key))
            if answer is None:
                raise ValidationError(f"missing answer to question {i}")
            answers.append(_answer_to_option(schema, i, answer))
        except (ValidationError, ContractViolation, ValueError) as exc:
            errors.append(f"{where} field {key}: {exc}")
    strategies = set()
    raw = record.get("strategies") or []
    tokens = raw if isinstance(raw, list) else str(raw).split(";")
    for token in tokens:
        if str(token).strip():
            try:
                strategies.add(SearchStrategy.parse(str(token)))
            except ValidationError as exc:
                errors.append(f"{where} field strategies: {exc}")
    if len(errors) > start:
        return None
    return EditorResponse(
        editor_id=editor_id,
        journal_id=journal_id,
        role=role,
        years_as_editor=years,
        answers=tuple(answers),
        strategies=frozenset(strategies),
    )


def _dict_reader(text: str, required: list[str], what: str) -> csv.DictReader:
    reader = csv.DictReader(io.StringIO(text, newline=""))
    try:
        header = reader.fieldnames
    except csv.Error as exc:
        raise ParseError([f"{what} line 1: {exc}"]) from None
    _check_header(header, required, what)
    return reader


def _check_header(header: Optional[list[str]], required: list[str], what: str) -> list[str]:
    if header is None:
        raise ParseError([f"{what}: missing header row"])
    header = [h.strip() for h in header]
    missing = [f for f in required if f not in header]
    if missing:
        raise ParseError([f"{what} line 1: missing columns {', '.join(missing)}"])
    return header


def _rows(reader, what: str):
    """Iterate a csv reader, reporting low-level CSV errors as ParseError."""
    try:
        yield from reader
    except csv.Error as exc:
        raise ParseError([f"{what} line {reader.line_num}: {exc}"]) from None


def parse_responses(
    stream: Union[TextIO, str],
    fmt: str = "csv",
    schema: QuestionnaireSchema = DEFAULT_SCHEMA,
) -> list[EditorResponse]:
    """Parse editor responses from CSV or JSON.

    Raises:
        ParseError: listing every malformed record with its line (CSV) or
            record number (JSON) and field.
    """
    text = stream if isinstance(stream, str) else stream.read()
    errors: list[str] = []
    responses = []
    fmt = fmt.lower()
    if fmt == "csv":
        reader = _dict_reader(text, RESPONSE_FIELDS, "responses")
        for row in _rows(reader, "responses"):
            where = f"line {reader.line_num}"
            if None in row or any(v is None for v in row.values()):
                errors.append(f"{where}: wrong number of fields")
                continue
            response = _record_to_response(row, where, schema, errors)
            if response is not None:
                responses.append(response)
    elif fmt == "json":
        try:
            records = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError([f"JSON line {exc.lineno}: {exc.msg}"]) from None
        if not isinstance(records, list):
            raise ParseError(["JSON: top level must be a list of records"])
        for n, record in enumerate(records, start=1):
            where = f"record {n}"
            if not isinstance(record, dict):
                errors.append(f"{where}: not an object")
                continue
            response = _record_to_response(record, where, schema, errors)
            if response is not None:
                responses.append(response)
    else:
        raise ContractViolation(f"unknown format {fmt!r}; use csv or json")
    if errors:
        raise ParseError(errors)
    return responses


def parse_journals(stream: Union[TextIO, str]) -> list[JournalRecord]:
    text = stream if isinstance(stream, str) else stream.read()
    reader = _dict_reader(text, JOURNAL_FIELDS, "journals")
    journals, errors = [], []
    seen = set()
    for row in _rows(reader, "journals"):
        where = f"line {reader.line_num}"
        journal_id = (row.get("journal_id") or "").strip()
        if not journal_id:
            errors.append(f"{where} field journal_id: empty")
            continue
        if journal_id in seen:
            errors.append(f"{where} field journal_id: duplicate {journal_id!r}")
            continue
        try:
            group = IndexGroup((row.get("index_group") or "").strip().upper())
        except ValueError:
            errors.append(f"{where} field index_group: {row.get('index_group')!r} is not WOS or SCI")
            continue
        seen.add(journal_id)
        journals.append(JournalRecord(
            journal_id=journal_id,
            name=(row.get("name") or "").strip(),
            index_group=group,
            issn=(row.get("issn") or "").strip() or None,
        ))
    if errors:
        raise ParseError(errors)
    return journals


def parse_prescored_table(stream: Union[TextIO, str]) -> dict[str, ScoredSubject]:
    """Parse a journal-level WF table, optionally carrying published columns.

    The first column is ``journal_id`` (or ``subject_id``). ``wf1..wf6`` must
    appear together; a table with only ``exp_*`` columns yields E-only
    subjects without WF vectors.
    """
    text = stream if isinstance(stream, str) else stream.read()
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(_rows(reader, "prescored"), None)
    if header is None:
        raise ParseError(["prescored: missing header row"])
    header = [h.strip() for h in header]
    if not header or header[0] not in ("journal_id", "subject_id"):
        raise ParseError(["prescored line 1: first column must be journal_id or subject_id"])
    unknown = [h for h in header[1:] if h not in WF_FIELDS + EXPECTED_FIELDS]
    if unknown:
        raise ParseError([f"prescored line 1: unknown columns {', '.join(unknown)}"])
    has_wf = [f in header for f in WF_FIELDS]
    if any(has_wf) and not all(has_wf):
        raise ParseError(["prescored line 1: wf1..wf6 must all be present"])
    if not all(has_wf) and not any(f in header for f in EXPECTED_FIELDS):
        raise ParseError(["prescored line 1: no WF or expected-value columns"])
    out: dict[str, ScoredSubject] = {}
    errors: list[str] = []
    for row in _rows(reader, "prescored"):
        where = f"line {reader.line_num}"
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            errors.append(f"{where}: expected {len(header)} fields, got {len(row)}")
            continue
        cells = dict(zip(header, (c.strip() for c in row)))
        subject_id = cells[header[0]]
        start = len(errors)
        if not subject_id:
            errors.append(f"{where} field {header[0]}: empty")
        elif subject_id in out:
            errors.append(f"{where} field {header[0]}: duplicate {subject_id!r}")
        wf = None
        if all(has_wf):
            values = [_to_float(cells[f], f"{where} field {f}", errors) for f in WF_FIELDS]
            if len(errors) == start:
                try:
                    wf = WfVector(tuple(values))
                except ValidationError as exc:
                    errors.append(f"{where}: {exc}")
        printed = {}
        for f in EXPECTED_FIELDS:
            if f in cells and cells[f] != "":
                printed[f[4:]] = _to_float(cells[f], f"{where} field {f}", errors)
        if len(errors) > start:
            continue
        out[subject_id] = ScoredSubject(
            subject_id, wf, PrintedValues(**printed) if printed else None
        )
    if errors:
        raise ParseError(errors)
    if not out:
        warnings.warn("prescored table has no data rows", DataWarning, stacklevel=2)
    return out


def _fmt_number(value: float) -> str:
    return repr(float(value)) if not float(value).is_integer() else str(int(value))


def _answer_cell(answer: Answer) -> str:
    if isinstance(answer, RawAnswer):
        return f"#{_fmt_number(answer.value)}"
    return "" if answer is None else str(answer)


def write_responses(responses: Iterable[EditorResponse], fmt: str = "csv") -> str:
    rows = []
    for r in responses:
        row = {
            "editor_id": r.editor_id,
            "journal_id": r.journal_id,
            "role": r.role.value,
            "years": r.years_as_editor,
        }
        for i, answer in enumerate(r.answers, start=1):
            row[f"q{i}"] = answer if fmt == "json" and isinstance(answer, int) else _answer_cell(answer)
        strategies = sorted(str(s) for s in r.strategies)
        row["strategies"] = strategies if fmt == "json" else ";".join(strategies)
        rows.append(row)
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=RESPONSE_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def write_journals(journals: Iterable[JournalRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(JOURNAL_FIELDS)
    for j in journals:
        writer.writerow([j.journal_id, j.name, j.issn or "", j.index_group.value])
    return buf.getvalue()


def write_prescored(subjects: Mapping[str, ScoredSubject]) -> str:
    items = list(subjects.values())
    with_wf = bool(items) and all(s.wf is not None for s in items)
    header = ["journal_id" if with_wf else "subject_id"]
    if with_wf:
        header += WF_FIELDS
    expected = [f for f in EXPECTED_FIELDS
                if any(s.printed and getattr(s.printed, f[4:]) is not None for s in items)]
    if not with_wf and not expected:
        expected = EXPECTED_FIELDS
    header += expected
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for s in items:
        row = [s.subject_id]
        if with_wf:
            row += [_fmt_number(v) for v in s.wf]
        for f in expected:
            value = getattr(s.printed, f[4:]) if s.printed else None
            row.append("" if value is None else _fmt_number(value))
        writer.writerow(row)
    return buf.getvalue()


def build_dataset(
    name: str,
    journals: Iterable[JournalRecord] = (),
    responses: Iterable[EditorResponse] = (),
    prescored: Optional[Mapping[str, ScoredSubject]] = None,
    provenance: str = "",
    subject_level: str = "journal",
) -> Dataset:
    """Assemble a Dataset, filling each journal's editor list from the responses."""
    responses = tuple(responses)
    editors: dict[str, list[str]] = {}
    for r in responses:
        editors.setdefault(r.journal_id, []).append(r.editor_id)
    journals = tuple(
        JournalRecord(j.journal_id, j.name, j.index_group, j.issn,
                      tuple(editors.get(j.journal_id, j.editors)))
        for j in journals
    )
    return Dataset(name, journals, responses, dict(prescored or {}), provenance, subject_level)


def load_dataset(
    responses_path=None, journals_path=None, prescored_path=None,
    schema: QuestionnaireSchema = DEFAULT_SCHEMA, name: str = "input",
) -> Dataset:
    """Read user files into a Dataset. JSON responses are detected by extension."""
    journals = []
    responses = []
    prescored = {}
    sources = []
    if journals_path:
        with open(journals_path, encoding="utf-8") as fh:
            journals = parse_journals(fh)
        sources.append(str(journals_path))
    if responses_path:
        fmt = "json" if str(responses_path).lower().endswith(".json") else "csv"
        with open(responses_path, encoding="utf-8") as fh:
            responses = parse_responses(fh, fmt, schema)
        sources.append(str(responses_path))
    if prescored_path:
        with open(prescored_path, encoding="utf-8") as fh:
            prescored = parse_prescored_table(fh)
        sources.append(str(prescored_path))
    if not sources:
        raise ContractViolation("no data source given")
    return build_dataset(name, journals, responses, prescored, provenance=", ".join(sources))


def _fixture_text(filename: str) -> str:
    return resources.files(__package__).joinpath("data", filename).read_text(encoding="utf-8")


def load_fixtures() -> dict[str, Dataset]:
    """The published tables as datasets: ``wos``, ``sci`` and ``jscs``.

    ``wos`` holds eleven journal WF vectors with their printed columns.
    ``sci`` (13 journals) and ``jscs`` (14 subeditors of one journal) carry
    printed values only.
    """
    all_journals = {j.journal_id: j for j in parse_journals(_fixture_text("journals.csv"))}
    wos = parse_prescored_table(_fixture_text("wos.csv"))
    sci = parse_prescored_table(_fixture_text("sci.csv"))
    jscs = parse_prescored_table(_fixture_text("jscs.csv"))
    jscs_journal = all_journals["JSCS"]
    return {
        "wos": build_dataset(
            "wos", [all_journals[k] for k in wos], prescored=wos,
            provenance="WoS journals, journal-level WF table",
        ),
        "sci": build_dataset(
            "sci", [all_journals[k] for k in sci], prescored=sci,
            provenance="SCI journals, published efficiency columns only",
        ),
        "jscs": build_dataset(
            "jscs",
            [JournalRecord(jscs_journal.journal_id, jscs_journal.name, jscs_journal.index_group,
                           jscs_journal.issn, tuple(jscs))],
            prescored=jscs,
            provenance="JSCS subeditors, published efficiency columns only",
            subject_level="editor",
        ),
    }
