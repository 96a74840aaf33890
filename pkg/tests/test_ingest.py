import io
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st

from review_efficiency.ingest import (
    DataWarning,
    ParseError,
    build_dataset,
    load_dataset,
    parse_journals,
    parse_prescored_table,
    parse_responses,
    write_journals,
    write_prescored,
    write_responses,
)
from review_efficiency.scoring import wf_vector
from review_efficiency.survey import (
    EditorResponse,
    IndexGroup,
    Role,
    SearchStrategy,
    StrategyCode,
    ValidationError,
)

HEADER = "editor_id,journal_id,role,years,q1,q2,q3,q4,q5,q6,strategies\n"


def test_single_row_csv():
    text = HEADER + "e1,J,EDITOR_IN_CHIEF,12,4,4,4,4,4,3,BIBLIOGRAPHIC_DB;PRIOR_REVIEWER\n"
    [r] = parse_responses(io.StringIO(text))
    assert wf_vector(r).wf == (4, 4, 4, 4, 4, 3)
    assert r.role is Role.EDITOR_IN_CHIEF
    assert r.years_as_editor == 12
    assert {s.code for s in r.strategies} == {StrategyCode.BIBLIOGRAPHIC_DB, StrategyCode.PRIOR_REVIEWER}


def test_raw_percentage_is_bucketed():
    text = HEADER + "e1,J,SUBEDITOR,3,#3,30%,17%,0%,2,1,\n"
    [r] = parse_responses(text)
    assert wf_vector(r).wf == (3, 3, 4, 4, 2, 1)
    assert r.strategies == frozenset()


def test_option_index_out_of_range_is_located():
    text = HEADER + "e1,J,SUBEDITOR,3,4,4,4,4,4,4,\ne2,J,SUBEDITOR,3,5,4,4,4,4,4,\n"
    with pytest.raises(ParseError) as info:
        parse_responses(text)
    assert len(info.value.errors) == 1
    assert "line 3" in info.value.errors[0] and "q1" in info.value.errors[0]


def test_every_bad_row_is_reported():
    text = (HEADER
            + "e1,J,BOSS,3,4,4,4,4,4,4,\n"
            + "e2,J,SUBEDITOR,-2,4,4,4,4,4,4,\n"
            + "e3,J,SUBEDITOR,2,4,4,4,4,50%,4,\n"
            + "e4,J,SUBEDITOR,2,4,4,4,4,4\n")
    with pytest.raises(ParseError) as info:
        parse_responses(text)
    joined = "\n".join(info.value.errors)
    assert "line 2 field role" in joined
    assert "line 3 field years" in joined
    assert "line 4 field q5" in joined
    assert "line 5" in joined


def test_unknown_strategy_lists_valid_codes():
    text = HEADER + "e1,J,SUBEDITOR,3,4,4,4,4,4,4,FRIENDS\n"
    with pytest.raises(ParseError, match="PRIOR_REVIEWER"):
        parse_responses(text)


def test_missing_header_columns():
    with pytest.raises(ParseError, match="missing columns"):
        parse_responses("editor_id,journal_id\n")


def test_json_responses():
    text = """[{"editor_id": "e1", "journal_id": "J", "role": "subeditor", "years": 4,
               "q1": 4, "q2": "30%", "q3": {"raw": 70}, "q4": 2, "q5": 3, "q6": 4,
               "strategies": ["OTHER:panel", "SELF_REVIEW"]}]"""
    [r] = parse_responses(text, "json")
    assert wf_vector(r).wf == (4, 3, 1, 2, 3, 4)
    assert SearchStrategy(StrategyCode.OTHER, "panel") in r.strategies


def test_json_errors_are_located():
    text = '[{"editor_id": "e1"}, 5]'
    with pytest.raises(ParseError) as info:
        parse_responses(text, "json")
    assert any(e.startswith("record 1") for e in info.value.errors)
    assert any(e.startswith("record 2") for e in info.value.errors)
    with pytest.raises(ParseError, match="JSON line"):
        parse_responses("[{", "json")


def test_journals():
    text = "journal_id,name,issn,index_group\nJ,Journal J,1234-5678,wos\nK,K,,SCI\n"
    journals = parse_journals(text)
    assert journals[0].index_group is IndexGroup.WOS
    assert journals[1].issn is None
    with pytest.raises(ParseError, match="WOS or SCI"):
        parse_journals("journal_id,name,issn,index_group\nJ,x,,SCOPUS\n")


def test_dataset_rejects_unknown_journal_reference():
    r = EditorResponse("e", "X", Role.SUBEDITOR, 1, (4,) * 6)
    journals = parse_journals("journal_id,name,issn,index_group\nJ,J,,WOS\n")
    with pytest.raises(ValidationError, match="unknown journals"):
        build_dataset("t", journals, [r])


def test_dataset_fills_editor_lists():
    journals = parse_journals("journal_id,name,issn,index_group\nJ,J,,WOS\n")
    rs = [EditorResponse(f"e{i}", "J", Role.SUBEDITOR, 1, (4,) * 6) for i in range(3)]
    ds = build_dataset("t", journals, rs)
    assert ds.journal("J").editors == ("e0", "e1", "e2")


def test_prescored_fixture(fixtures):
    wos = fixtures["wos"].prescored
    assert list(wos) == list("ABCDEFGHIJK")
    assert wos["A"].wf.wf == (4, 3.4, 3.8, 3, 3.4, 2.4)
    assert wos["A"].printed.e2 == 68.51
    assert wos["J"].printed.area == 38.1


def test_prescored_rejects_bad_rows():
    head = "journal_id,wf1,wf2,wf3,wf4,wf5,wf6\n"
    with pytest.raises(ParseError, match="outside"):
        parse_prescored_table(head + "A,4,4,4,4,4,5\n")
    with pytest.raises(ParseError, match="expected 7 fields"):
        parse_prescored_table(head + "A,4,4,4\n")
    with pytest.raises(ParseError, match="wf1..wf6"):
        parse_prescored_table("journal_id,wf1,wf2\n")


def test_prescored_empty_body_warns():
    with pytest.warns(DataWarning):
        assert parse_prescored_table("journal_id,wf1,wf2,wf3,wf4,wf5,wf6\n") == {}


def test_fixture_sizes(fixtures):
    assert set(fixtures) == {"wos", "sci", "jscs"}
    assert len(fixtures["wos"].prescored) == 11
    sci = list(fixtures["sci"].prescored.values())
    assert len(sci) == 13
    assert [s.printed.e2 for s in sci[:2]] == [15.10, 77.08]
    assert all(s.wf is None for s in sci)
    jscs = list(fixtures["jscs"].prescored.values())
    assert len(jscs) == 14
    mean_e1 = sum(s.printed.e1 for s in jscs) / 14
    assert round(mean_e1, 3) == 71.393
    assert fixtures["jscs"].subject_level == "editor"


def test_prescored_round_trip(fixtures):
    for ds in fixtures.values():
        text = write_prescored(ds.prescored)
        assert parse_prescored_table(text) == ds.prescored


def test_journals_round_trip(fixtures):
    journals = tuple(fixtures["sci"].journals)
    again = parse_journals(write_journals(journals))
    assert [(j.journal_id, j.name, j.issn, j.index_group) for j in again] == \
        [(j.journal_id, j.name, j.issn, j.index_group) for j in journals]


codes = st.sampled_from([c for c in StrategyCode if c is not StrategyCode.OTHER])
responses = st.builds(
    EditorResponse,
    editor_id=st.text("abcdefXYZ0123", min_size=1, max_size=8),
    journal_id=st.sampled_from(["J", "K"]),
    role=st.sampled_from(list(Role)),
    years_as_editor=st.integers(0, 60),
    answers=st.tuples(*[st.integers(1, 4)] * 6),
    strategies=st.frozensets(codes.map(SearchStrategy), max_size=5),
)


@given(st.lists(responses, max_size=6), st.sampled_from(["csv", "json"]))
def test_responses_round_trip(rs, fmt):
    text = write_responses(rs, fmt)
    assert parse_responses(text, fmt) == rs
    assert write_responses(parse_responses(text, fmt), fmt) == text


@given(st.sampled_from(["", HEADER]), st.text(max_size=200))
def test_parsing_fails_only_with_parse_error(prefix, text):
    parsers = [
        lambda t: parse_responses(t, "csv"),
        lambda t: parse_responses(t, "json"),
        parse_journals,
        parse_prescored_table,
    ]
    for parse in parsers:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DataWarning)
                parse(prefix + text)
        except ParseError:
            pass


def test_load_dataset_from_files(tmp_path):
    (tmp_path / "journals.csv").write_text("journal_id,name,issn,index_group\nJ,J,,WOS\n")
    (tmp_path / "responses.json").write_text(
        '[{"editor_id":"e","journal_id":"J","role":"SUBEDITOR","years":2,'
        '"q1":1,"q2":2,"q3":3,"q4":4,"q5":1,"q6":2,"strategies":""}]'
    )
    ds = load_dataset(tmp_path / "responses.json", tmp_path / "journals.csv")
    assert len(ds.responses) == 1
    with pytest.raises(OSError):
        load_dataset(tmp_path / "missing.csv")
