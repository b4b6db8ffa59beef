import json

import pytest

from concept_stlc.evaluator import trace
from concept_stlc.ident_maps import Ident, Span
from concept_stlc.modcheck import CheckError, CheckOutcome, DiagCode, Diagnostic, diagnostic
from concept_stlc.report import (
    DIAGNOSTIC_COLUMNS,
    TRACE_COLUMNS,
    diagnostic_to_dict,
    diagnostics_frame,
    outcome_to_json,
    parse_error_to_dict,
    trace_frame,
)
from concept_stlc.syntax import ParseError, TArrow, TmApp, TmNat, TmTrue, TNat, parse
from concept_stlc.typecheck import check_program

from tests.test_typecheck import MONOID_MAIN, MONOID_SOURCE

located = Diagnostic(DiagCode.DUPLICATE_NAME, Ident("C", Span(3, 9)), "Nome ripetuto.")
bare = diagnostic(DiagCode.MISSING_MEMBER, Ident("op"), "Il membro 'op' non è implementato.")


class TestDiagnosticToDict:
    def test_with_location(self):
        assert diagnostic_to_dict(located) == {
            "code": "duplicate-name", "subject": "C", "message": "Nome ripetuto.", "line": 3, "col": 9,
        }

    def test_without_location(self):
        assert set(diagnostic_to_dict(bare)) == {"code", "subject", "message"}

    def test_parse_error_at_end_of_input(self):
        entry = parse_error_to_dict(ParseError("Fine inattesa.", 2, 5))
        assert entry["subject"] == "<eof>"
        assert (entry["line"], entry["col"]) == (2, 5)


class TestOutcomeToJson:
    def test_success_with_value(self):
        data = outcome_to_json("ok", main_type=TArrow(TNat(), TNat()), value=TmNat(3))
        assert data == {"status": "ok", "diagnostics": [], "mainType": "Nat -> Nat", "value": "3"}

    def test_accepts_check_outcome(self):
        data = outcome_to_json("error", CheckOutcome((located, bare)))
        assert [d["code"] for d in data["diagnostics"]] == ["duplicate-name", "missing-member"]
        assert "mainType" not in data

    def test_mixed_diagnostic_sources(self):
        raw = {"code": "io-error", "subject": "prog.cstlc", "message": "assente"}
        data = outcome_to_json("usage-error", [located, raw])
        assert data["diagnostics"][1] == raw
        assert json.loads(json.dumps(data)) == data


class TestFrames:
    def test_empty_outcome(self):
        frame = diagnostics_frame(CheckOutcome())
        assert frame.empty
        assert list(frame.columns) == DIAGNOSTIC_COLUMNS

    def test_diagnostics_frame_from_checker(self):
        source = "concept C f : Nat endc concept C g : Bool endc true"
        with pytest.raises(CheckError) as info:
            check_program(parse(source))
        frame = diagnostics_frame(info.value.outcome)
        assert list(frame.columns) == DIAGNOSTIC_COLUMNS
        assert frame["code"].tolist() == ["duplicate-name"]
        assert frame["line"].iloc[0] == 1

    def test_trace_frame_types_every_step(self):
        checked = check_program(parse(MONOID_SOURCE))
        terms = trace(checked.mt, MONOID_MAIN, 100)
        frame = trace_frame(checked.ct, checked.mt, terms)
        assert list(frame.columns) == TRACE_COLUMNS
        assert frame["step"].tolist() == list(range(len(terms)))
        assert set(frame["type"]) == {"Nat"}
        assert frame["term"].iloc[-1] == "3"

    def test_trace_frame_reports_ill_typed_terms(self):
        checked = check_program(parse("true"))
        frame = trace_frame(checked.ct, checked.mt, [TmApp(TmTrue(), TmNat(0))])
        assert frame["type"].iloc[0].startswith("errore:")
