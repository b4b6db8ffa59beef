# concept_stlc/report.py

from typing import Iterable, Optional, Sequence

import pandas as pd

from concept_stlc.modcheck import CheckError, CheckOutcome, Diagnostic
from concept_stlc.syntax import ParseError, Term, Ty, pretty_term, pretty_type
from concept_stlc.typecheck import TyCtx, type_of

DIAGNOSTIC_COLUMNS = ["code", "subject", "message", "line", "col"]
TRACE_COLUMNS = ["step", "term", "type"]


def diagnostic_to_dict(d: Diagnostic) -> dict:
    """Voce JSON di una diagnostica; line e col compaiono solo se la posizione è nota."""
    entry = {"code": d.code.value, "subject": d.subject.text, "message": d.message}
    if d.location is not None:
        entry["line"] = d.location.line
        entry["col"] = d.location.column
    return entry


def parse_error_to_dict(err: ParseError) -> dict:
    return {
        "code": "parse-error",
        "subject": err.token if err.token is not None else "<eof>",
        "message": err.message,
        "line": err.line,
        "col": err.column,
    }


def outcome_to_json(
    status: str,
    diagnostics: Iterable = (),
    main_type: Optional[Ty] = None,
    value: Optional[Term] = None,
) -> dict:
    """
    Oggetto JSON della CLI: {status, mainType?, value?, diagnostics}.

    Parameters:
    -----------
    status : str
        ok, error, stuck, out-of-fuel oppure usage-error.
    diagnostics : Iterable
        Diagnostic, CheckOutcome o dizionari già pronti (errori di parsing e IO).
    main_type : Ty, optional
        Tipo del termine principale, se il controllo è riuscito.
    value : Term, optional
        Valore o ultimo termine raggiunto dalla valutazione.
    """
    if isinstance(diagnostics, CheckOutcome):
        diagnostics = diagnostics.diagnostics
    entries = [diagnostic_to_dict(d) if isinstance(d, Diagnostic) else dict(d) for d in diagnostics]
    data = {"status": status, "diagnostics": entries}
    if main_type is not None:
        data["mainType"] = pretty_type(main_type)
    if value is not None:
        data["value"] = pretty_term(value)
    return data


def diagnostics_frame(outcome: CheckOutcome) -> pd.DataFrame:
    """Tabella delle diagnostiche di un esito, una riga per diagnostica."""
    rows = [diagnostic_to_dict(d) for d in outcome.diagnostics]
    if not rows:
        return pd.DataFrame(columns=DIAGNOSTIC_COLUMNS)
    return pd.DataFrame(rows).reindex(columns=DIAGNOSTIC_COLUMNS)


def trace_frame(ct, mt, terms: Sequence[Term]) -> pd.DataFrame:
    """Tabella di una traccia di valutazione: passo, termine e suo tipo (o l'errore)."""
    rows = []
    for i, t in enumerate(terms):
        try:
            ty = pretty_type(type_of(ct, mt, TyCtx.empty(), t))
        except CheckError as err:
            ty = f"errore: {err}"
        rows.append({"step": i, "term": pretty_term(t), "type": ty})
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)
