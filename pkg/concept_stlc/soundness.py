# concept_stlc/soundness.py
#
# Verifica dinamica di progress e preservation lungo la traccia di valutazione
# di un programma accettato dal typechecker.

import logging
from dataclasses import dataclass, field

from concept_stlc.config import SOUNDNESS_FUEL
from concept_stlc.evaluator import EvalResult, evaluate, is_value, step, trace
from concept_stlc.modcheck import CheckError
from concept_stlc.syntax import Term, pretty_term, pretty_type
from concept_stlc.typecheck import CheckedProgram, TyCtx, type_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SoundnessViolation:
    step: int
    kind: str  # "progress" oppure "preservation"
    term: str
    detail: str


@dataclass(frozen=True)
class SoundnessReport:
    result: EvalResult
    steps: int
    violations: tuple = field(default_factory=tuple)

    @property
    def sound(self) -> bool:
        return not self.violations


def check_trace_soundness(checked: CheckedProgram, main: Term, fuel: int = SOUNDNESS_FUEL) -> SoundnessReport:
    """
    Valuta main e ricontrolla ogni termine intermedio.

    Parameters:
    -----------
    checked : CheckedProgram
        Risultato di check_program per il programma di cui main è il termine principale.
    main : Term
        Termine principale.
    fuel : int
        Budget di passi.

    Returns:
    --------
    SoundnessReport
        Risultato della valutazione, numero di passi e violazioni trovate
        (progress: un non-valore che non riduce; preservation: un termine il cui
        tipo differisce da quello del termine principale).
    """
    terms = trace(checked.mt, main, fuel)
    violations = []
    for i, t in enumerate(terms):
        try:
            ty = type_of(checked.ct, checked.mt, TyCtx.empty(), t)
        except CheckError as err:
            violations.append(SoundnessViolation(i, "preservation", pretty_term(t), str(err)))
        else:
            if ty != checked.main_type:
                violations.append(SoundnessViolation(
                    i, "preservation", pretty_term(t),
                    f"tipo {pretty_type(ty)}, atteso {pretty_type(checked.main_type)}"))
        if not is_value(t) and step(checked.mt, t) is None:
            violations.append(SoundnessViolation(i, "progress", pretty_term(t), "termine bloccato"))

    result = evaluate(checked.mt, main, fuel)
    if violations:
        logger.warning("check_trace_soundness: %d violazioni su %d termini", len(violations), len(terms))
    return SoundnessReport(result, result.steps, tuple(violations))
