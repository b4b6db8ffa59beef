# concept_stlc/modcheck.py
#
# Framework generico di buona definizione per liste di dichiarazioni.
# Ogni meccanismo esiste in due versioni: la trascrizione diretta della
# definizione (suffisso _spec, scansioni quadratiche, nessuna struttura
# ausiliaria) e il controllo efficiente. Le due versioni non condividono codice.

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Generic, Optional, Sequence, Tuple, TypeVar

from concept_stlc.ident_maps import (
    DeclList,
    FinMap,
    Ident,
    Span,
    duplicate_ids,
    ids_are_unique,
    map_from_list,
)

logger = logging.getLogger(__name__)

Ctx = TypeVar("Ctx")
D = TypeVar("D")
S = TypeVar("S")


class CheckStrategy(Enum):
    INDEPENDENT = "independent"
    SEQUENTIAL = "sequential"
    RECURSIVE = "recursive"


class DiagCode(Enum):
    DUPLICATE_NAME = "duplicate-name"
    DECL_ILL_FORMED = "decl-ill-formed"
    MISSING_MEMBER = "missing-member"
    EXTRA_MEMBER = "extra-member"
    MEMBER_TYPE_MISMATCH = "member-type-mismatch"
    UNBOUND_REFERENCE = "unbound-reference"


@dataclass(frozen=True)
class Diagnostic:
    code: DiagCode
    subject: Ident
    message: str
    location: Optional[Span] = None

    def __post_init__(self):
        # In mancanza di una posizione esplicita si usa quella del soggetto
        if self.location is None and self.subject.span is not None:
            object.__setattr__(self, "location", self.subject.span)

    def key(self) -> Tuple[str, str]:
        return (self.code.value, self.subject.text)


@dataclass(frozen=True)
class CheckOutcome:
    """Esito di un controllo: ok se non ci sono diagnostiche, fallimento altrimenti."""
    diagnostics: Tuple[Diagnostic, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    @classmethod
    def success(cls) -> "CheckOutcome":
        return cls()

    @classmethod
    def failure(cls, diagnostics: Sequence[Diagnostic]) -> "CheckOutcome":
        if not diagnostics:
            raise ValueError("Un fallimento deve portare almeno una diagnostica.")
        return cls(tuple(diagnostics))

    def keys(self) -> Counter:
        """Multinsieme delle coppie (codice, soggetto)."""
        return Counter(d.key() for d in self.diagnostics)

    def __add__(self, other: "CheckOutcome") -> "CheckOutcome":
        return CheckOutcome(self.diagnostics + other.diagnostics)


OK = CheckOutcome()


class CheckError(Exception):
    """Errore di controllo che porta con sé l'esito fallito."""

    def __init__(self, outcome: CheckOutcome):
        super().__init__("; ".join(f"{d.code.value} {d.subject.text}: {d.message}" for d in outcome.diagnostics))
        self.outcome = outcome


def diagnostic(code: DiagCode, subject: Ident, message: str) -> Diagnostic:
    return Diagnostic(code=code, subject=subject, message=message)


@dataclass(frozen=True)
class DeclChecker(Generic[Ctx, D]):
    """
    Parametri astratti di una strategia: il predicato di buona definizione di una
    singola dichiarazione e l'estensione del contesto con una dichiarazione.
    """
    decl_ok: Callable[[Ctx, Ident, D], CheckOutcome]
    extend: Callable[[Ctx, Ident, D], Ctx]


@dataclass(frozen=True)
class CoverageMode:
    """
    Copertura di un'interfaccia: completa (ogni membro va implementato) o
    rilassata (i membri con implementazione di default possono mancare).
    """
    relaxed: bool = False
    defaults: frozenset = field(default_factory=frozenset)

    @classmethod
    def full(cls) -> "CoverageMode":
        return cls()

    @classmethod
    def relaxed_with(cls, defaults) -> "CoverageMode":
        return cls(relaxed=True, defaults=frozenset(defaults))

    def requires(self, name: Ident) -> bool:
        return not (self.relaxed and name in self.defaults)


def _duplicate_message(name: Ident) -> str:
    return f"Il nome '{name.text}' è dichiarato più volte."


# ---------------------------------------------------------------------------
# Definizioni di riferimento (oracolo)
# ---------------------------------------------------------------------------

def check_decls_spec(
    strategy: CheckStrategy,
    checker: DeclChecker,
    ctx,
    decls: DeclList,
) -> CheckOutcome:
    """
    Oracolo: trascrizione diretta di "nomi tutti distinti e ogni dichiarazione
    ben definita". I duplicati si trovano confrontando tutte le coppie e il
    contesto di ogni dichiarazione viene ricostruito riscandendo la lista.
    Le diagnostiche seguono l'ordine di sorgente, prima i duplicati.
    """
    diagnostics = []

    # Un nome è segnalato alla sua seconda occorrenza
    has_duplicates = False
    for i in range(len(decls)):
        earlier = 0
        for j in range(i):
            if decls[j][0] == decls[i][0]:
                earlier += 1
        if earlier == 1:
            has_duplicates = True
            diagnostics.append(diagnostic(DiagCode.DUPLICATE_NAME, decls[i][0], _duplicate_message(decls[i][0])))

    if strategy is CheckStrategy.RECURSIVE and has_duplicates:
        return CheckOutcome(tuple(diagnostics))

    for k in range(len(decls)):
        name, payload = decls[k]
        if strategy is CheckStrategy.INDEPENDENT:
            local = ctx
        elif strategy is CheckStrategy.SEQUENTIAL:
            local = ctx
            for j in range(k):
                local = checker.extend(local, decls[j][0], decls[j][1])
        else:
            local = ctx
            for j in range(len(decls)):
                local = checker.extend(local, decls[j][0], decls[j][1])
        diagnostics.extend(checker.decl_ok(local, name, payload).diagnostics)

    return CheckOutcome(tuple(diagnostics))


def check_impl_against_interface_spec(
    interface: DeclList,
    mode: CoverageMode,
    impl_names: Sequence[Ident],
    member_matches: Callable[[Ident, object], bool],
) -> CheckOutcome:
    """Oracolo della copertura di un'interfaccia, solo con scansioni di liste."""
    diagnostics = []
    for name, _ in interface:
        found = False
        for impl in impl_names:
            if impl == name:
                found = True
        if mode.requires(name) and not found:
            diagnostics.append(diagnostic(DiagCode.MISSING_MEMBER, name, f"Il membro '{name.text}' non è implementato."))
    for impl in impl_names:
        declared = None
        found = False
        for name, sig in interface:
            if name == impl and not found:
                declared = sig
                found = True
        if not found:
            diagnostics.append(diagnostic(DiagCode.EXTRA_MEMBER, impl, f"Il membro '{impl.text}' non appartiene all'interfaccia."))
        elif not member_matches(impl, declared):
            diagnostics.append(diagnostic(DiagCode.MEMBER_TYPE_MISMATCH, impl, f"Il membro '{impl.text}' non corrisponde alla dichiarazione."))
    return CheckOutcome(tuple(diagnostics))


# ---------------------------------------------------------------------------
# Controlli efficienti
# ---------------------------------------------------------------------------

def check_decls(
    strategy: CheckStrategy,
    checker: DeclChecker,
    ctx,
    decls: DeclList,
) -> CheckOutcome:
    """
    Controllo efficiente della buona definizione di una lista di dichiarazioni.

    Parameters:
    -----------
    strategy : CheckStrategy
        INDEPENDENT: ogni dichiarazione nel contesto esterno invariato.
        SEQUENTIAL: la dichiarazione k vede le dichiarazioni 1..k-1.
        RECURSIVE: ogni dichiarazione vede tutte le dichiarazioni del modulo.
    checker : DeclChecker
        Predicato per singola dichiarazione ed estensione del contesto.
    ctx : Ctx
        Contesto esterno.
    decls : DeclList
        Dichiarazioni grezze in ordine di sorgente.

    Returns:
    --------
    CheckOutcome
        Stessa decisione e stesso multinsieme (codice, soggetto) di check_decls_spec;
        l'ordine delle diagnostiche può differire.
    """
    names = [name for name, _ in decls]
    # i duplicati si elencano solo se il controllo di unicità fallisce
    duplicates = [] if ids_are_unique(names) else duplicate_ids(names)
    diagnostics = [diagnostic(DiagCode.DUPLICATE_NAME, name, _duplicate_message(name)) for name in duplicates]
    logger.debug("check_decls %s: %d dichiarazioni, %d duplicati", strategy.value, len(decls), len(duplicates))

    if strategy is CheckStrategy.INDEPENDENT:
        for name, payload in decls:
            diagnostics.extend(checker.decl_ok(ctx, name, payload).diagnostics)

    elif strategy is CheckStrategy.SEQUENTIAL:
        local = ctx
        for name, payload in decls:
            diagnostics.extend(checker.decl_ok(local, name, payload).diagnostics)
            local = checker.extend(local, name, payload)

    else:
        # Senza unicità il contesto locale completo sarebbe ambiguo
        if duplicates:
            return CheckOutcome(tuple(diagnostics))
        local = ctx
        for name, payload in map_from_list(decls).items():
            local = checker.extend(local, name, payload)
        for name, payload in decls:
            diagnostics.extend(checker.decl_ok(local, name, payload).diagnostics)

    return CheckOutcome(tuple(diagnostics))


def check_impl_against_interface(
    interface: FinMap,
    mode: CoverageMode,
    impl_names: Sequence[Ident],
    member_matches: Callable[[Ident, object], bool],
) -> CheckOutcome:
    """
    Verifica che un'implementazione copra la sua interfaccia.

    Segnala missing-member per ogni membro richiesto dalla modalità e non
    implementato, extra-member per ogni nome estraneo all'interfaccia e
    member-type-mismatch quando member_matches non vale. I nomi di impl_names
    devono essere distinti.
    """
    implemented = set(impl_names)
    diagnostics = []
    for name in interface:
        if name not in implemented and mode.requires(name):
            diagnostics.append(diagnostic(DiagCode.MISSING_MEMBER, name, f"Il membro '{name.text}' non è implementato."))
    for impl in impl_names:
        declared = interface.get(impl)
        if impl not in interface:
            diagnostics.append(diagnostic(DiagCode.EXTRA_MEMBER, impl, f"Il membro '{impl.text}' non appartiene all'interfaccia."))
        elif not member_matches(impl, declared):
            diagnostics.append(diagnostic(DiagCode.MEMBER_TYPE_MISMATCH, impl, f"Il membro '{impl.text}' non corrisponde alla dichiarazione."))
    return CheckOutcome(tuple(diagnostics))
