# concept_stlc/typecheck.py

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

from concept_stlc.config import MAIN_SUBJECT
from concept_stlc.evaluator import substitute_env
from concept_stlc.ident_maps import FinMap, Ident, map_from_list
from concept_stlc.modcheck import (
    OK,
    CheckError,
    CheckOutcome,
    CheckStrategy,
    CoverageMode,
    DeclChecker,
    DiagCode,
    check_decls,
    check_impl_against_interface,
    diagnostic,
)
from concept_stlc.syntax import (
    ConceptDef,
    ModelDef,
    Program,
    TArrow,
    TBool,
    TConceptPrm,
    Term,
    TmAbs,
    TmApp,
    TmCAbs,
    TmCInvk,
    TmFalse,
    TmIf,
    TmIsZero,
    TmLet,
    TmMApp,
    TmNat,
    TmPlus,
    TmPred,
    TmSucc,
    TmTrue,
    TmVar,
    TNat,
    Ty,
    pretty_type,
)

logger = logging.getLogger(__name__)

MAIN = Ident(MAIN_SUBJECT)


@dataclass(frozen=True)
class TermVar:
    ty: Ty


@dataclass(frozen=True)
class ConceptVar:
    concept: Ident


VarBinding = Union[TermVar, ConceptVar]


@dataclass(frozen=True)
class TyCtx:
    """Contesto Γ: a parità di nome vale il binding più interno (più a destra)."""
    bindings: FinMap = field(default_factory=FinMap.empty)

    @classmethod
    def empty(cls) -> "TyCtx":
        return cls()

    @classmethod
    def from_pairs(cls, pairs) -> "TyCtx":
        ctx = cls()
        for name, binding in pairs:
            ctx = ctx.extend(name, binding)
        return ctx

    def extend(self, name: Ident, binding: VarBinding) -> "TyCtx":
        return TyCtx(self.bindings.insert(name, binding))

    def lookup(self, name: Ident) -> Optional[VarBinding]:
        return self.bindings.get(name)


@dataclass(frozen=True)
class ConceptTable:
    """CT: nome del concept -> (nome del membro -> tipo dichiarato)."""
    bindings: FinMap = field(default_factory=FinMap.empty)

    def get(self, name: Ident) -> Optional[FinMap]:
        return self.bindings.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self.bindings

    def extend(self, name: Ident, members: FinMap) -> "ConceptTable":
        # a parità di nome resta il primo concept, come nella ricerca su lista
        return ConceptTable(self.bindings.insert(name, members, replace=False))


@dataclass(frozen=True)
class ModelEntry:
    concept: Ident
    members: FinMap


@dataclass(frozen=True)
class ModelTable:
    """MT: nome del model -> concept implementato e membri chiusi."""
    bindings: FinMap = field(default_factory=FinMap.empty)

    def get(self, name: Ident) -> Optional[ModelEntry]:
        return self.bindings.get(name)

    def __contains__(self, name: object) -> bool:
        return name in self.bindings

    def extend(self, name: Ident, entry: ModelEntry) -> "ModelTable":
        return ModelTable(self.bindings.insert(name, entry, replace=False))


@dataclass(frozen=True)
class CheckedProgram:
    ct: ConceptTable
    mt: ModelTable
    main_type: Ty


class TypingError(CheckError):
    """Premessa di una regola di tipizzazione violata; porta una sola diagnostica."""

    def __init__(self, code: DiagCode, subject: Ident, message: str):
        super().__init__(CheckOutcome.failure([diagnostic(code, subject, message)]))


def _unbound(name: Ident, what: str) -> TypingError:
    return TypingError(DiagCode.UNBOUND_REFERENCE, name, f"{what} '{name.text}' non definito.")


def _mismatch(subject: Ident, message: str) -> TypingError:
    return TypingError(DiagCode.MEMBER_TYPE_MISMATCH, subject, message)


def well_formed_type(ct: ConceptTable, ty: Ty) -> CheckOutcome:
    """Ok se ogni `C # τ` dentro ty nomina un concept presente in ct."""
    diagnostics = []

    def visit(node):
        if isinstance(node, TArrow):
            visit(node.dom)
            visit(node.cod)
        elif isinstance(node, TConceptPrm):
            if node.concept not in ct:
                diagnostics.append(diagnostic(
                    DiagCode.UNBOUND_REFERENCE, node.concept, f"Concept '{node.concept.text}' non definito."))
            visit(node.body)

    visit(ty)
    return CheckOutcome(tuple(diagnostics))


def _require_well_formed(ct: ConceptTable, ty: Ty) -> None:
    outcome = well_formed_type(ct, ty)
    if not outcome.ok:
        first = outcome.diagnostics[0]
        raise TypingError(first.code, first.subject, first.message)


def type_of(ct: ConceptTable, mt: ModelTable, ctx: TyCtx, t: Term, owner: Ident = MAIN) -> Ty:
    """
    Relazione di tipizzazione CT * MT ; Γ ⊢ t : τ, guidata dalla sintassi.

    Le sottoespressioni sono tipizzate da sinistra a destra e poi si verificano le
    condizioni della regola; le premesse che introducono binder (annotazione ben
    formata, concept esistente) precedono il corpo. Una violazione solleva
    TypingError; owner è il soggetto delle incongruenze senza un identificatore proprio.
    """
    if isinstance(t, TmTrue) or isinstance(t, TmFalse):
        return TBool()

    if isinstance(t, TmNat):
        return TNat()

    if isinstance(t, TmVar):
        binding = ctx.lookup(t.x)
        if binding is None:
            raise _unbound(t.x, "Variabile")
        if isinstance(binding, ConceptVar):
            raise _mismatch(t.x, f"La variabile di concept '{t.x.text}' è usata come termine.")
        return binding.ty

    if isinstance(t, TmAbs):
        _require_well_formed(ct, t.ann)
        body = type_of(ct, mt, ctx.extend(t.x, TermVar(t.ann)), t.body, owner)
        return TArrow(t.ann, body)

    if isinstance(t, TmApp):
        fn = type_of(ct, mt, ctx, t.fn, owner)
        arg = type_of(ct, mt, ctx, t.arg, owner)
        if not isinstance(fn, TArrow):
            raise _mismatch(owner, f"Applicazione di un termine di tipo {pretty_type(fn)}, che non è una funzione.")
        if fn.dom != arg:
            raise _mismatch(owner, f"Argomento di tipo {pretty_type(arg)}, atteso {pretty_type(fn.dom)}.")
        return fn.cod

    if isinstance(t, TmCAbs):
        if t.concept not in ct:
            raise _unbound(t.concept, "Concept")
        body = type_of(ct, mt, ctx.extend(t.c, ConceptVar(t.concept)), t.body, owner)
        result = TConceptPrm(t.concept, body)
        _require_well_formed(ct, result)
        return result

    if isinstance(t, TmMApp):
        fn = type_of(ct, mt, ctx, t.fn, owner)
        entry = mt.get(t.model)
        if entry is None:
            raise _unbound(t.model, "Model")
        if not isinstance(fn, TConceptPrm):
            raise _mismatch(owner, f"Applicazione del model '{t.model.text}' a un termine di tipo {pretty_type(fn)}.")
        if entry.concept != fn.concept:
            raise _mismatch(t.model, f"Il model '{t.model.text}' implementa '{entry.concept.text}', "
                                     f"atteso '{fn.concept.text}'.")
        return fn.body

    if isinstance(t, TmCInvk):
        binding = ctx.lookup(t.recv)
        if binding is not None:
            if isinstance(binding, TermVar):
                raise _mismatch(t.recv, f"'{t.recv.text}' non è una variabile di concept.")
            concept = binding.concept
        else:
            entry = mt.get(t.recv)
            if entry is None:
                raise _unbound(t.recv, "Model o variabile di concept")
            concept = entry.concept
        members = ct.get(concept)
        if members is None:
            raise _unbound(concept, "Concept")
        member = members.get(t.member)
        if member is None:
            raise _unbound(t.member, "Membro")
        return member

    if isinstance(t, TmIf):
        cond = type_of(ct, mt, ctx, t.cond, owner)
        then_ty = type_of(ct, mt, ctx, t.then_branch, owner)
        else_ty = type_of(ct, mt, ctx, t.else_branch, owner)
        if cond != TBool():
            raise _mismatch(owner, f"Condizione di tipo {pretty_type(cond)}, atteso Bool.")
        if then_ty != else_ty:
            raise _mismatch(owner, f"Rami di tipo diverso: {pretty_type(then_ty)} e {pretty_type(else_ty)}.")
        return then_ty

    if isinstance(t, (TmSucc, TmPred, TmIsZero)):
        inner = type_of(ct, mt, ctx, t.t, owner)
        if inner != TNat():
            raise _mismatch(owner, f"Operando di tipo {pretty_type(inner)}, atteso Nat.")
        return TBool() if isinstance(t, TmIsZero) else TNat()

    if isinstance(t, TmPlus):
        left = type_of(ct, mt, ctx, t.left, owner)
        right = type_of(ct, mt, ctx, t.right, owner)
        if left != TNat():
            raise _mismatch(owner, f"Primo operando di plus di tipo {pretty_type(left)}, atteso Nat.")
        if right != TNat():
            raise _mismatch(owner, f"Secondo operando di plus di tipo {pretty_type(right)}, atteso Nat.")
        return TNat()

    if isinstance(t, TmLet):
        bound = type_of(ct, mt, ctx, t.bound, owner)
        return type_of(ct, mt, ctx.extend(t.x, TermVar(bound)), t.body, owner)

    raise TypeError(f"Termine non riconosciuto: {t!r}")


def _as_outcome(thunk) -> CheckOutcome:
    try:
        thunk()
    except CheckError as err:
        return err.outcome
    return OK


def check_concept_def(ct: ConceptTable, cd: ConceptDef) -> FinMap:
    """
    Controlla un concept: nomi dei membri distinti e tipi ben formati rispetto a ct.
    I membri non si vedono tra loro (strategia INDEPENDENT).

    Returns:
    --------
    FinMap
        Membro -> tipo dichiarato.

    Raises:
    -------
    CheckError
        duplicate-name oppure decl-ill-formed per i membri con concept non definiti.
    """
    def member_ok(table: ConceptTable, name: Ident, ty: Ty) -> CheckOutcome:
        outcome = well_formed_type(table, ty)
        if outcome.ok:
            return OK
        missing = ", ".join(d.subject.text for d in outcome.diagnostics)
        return CheckOutcome.failure([diagnostic(
            DiagCode.DECL_ILL_FORMED, name, f"Il tipo del membro '{name.text}' usa concept non definiti: {missing}.")])

    checker = DeclChecker(decl_ok=member_ok, extend=lambda table, _name, _ty: table)
    outcome = check_decls(CheckStrategy.INDEPENDENT, checker, ct, cd.members)
    if not outcome.ok:
        raise CheckError(outcome)
    return map_from_list(cd.members)


def close_members(members) -> list:
    """
    Rende chiusi i corpi dei membri di un model sostituendo in ciascuno i membri
    precedenti (già chiusi); a parità di nome vale la definizione più recente.
    """
    env = FinMap.empty()
    closed = []
    for name, body in members:
        term = substitute_env(env, body)
        env = env.insert(name, term)
        closed.append((name, term))
    return closed


def _model_entry(md: ModelDef) -> ModelEntry:
    return ModelEntry(md.concept, map_from_list(close_members(md.members)))


def check_model_def(ct: ConceptTable, mt: ModelTable, md: ModelDef) -> ModelEntry:
    """
    Controlla un model rispetto al suo concept.

    Ogni membro è tipizzato (strategia SEQUENTIAL) con i membri precedenti legati
    ai loro tipi DICHIARATI nel concept e deve avere esattamente il tipo dichiarato;
    poi si verifica la copertura completa dell'interfaccia.

    Returns:
    --------
    ModelEntry
        Concept implementato e membri chiusi.

    Raises:
    -------
    CheckError
        unbound-reference, duplicate-name, member-type-mismatch, missing-member, extra-member.
    """
    interface = ct.get(md.concept)
    if interface is None:
        raise CheckError(CheckOutcome.failure([diagnostic(
            DiagCode.UNBOUND_REFERENCE, md.concept, f"Concept '{md.concept.text}' non definito.")]))

    def member_ok(ctx: TyCtx, name: Ident, body: Term) -> CheckOutcome:
        declared = interface.get(name)
        if declared is None:
            # segnalato come extra-member dal controllo di copertura
            return OK
        try:
            actual = type_of(ct, mt, ctx, body, owner=name)
        except CheckError as err:
            return err.outcome
        if actual != declared:
            return CheckOutcome.failure([diagnostic(
                DiagCode.MEMBER_TYPE_MISMATCH, name,
                f"Il membro '{name.text}' ha tipo {pretty_type(actual)}, dichiarato {pretty_type(declared)}.")])
        return OK

    def member_extend(ctx: TyCtx, name: Ident, _body: Term) -> TyCtx:
        declared = interface.get(name)
        return ctx if declared is None else ctx.extend(name, TermVar(declared))

    checker = DeclChecker(decl_ok=member_ok, extend=member_extend)
    outcome = check_decls(CheckStrategy.SEQUENTIAL, checker, TyCtx.empty(), md.members)

    names = list(dict.fromkeys(name for name, _ in md.members))
    # i tipi sono già confrontati membro per membro nel passo sequenziale
    outcome = outcome + check_impl_against_interface(interface, CoverageMode.full(), names, lambda _n, _s: True)
    if not outcome.ok:
        raise CheckError(outcome)
    return _model_entry(md)


def check_program(p: Program) -> CheckedProgram:
    """
    Controlla un programma in tre fasi: sezione dei concept, sezione dei model,
    termine principale. La prima fase che fallisce interrompe il controllo.

    Returns:
    --------
    CheckedProgram
        Tabelle CT e MT e tipo del termine principale.
    """
    concept_checker = DeclChecker(
        decl_ok=lambda ct, _name, cd: _as_outcome(lambda: check_concept_def(ct, cd)),
        extend=lambda ct, name, cd: ct.extend(name, map_from_list(cd.members)),
    )
    concepts = [(cd.name, cd) for cd in p.concepts]
    outcome = check_decls(CheckStrategy.SEQUENTIAL, concept_checker, ConceptTable(), concepts)
    if not outcome.ok:
        raise CheckError(outcome)
    ct = ConceptTable()
    for name, cd in concepts:
        ct = concept_checker.extend(ct, name, cd)
    logger.debug("check_program: %d concept controllati", len(concepts))

    model_checker = DeclChecker(
        decl_ok=lambda mt, _name, md: _as_outcome(lambda: check_model_def(ct, mt, md)),
        extend=lambda mt, name, md: mt.extend(name, _model_entry(md)),
    )
    models = [(md.name, md) for md in p.models]
    outcome = check_decls(CheckStrategy.SEQUENTIAL, model_checker, ModelTable(), models)
    if not outcome.ok:
        raise CheckError(outcome)
    mt = ModelTable()
    for name, md in models:
        mt = model_checker.extend(mt, name, md)
    logger.debug("check_program: %d model controllati", len(models))

    main_type = type_of(ct, mt, TyCtx.empty(), p.main, owner=MAIN)
    return CheckedProgram(ct, mt, main_type)
