# concept_stlc/typecheck_ref.py
#
# Pipeline di riferimento: stessa tipizzazione di typecheck, ma i contesti sono
# liste grezze consultate solo con list_assoc_lookup e scansioni lineari, e le
# sezioni sono controllate con gli oracoli del framework.

from typing import Sequence, Tuple

from concept_stlc.ident_maps import DeclList, Ident, list_assoc_lookup
from concept_stlc.modcheck import (
    OK,
    CheckError,
    CheckOutcome,
    CheckStrategy,
    CoverageMode,
    DeclChecker,
    DiagCode,
    check_decls_spec,
    check_impl_against_interface_spec,
    diagnostic,
)
from concept_stlc.syntax import (
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
)
from concept_stlc.typecheck import MAIN, ConceptVar, TermVar, TypingError

# Γ come lista ordinata di coppie (nome, binding)
RefCtx = Sequence[Tuple[Ident, object]]


def _lookup_rightmost(gamma: RefCtx, name: Ident):
    for i in range(len(gamma) - 1, -1, -1):
        if gamma[i][0] == name:
            return gamma[i][1]
    return None


def well_formed_type_ref(ct_list: DeclList, ty: Ty) -> CheckOutcome:
    if isinstance(ty, TArrow):
        return well_formed_type_ref(ct_list, ty.dom) + well_formed_type_ref(ct_list, ty.cod)
    if isinstance(ty, TConceptPrm):
        here = OK
        if list_assoc_lookup(ct_list, ty.concept) is None:
            here = CheckOutcome.failure([diagnostic(DiagCode.UNBOUND_REFERENCE, ty.concept, "concept non definito")])
        return here + well_formed_type_ref(ct_list, ty.body)
    return OK


def _first_ill_formed(ct_list: DeclList, ty: Ty) -> None:
    outcome = well_formed_type_ref(ct_list, ty)
    if not outcome.ok:
        d = outcome.diagnostics[0]
        raise TypingError(d.code, d.subject, d.message)


def type_of_ref(ct_list: DeclList, mt_list: DeclList, gamma: RefCtx, t: Term, owner: Ident = MAIN) -> Ty:
    """Tipizzazione di riferimento su contesti a lista; stesse regole e stesso ordine delle premesse di type_of."""
    if isinstance(t, (TmTrue, TmFalse)):
        return TBool()
    if isinstance(t, TmNat):
        return TNat()

    if isinstance(t, TmVar):
        b = _lookup_rightmost(gamma, t.x)
        if b is None:
            raise TypingError(DiagCode.UNBOUND_REFERENCE, t.x, "variabile non definita")
        if isinstance(b, ConceptVar):
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, t.x, "variabile di concept usata come termine")
        return b.ty

    if isinstance(t, TmAbs):
        _first_ill_formed(ct_list, t.ann)
        return TArrow(t.ann, type_of_ref(ct_list, mt_list, list(gamma) + [(t.x, TermVar(t.ann))], t.body, owner))

    if isinstance(t, TmApp):
        f = type_of_ref(ct_list, mt_list, gamma, t.fn, owner)
        a = type_of_ref(ct_list, mt_list, gamma, t.arg, owner)
        if not isinstance(f, TArrow):
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "funzione attesa")
        if f.dom != a:
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "tipo dell'argomento errato")
        return f.cod

    if isinstance(t, TmCAbs):
        if list_assoc_lookup(ct_list, t.concept) is None:
            raise TypingError(DiagCode.UNBOUND_REFERENCE, t.concept, "concept non definito")
        body = type_of_ref(ct_list, mt_list, list(gamma) + [(t.c, ConceptVar(t.concept))], t.body, owner)
        result = TConceptPrm(t.concept, body)
        _first_ill_formed(ct_list, result)
        return result

    if isinstance(t, TmMApp):
        f = type_of_ref(ct_list, mt_list, gamma, t.fn, owner)
        md = list_assoc_lookup(mt_list, t.model)
        if md is None:
            raise TypingError(DiagCode.UNBOUND_REFERENCE, t.model, "model non definito")
        if not isinstance(f, TConceptPrm):
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "astrazione su concept attesa")
        if md.concept != f.concept:
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, t.model, "model di un altro concept")
        return f.body

    if isinstance(t, TmCInvk):
        b = _lookup_rightmost(gamma, t.recv)
        if b is not None:
            if isinstance(b, TermVar):
                raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, t.recv, "variabile di concept attesa")
            concept = b.concept
        else:
            md = list_assoc_lookup(mt_list, t.recv)
            if md is None:
                raise TypingError(DiagCode.UNBOUND_REFERENCE, t.recv, "model o variabile di concept non definito")
            concept = md.concept
        members = list_assoc_lookup(ct_list, concept)
        if members is None:
            raise TypingError(DiagCode.UNBOUND_REFERENCE, concept, "concept non definito")
        ty = list_assoc_lookup(members, t.member)
        if ty is None:
            raise TypingError(DiagCode.UNBOUND_REFERENCE, t.member, "membro non definito")
        return ty

    if isinstance(t, TmIf):
        c = type_of_ref(ct_list, mt_list, gamma, t.cond, owner)
        a = type_of_ref(ct_list, mt_list, gamma, t.then_branch, owner)
        b = type_of_ref(ct_list, mt_list, gamma, t.else_branch, owner)
        if c != TBool():
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "condizione non booleana")
        if a != b:
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "rami di tipo diverso")
        return a

    if isinstance(t, (TmSucc, TmPred, TmIsZero)):
        if type_of_ref(ct_list, mt_list, gamma, t.t, owner) != TNat():
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "operando non naturale")
        return TBool() if isinstance(t, TmIsZero) else TNat()

    if isinstance(t, TmPlus):
        a = type_of_ref(ct_list, mt_list, gamma, t.left, owner)
        b = type_of_ref(ct_list, mt_list, gamma, t.right, owner)
        if a != TNat():
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "primo operando non naturale")
        if b != TNat():
            raise TypingError(DiagCode.MEMBER_TYPE_MISMATCH, owner, "secondo operando non naturale")
        return TNat()

    if isinstance(t, TmLet):
        bound = type_of_ref(ct_list, mt_list, gamma, t.bound, owner)
        return type_of_ref(ct_list, mt_list, list(gamma) + [(t.x, TermVar(bound))], t.body, owner)

    raise TypeError(f"Termine non riconosciuto: {t!r}")


def _outcome_of(thunk) -> CheckOutcome:
    try:
        thunk()
    except CheckError as err:
        return err.outcome
    return OK


def check_concept_def_ref(ct_list: DeclList, members: DeclList) -> None:
    def member_ok(ctx, name, ty):
        if well_formed_type_ref(ctx, ty).ok:
            return OK
        return CheckOutcome.failure([diagnostic(DiagCode.DECL_ILL_FORMED, name, "tipo mal formato")])

    outcome = check_decls_spec(CheckStrategy.INDEPENDENT, DeclChecker(member_ok, lambda c, n, d: c), ct_list, members)
    if not outcome.ok:
        raise CheckError(outcome)


def check_model_def_ref(ct_list: DeclList, mt_list: DeclList, md: ModelDef) -> None:
    interface = list_assoc_lookup(ct_list, md.concept)
    if interface is None:
        raise CheckError(CheckOutcome.failure([diagnostic(DiagCode.UNBOUND_REFERENCE, md.concept, "concept non definito")]))

    def member_ok(gamma, name, body):
        declared = list_assoc_lookup(interface, name)
        if declared is None:
            return OK
        try:
            actual = type_of_ref(ct_list, mt_list, gamma, body, owner=name)
        except CheckError as err:
            return err.outcome
        if actual != declared:
            return CheckOutcome.failure([diagnostic(DiagCode.MEMBER_TYPE_MISMATCH, name, "tipo diverso da quello dichiarato")])
        return OK

    def member_extend(gamma, name, _body):
        declared = list_assoc_lookup(interface, name)
        return gamma if declared is None else list(gamma) + [(name, TermVar(declared))]

    outcome = check_decls_spec(CheckStrategy.SEQUENTIAL, DeclChecker(member_ok, member_extend), [], md.members)

    names = []
    for name, _ in md.members:
        if all(name != seen for seen in names):
            names.append(name)
    outcome = outcome + check_impl_against_interface_spec(interface, CoverageMode.full(), names, lambda n, s: True)
    if not outcome.ok:
        raise CheckError(outcome)


def check_program_ref(p: Program) -> Ty:
    """Pipeline di riferimento completa; restituisce il tipo del termine principale o solleva CheckError."""
    concepts = [(cd.name, cd.members) for cd in p.concepts]
    concept_checker = DeclChecker(
        decl_ok=lambda ctx, name, members: _outcome_of(lambda: check_concept_def_ref(ctx, members)),
        extend=lambda ctx, name, members: list(ctx) + [(name, members)],
    )
    outcome = check_decls_spec(CheckStrategy.SEQUENTIAL, concept_checker, [], concepts)
    if not outcome.ok:
        raise CheckError(outcome)

    models = [(md.name, md) for md in p.models]
    model_checker = DeclChecker(
        decl_ok=lambda ctx, name, md: _outcome_of(lambda: check_model_def_ref(concepts, ctx, md)),
        extend=lambda ctx, name, md: list(ctx) + [(name, md)],
    )
    outcome = check_decls_spec(CheckStrategy.SEQUENTIAL, model_checker, [], models)
    if not outcome.ok:
        raise CheckError(outcome)

    return type_of_ref(concepts, models, [], p.main, owner=MAIN)
