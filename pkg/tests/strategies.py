# tests/strategies.py
#
# Generatori hypothesis condivisi: liste di dichiarazioni, alberi sintattici
# arbitrari, programmi ben tipati costruiti a partire dal tipo e loro mutazioni.

from hypothesis import strategies as st
from hypothesis.strategies import DrawFn, composite

from concept_stlc.ident_maps import Ident
from concept_stlc.syntax import (
    ConceptDef,
    ModelDef,
    Program,
    TArrow,
    TBool,
    TConceptPrm,
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
)

# Alfabeto di 10 chiavi per le liste di dichiarazioni
KEYS = [Ident(text) for text in "abcdefghij"]

# Nomi per gli alberi arbitrari (nessuna parola riservata)
NAMES = [Ident(text) for text in ("x", "y", "f", "c", "M", "CMon", "n1", "tmp_'", "iffy", "Nat2")]

# Nomi per i programmi generati; i binder possono riusare i nomi dei model
TERM_VARS = [Ident(text) for text in ("x", "y", "z", "w")]
CONCEPT_VARS = [Ident(text) for text in ("c", "d")]
MEMBER_NAMES = [Ident(text) for text in ("f", "g", "h", "k", "op")]
CONCEPT_NAMES = [Ident(f"C{i}") for i in range(5)]
MODEL_NAMES = [Ident(f"M{i}") for i in range(5)]
TERM_BINDERS = TERM_VARS + MODEL_NAMES[:2]
CONCEPT_BINDERS = CONCEPT_VARS + MODEL_NAMES[:2]
UNKNOWN = Ident("unknown")

BASE_TYPES = [TNat(), TBool()]
SIMPLE_TYPES = BASE_TYPES + [
    TArrow(TNat(), TNat()),
    TArrow(TNat(), TBool()),
    TArrow(TBool(), TNat()),
    TArrow(TNat(), TArrow(TNat(), TNat())),
]

keys = st.sampled_from(KEYS)


@composite
def decl_lists(draw: DrawFn, payloads=st.integers(0, 20), max_size: int = 50):
    return draw(st.lists(st.tuples(keys, payloads), max_size=max_size))


@composite
def ident_lists(draw: DrawFn, max_size: int = 50):
    return draw(st.lists(keys, max_size=max_size))


# ---------------------------------------------------------------------------
# Alberi sintattici arbitrari (non necessariamente ben tipati)
# ---------------------------------------------------------------------------

names = st.sampled_from(NAMES)


def types(max_leaves: int = 6):
    return st.recursive(
        st.sampled_from(BASE_TYPES),
        lambda inner: st.one_of(
            st.builds(TArrow, inner, inner),
            st.builds(TConceptPrm, names, inner),
        ),
        max_leaves=max_leaves,
    )


def terms(max_leaves: int = 12):
    leaves = st.one_of(
        st.builds(TmVar, names),
        st.builds(TmCInvk, names, names),
        st.just(TmTrue()),
        st.just(TmFalse()),
        st.builds(TmNat, st.integers(0, 10**20)),
    )
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(TmAbs, names, types(3), inner),
            st.builds(TmApp, inner, inner),
            st.builds(TmCAbs, names, names, inner),
            st.builds(TmMApp, inner, names),
            st.builds(TmIf, inner, inner, inner),
            st.builds(TmSucc, inner),
            st.builds(TmPred, inner),
            st.builds(TmIsZero, inner),
            st.builds(TmPlus, inner, inner),
            st.builds(TmLet, names, inner, inner),
        ),
        max_leaves=max_leaves,
    )


@composite
def programs(draw: DrawFn):
    """Programmi sintatticamente validi con nomi e strutture arbitrari."""
    concepts = draw(st.lists(
        st.builds(ConceptDef, names, st.lists(st.tuples(names, types(4)), max_size=3).map(tuple)),
        max_size=2,
    ))
    models = draw(st.lists(
        st.builds(ModelDef, names, names, st.lists(st.tuples(names, terms(6)), max_size=3).map(tuple)),
        max_size=2,
    ))
    return Program(tuple(concepts), tuple(models), draw(terms()))


# ---------------------------------------------------------------------------
# Programmi ben tipati, generati a partire dal tipo richiesto
# ---------------------------------------------------------------------------

class _Scope:
    """Ambiente di generazione: concept, model e binding visibili."""

    def __init__(self, concepts, models, term_vars=(), concept_vars=()):
        self.concepts = concepts          # lista di (nome, [(membro, tipo)])
        self.models = models              # lista di (nome, concept)
        self.term_vars = list(term_vars)  # lista di (nome, tipo), l'ultimo vince
        self.concept_vars = list(concept_vars)

    def with_term_var(self, name, ty):
        visible = [(n, t) for n, t in self.term_vars if n != name] + [(name, ty)]
        concept_vars = [(n, c) for n, c in self.concept_vars if n != name]
        return _Scope(self.concepts, self.models, visible, concept_vars)

    def with_concept_var(self, name, concept):
        term_vars = [(n, t) for n, t in self.term_vars if n != name]
        visible = [(n, c) for n, c in self.concept_vars if n != name] + [(name, concept)]
        return _Scope(self.concepts, self.models, term_vars, visible)

    def visible_models(self):
        # un binder con lo stesso nome nasconde il model come ricevitore
        bound = {n for n, _ in self.term_vars} | {n for n, _ in self.concept_vars}
        return [(m, c) for m, c in self.models if m not in bound]

    def members_of(self, concept):
        for name, members in self.concepts:
            if name == concept:
                return members
        return []


def _leaf_candidates(scope: _Scope, ty):
    found = [TmVar(name) for name, var_ty in scope.term_vars if var_ty == ty]
    receivers = list(scope.concept_vars) + scope.visible_models()
    for recv, concept in receivers:
        found += [TmCInvk(recv, member) for member, member_ty in scope.members_of(concept) if member_ty == ty]
    if ty == TNat():
        found.append(TmNat(0))
    if ty == TBool():
        found += [TmTrue(), TmFalse()]
    return found


@composite
def typed_terms(draw: DrawFn, scope: _Scope, ty, depth: int):
    """Un termine chiuso rispetto a scope che ha tipo ty."""
    leaves = _leaf_candidates(scope, ty)
    if depth <= 0 or (leaves and draw(st.integers(0, 3)) == 0):
        if leaves:
            return draw(st.sampled_from(leaves))
        return draw(_introduction(scope, ty, 0))

    options = ["intro", "if", "let", "app"]
    if ty == TNat():
        options += ["nat", "succ", "pred", "plus"]
    if ty == TBool():
        options += ["iszero"]
    model_concepts = {concept for _, concept in scope.models}
    if model_concepts:
        options.append("mapp")
    choice = draw(st.sampled_from(options))
    sub = depth - 1

    if choice == "intro":
        return draw(_introduction(scope, ty, sub))
    if choice == "if":
        return TmIf(draw(typed_terms(scope, TBool(), sub)), draw(typed_terms(scope, ty, sub)),
                    draw(typed_terms(scope, ty, sub)))
    if choice == "let":
        bound_ty = draw(st.sampled_from(SIMPLE_TYPES))
        x = draw(st.sampled_from(TERM_BINDERS))
        return TmLet(x, draw(typed_terms(scope, bound_ty, sub)), draw(typed_terms(scope.with_term_var(x, bound_ty), ty, sub)))
    if choice == "app":
        arg_ty = draw(st.sampled_from(BASE_TYPES))
        return TmApp(draw(typed_terms(scope, TArrow(arg_ty, ty), sub)), draw(typed_terms(scope, arg_ty, sub)))
    if choice == "mapp":
        model, concept = draw(st.sampled_from(scope.models))
        return TmMApp(draw(typed_terms(scope, TConceptPrm(concept, ty), sub)), model)
    if choice == "nat":
        return TmNat(draw(st.integers(0, 5)))
    if choice in ("succ", "pred"):
        inner = draw(typed_terms(scope, TNat(), sub))
        return TmSucc(inner) if choice == "succ" else TmPred(inner)
    if choice == "plus":
        return TmPlus(draw(typed_terms(scope, TNat(), sub)), draw(typed_terms(scope, TNat(), sub)))
    return TmIsZero(draw(typed_terms(scope, TNat(), sub)))


@composite
def _introduction(draw: DrawFn, scope: _Scope, ty, depth: int):
    if isinstance(ty, TArrow):
        x = draw(st.sampled_from(TERM_BINDERS))
        return TmAbs(x, ty.dom, draw(typed_terms(scope.with_term_var(x, ty.dom), ty.cod, depth)))
    if isinstance(ty, TConceptPrm):
        c = draw(st.sampled_from(CONCEPT_BINDERS))
        return TmCAbs(c, ty.concept, draw(typed_terms(scope.with_concept_var(c, ty.concept), ty.body, depth)))
    if ty == TNat():
        return TmNat(draw(st.integers(0, 5)))
    return draw(st.sampled_from([TmTrue(), TmFalse()]))


@composite
def member_types(draw: DrawFn, earlier_concepts):
    if earlier_concepts and draw(st.integers(0, 4)) == 0:
        return TConceptPrm(draw(st.sampled_from(earlier_concepts)), draw(st.sampled_from(BASE_TYPES)))
    return draw(st.sampled_from(SIMPLE_TYPES))


@composite
def well_typed_programs(draw: DrawFn, max_depth: int = 4):
    """Programmi accettati da check_program per costruzione."""
    concepts = []
    for name in CONCEPT_NAMES[:draw(st.integers(0, 3))]:
        count = draw(st.integers(1, 4))
        member_names = draw(st.permutations(MEMBER_NAMES))[:count]
        earlier = [n for n, _ in concepts]
        concepts.append((name, [(m, draw(member_types(earlier))) for m in member_names]))

    models = []
    model_defs = []
    if concepts:
        for name in MODEL_NAMES[:draw(st.integers(0, 3))]:
            concept, members = draw(st.sampled_from(concepts))
            scope = _Scope(concepts, models)
            bodies = []
            for member, member_ty in members:
                body = draw(typed_terms(scope, member_ty, draw(st.integers(0, 2))))
                bodies.append((member, body))
                scope = scope.with_term_var(member, member_ty)
            model_defs.append(ModelDef(name, concept, tuple(bodies)))
            models.append((name, concept))

    main_types = list(SIMPLE_TYPES)
    main_types += [TConceptPrm(name, TNat()) for name, _ in concepts]
    main_ty = draw(st.sampled_from(main_types))
    main = draw(typed_terms(_Scope(concepts, models), main_ty, draw(st.integers(0, max_depth))))

    concept_defs = tuple(ConceptDef(name, tuple(members)) for name, members in concepts)
    return Program(concept_defs, tuple(model_defs), main)


# ---------------------------------------------------------------------------
# Mutazioni che rendono (di solito) il programma mal formato
# ---------------------------------------------------------------------------

def _replace_main(p: Program, main) -> Program:
    return Program(p.concepts, p.models, main)


@composite
def mutated_programs(draw: DrawFn):
    p = draw(well_typed_programs())
    kind = draw(st.sampled_from([
        "dup_concept", "dup_model", "dup_member", "drop_member", "extra_member",
        "bad_main", "unbound_main", "swap_concepts", "wrong_concept", "none",
    ]))

    if kind == "dup_concept" and p.concepts:
        return Program(p.concepts + (draw(st.sampled_from(p.concepts)),), p.models, p.main)
    if kind == "dup_model" and p.models:
        return Program(p.concepts, p.models + (draw(st.sampled_from(p.models)),), p.main)
    if kind == "dup_member" and p.models:
        i = draw(st.integers(0, len(p.models) - 1))
        md = p.models[i]
        dup = ModelDef(md.name, md.concept, md.members + (md.members[0],))
        return Program(p.concepts, p.models[:i] + (dup,) + p.models[i + 1:], p.main)
    if kind == "drop_member" and p.models:
        i = draw(st.integers(0, len(p.models) - 1))
        md = p.models[i]
        j = draw(st.integers(0, len(md.members) - 1))
        shorter = ModelDef(md.name, md.concept, md.members[:j] + md.members[j + 1:])
        return Program(p.concepts, p.models[:i] + (shorter,) + p.models[i + 1:], p.main)
    if kind == "extra_member" and p.models:
        i = draw(st.integers(0, len(p.models) - 1))
        md = p.models[i]
        longer = ModelDef(md.name, md.concept, md.members + ((Ident("extra"), TmNat(1)),))
        return Program(p.concepts, p.models[:i] + (longer,) + p.models[i + 1:], p.main)
    if kind == "bad_main":
        bad = draw(st.sampled_from([
            TmApp(TmTrue(), TmNat(0)),
            TmSucc(TmTrue()),
            TmIf(TmNat(1), TmTrue(), TmFalse()),
            TmIf(TmTrue(), TmNat(1), TmFalse()),
            TmPlus(TmNat(1), TmFalse()),
            TmMApp(TmNat(0), UNKNOWN),
            TmAbs(Ident("x"), TConceptPrm(UNKNOWN, TNat()), TmVar(Ident("x"))),
            TmCAbs(Ident("c"), CONCEPT_NAMES[0], TmVar(Ident("c"))),
        ]))
        return _replace_main(p, draw(st.sampled_from([bad, TmLet(Ident("x"), p.main, bad), TmApp(bad, p.main)])))
    if kind == "unbound_main":
        return _replace_main(p, TmPlus(TmVar(UNKNOWN), TmCInvk(UNKNOWN, MEMBER_NAMES[0])))
    if kind == "swap_concepts" and len(p.concepts) >= 2:
        return Program(tuple(reversed(p.concepts)), p.models, p.main)
    if kind == "wrong_concept" and p.models:
        i = draw(st.integers(0, len(p.models) - 1))
        md = p.models[i]
        other = ModelDef(md.name, draw(st.sampled_from(CONCEPT_NAMES + [UNKNOWN])), md.members)
        return Program(p.concepts, p.models[:i] + (other,) + p.models[i + 1:], p.main)
    return p


def checker_programs():
    """Programmi misti, validi e non validi, per il confronto tra le due pipeline."""
    return st.one_of(well_typed_programs(), mutated_programs(), programs())
