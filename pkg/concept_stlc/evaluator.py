# concept_stlc/evaluator.py

import logging
from dataclasses import dataclass
from typing import Optional, Union

from concept_stlc.ident_maps import FinMap, Ident
from concept_stlc.syntax import (
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
    free_vars,
)

logger = logging.getLogger(__name__)


def is_value(t: Term) -> bool:
    return isinstance(t, (TmTrue, TmFalse, TmNat, TmAbs, TmCAbs))


def model_ref(model: Ident) -> TmVar:
    """Riferimento a un model come termine sostituibile al posto di una variabile di concept."""
    return TmVar(model)


def substitute_env(env: FinMap, t: Term) -> Term:
    """
    Sostituzione simultanea [x1 -> s1, ..., xn -> sn]t in un solo attraversamento.

    I termini s1 ... sn sono chiusi rispetto alle variabili ma possono nominare dei model
    (riferimenti TmVar(M) e ricevitori M::f): un binder con uno di quei nomi
    viene rinominato con un nome fresco prima di scendere nel suo corpo.
    Se si sostituisce il riferimento a un model M alla variabile di concept c,
    c::f diventa M::f.
    """
    if not len(env):
        return t
    avoid = frozenset().union(*(free_vars(value) for value in env.values()))
    return _substitute(env, avoid, t)


def _fresh(name: Ident, taken) -> Ident:
    candidate = Ident(name.text + "'")
    while candidate in taken:
        candidate = Ident(candidate.text + "'")
    return candidate


def _enter_binder(env: FinMap, avoid: frozenset, x: Ident, body: Term):
    """Binder e sostituzione da usare nel corpo di un binder x."""
    inner = _unbind(env, x)
    if not len(inner) or x not in avoid:
        return x, inner, avoid
    fresh = _fresh(x, avoid | free_vars(body) | set(inner))
    return fresh, inner.insert(x, TmVar(fresh)), avoid | {fresh}


def _substitute(env: FinMap, avoid: frozenset, t: Term) -> Term:
    if not len(env):
        return t
    if isinstance(t, TmVar):
        return env.get(t.x, t)
    if isinstance(t, TmCInvk):
        replacement = env.get(t.recv)
        if isinstance(replacement, TmVar):
            return TmCInvk(replacement.x, t.member)
        return t
    if isinstance(t, TmAbs):
        x, inner, inner_avoid = _enter_binder(env, avoid, t.x, t.body)
        return TmAbs(x, t.ann, _substitute(inner, inner_avoid, t.body))
    if isinstance(t, TmCAbs):
        c, inner, inner_avoid = _enter_binder(env, avoid, t.c, t.body)
        return TmCAbs(c, t.concept, _substitute(inner, inner_avoid, t.body))
    if isinstance(t, TmLet):
        x, inner, inner_avoid = _enter_binder(env, avoid, t.x, t.body)
        return TmLet(x, _substitute(env, avoid, t.bound), _substitute(inner, inner_avoid, t.body))
    if isinstance(t, TmApp):
        return TmApp(_substitute(env, avoid, t.fn), _substitute(env, avoid, t.arg))
    if isinstance(t, TmMApp):
        return TmMApp(_substitute(env, avoid, t.fn), t.model)
    if isinstance(t, TmIf):
        return TmIf(_substitute(env, avoid, t.cond), _substitute(env, avoid, t.then_branch),
                    _substitute(env, avoid, t.else_branch))
    if isinstance(t, TmSucc):
        return TmSucc(_substitute(env, avoid, t.t))
    if isinstance(t, TmPred):
        return TmPred(_substitute(env, avoid, t.t))
    if isinstance(t, TmIsZero):
        return TmIsZero(_substitute(env, avoid, t.t))
    if isinstance(t, TmPlus):
        return TmPlus(_substitute(env, avoid, t.left), _substitute(env, avoid, t.right))
    return t


def _unbind(env: FinMap, name: Ident) -> FinMap:
    if name not in env:
        return env
    return FinMap.from_items([(key, value) for key, value in env.items() if key != name])


def substitute(x: Ident, s: Term, t: Term) -> Term:
    """[x -> s]t con s chiuso."""
    return substitute_env(FinMap.empty().insert(x, s), t)


def step(mt, t: Term) -> Optional[Term]:
    """
    Un passo di riduzione call-by-value, da sinistra a destra.

    Restituisce None se t è un valore oppure se nessuna regola si applica (t bloccato).
    mt è la ModelTable da cui si risolvono le invocazioni M::f.
    """
    if isinstance(t, TmApp):
        if not is_value(t.fn):
            fn = step(mt, t.fn)
            return TmApp(fn, t.arg) if fn is not None else None
        if not is_value(t.arg):
            arg = step(mt, t.arg)
            return TmApp(t.fn, arg) if arg is not None else None
        if isinstance(t.fn, TmAbs):
            return substitute(t.fn.x, t.arg, t.fn.body)
        return None

    if isinstance(t, TmMApp):
        if not is_value(t.fn):
            fn = step(mt, t.fn)
            return TmMApp(fn, t.model) if fn is not None else None
        if isinstance(t.fn, TmCAbs):
            return substitute(t.fn.c, model_ref(t.model), t.fn.body)
        return None

    if isinstance(t, TmCInvk):
        entry = mt.get(t.recv)
        if entry is None:
            return None
        return entry.members.get(t.member)

    if isinstance(t, TmIf):
        if not is_value(t.cond):
            cond = step(mt, t.cond)
            return TmIf(cond, t.then_branch, t.else_branch) if cond is not None else None
        if isinstance(t.cond, TmTrue):
            return t.then_branch
        if isinstance(t.cond, TmFalse):
            return t.else_branch
        return None

    if isinstance(t, (TmSucc, TmPred, TmIsZero)):
        if not is_value(t.t):
            inner = step(mt, t.t)
            return type(t)(inner) if inner is not None else None
        if not isinstance(t.t, TmNat):
            return None
        n = t.t.n
        if isinstance(t, TmSucc):
            return TmNat(n + 1)
        if isinstance(t, TmPred):
            # predecessore troncato
            return TmNat(max(n - 1, 0))
        return TmTrue() if n == 0 else TmFalse()

    if isinstance(t, TmPlus):
        if not is_value(t.left):
            left = step(mt, t.left)
            return TmPlus(left, t.right) if left is not None else None
        if not is_value(t.right):
            right = step(mt, t.right)
            return TmPlus(t.left, right) if right is not None else None
        if isinstance(t.left, TmNat) and isinstance(t.right, TmNat):
            return TmNat(t.left.n + t.right.n)
        return None

    if isinstance(t, TmLet):
        if not is_value(t.bound):
            bound = step(mt, t.bound)
            return TmLet(t.x, bound, t.body) if bound is not None else None
        return substitute(t.x, t.bound, t.body)

    return None


@dataclass(frozen=True)
class Converged:
    value: Term
    steps: int


@dataclass(frozen=True)
class Stuck:
    term: Term
    steps: int


@dataclass(frozen=True)
class OutOfFuel:
    term: Term
    steps: int


EvalResult = Union[Converged, Stuck, OutOfFuel]


def evaluate(mt, t: Term, fuel: int) -> EvalResult:
    """
    Itera step al più fuel volte.

    Returns:
    --------
    EvalResult
        Converged se si raggiunge un valore, Stuck se un non-valore non riduce,
        OutOfFuel se il budget si esaurisce prima.
    """
    if fuel < 0:
        raise ValueError(f"Il budget di passi deve essere non negativo, ricevuto {fuel}.")
    steps = 0
    while steps < fuel:
        if is_value(t):
            return Converged(t, steps)
        nxt = step(mt, t)
        if nxt is None:
            logger.debug("evaluate: bloccato dopo %d passi", steps)
            return Stuck(t, steps)
        t = nxt
        steps += 1
    if is_value(t):
        return Converged(t, steps)
    logger.debug("evaluate: budget di %d passi esaurito", fuel)
    return OutOfFuel(t, steps)


def trace(mt, t: Term, fuel: int) -> list[Term]:
    """Termini intermedi t0 = t, t1, ..., tk visitati da evaluate con lo stesso budget."""
    terms = [t]
    while len(terms) - 1 < fuel and not is_value(terms[-1]):
        nxt = step(mt, terms[-1])
        if nxt is None:
            break
        terms.append(nxt)
    return terms
