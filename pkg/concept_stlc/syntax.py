# concept_stlc/syntax.py

import logging
from dataclasses import dataclass, field, fields, is_dataclass
from functools import lru_cache
from typing import Any, Optional, Tuple, Union

from lark import Lark, Token, Transformer
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from concept_stlc.config import RESERVED_WORDS
from concept_stlc.ident_maps import Ident, Span

logger = logging.getLogger(__name__)


# --- Tipi ---

@dataclass(frozen=True)
class TBool:
    pass


@dataclass(frozen=True)
class TNat:
    pass


@dataclass(frozen=True)
class TArrow:
    dom: "Ty"
    cod: "Ty"


@dataclass(frozen=True)
class TConceptPrm:
    """Tipo di un'astrazione su concept: `C # body`."""
    concept: Ident
    body: "Ty"


Ty = Union[TBool, TNat, TArrow, TConceptPrm]


# --- Termini ---

@dataclass(frozen=True)
class TmVar:
    x: Ident


@dataclass(frozen=True)
class TmAbs:
    x: Ident
    ann: Ty
    body: "Term"


@dataclass(frozen=True)
class TmApp:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class TmCAbs:
    """Astrazione su concept `\\c # C. body`."""
    c: Ident
    concept: Ident
    body: "Term"


@dataclass(frozen=True)
class TmMApp:
    """Applicazione di un model `fn # M`."""
    fn: "Term"
    model: Ident


@dataclass(frozen=True)
class TmCInvk:
    """Invocazione di membro `recv::member` (recv è una variabile di concept o un model)."""
    recv: Ident
    member: Ident


@dataclass(frozen=True)
class TmTrue:
    pass


@dataclass(frozen=True)
class TmFalse:
    pass


@dataclass(frozen=True)
class TmIf:
    cond: "Term"
    then_branch: "Term"
    else_branch: "Term"


@dataclass(frozen=True)
class TmNat:
    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"Numerale non valido: {self.n!r}")


@dataclass(frozen=True)
class TmSucc:
    t: "Term"


@dataclass(frozen=True)
class TmPred:
    t: "Term"


@dataclass(frozen=True)
class TmIsZero:
    t: "Term"


@dataclass(frozen=True)
class TmPlus:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class TmLet:
    x: Ident
    bound: "Term"
    body: "Term"


Term = Union[
    TmVar, TmAbs, TmApp, TmCAbs, TmMApp, TmCInvk, TmTrue, TmFalse,
    TmIf, TmNat, TmSucc, TmPred, TmIsZero, TmPlus, TmLet
]

TYPE_CONSTRUCTORS = (TBool, TNat, TArrow, TConceptPrm)
TERM_CONSTRUCTORS = (
    TmVar, TmAbs, TmApp, TmCAbs, TmMApp, TmCInvk, TmTrue, TmFalse,
    TmIf, TmNat, TmSucc, TmPred, TmIsZero, TmPlus, TmLet
)


# --- Dichiarazioni ---

@dataclass(frozen=True)
class ConceptDef:
    name: Ident
    members: Tuple[Tuple[Ident, Ty], ...] = ()


@dataclass(frozen=True)
class ModelDef:
    name: Ident
    concept: Ident
    members: Tuple[Tuple[Ident, Term], ...] = ()


@dataclass(frozen=True)
class Program:
    concepts: Tuple[ConceptDef, ...] = ()
    models: Tuple[ModelDef, ...] = ()
    main: Term = field(default_factory=TmTrue)


def free_vars(t: Term) -> frozenset:
    """Variabili libere (di termine e di concept) di t."""
    if isinstance(t, TmVar):
        return frozenset({t.x})
    if isinstance(t, TmAbs):
        return free_vars(t.body) - {t.x}
    if isinstance(t, TmCAbs):
        return free_vars(t.body) - {t.c}
    if isinstance(t, TmLet):
        return free_vars(t.bound) | (free_vars(t.body) - {t.x})
    if isinstance(t, TmCInvk):
        return frozenset({t.recv})
    if isinstance(t, TmApp):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, TmMApp):
        return free_vars(t.fn)
    if isinstance(t, TmIf):
        return free_vars(t.cond) | free_vars(t.then_branch) | free_vars(t.else_branch)
    if isinstance(t, (TmSucc, TmPred, TmIsZero)):
        return free_vars(t.t)
    if isinstance(t, TmPlus):
        return free_vars(t.left) | free_vars(t.right)
    return frozenset()


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class ParseError(Exception):
    """Errore lessicale o sintattico con posizione e insieme dei token attesi."""

    def __init__(self, message: str, line: int, column: int, expected=frozenset(), token: Optional[str] = None):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        self.token = token


def _ident(token: Token) -> Ident:
    span = Span(token.line, token.column, getattr(token, "end_line", None), getattr(token, "end_column", None))
    return Ident(str(token), span)


class _ToAst(Transformer):
    # Tipi
    def t_bool(self, _):
        return TBool()

    def t_nat(self, _):
        return TNat()

    def t_arrow(self, children):
        return TArrow(children[0], children[1])

    def t_cprm(self, children):
        return TConceptPrm(_ident(children[0]), children[1])

    # Termini
    def tm_abs(self, children):
        return TmAbs(_ident(children[0]), children[1], children[2])

    def tm_cabs(self, children):
        return TmCAbs(_ident(children[0]), _ident(children[1]), children[2])

    def tm_let(self, children):
        return TmLet(_ident(children[0]), children[1], children[2])

    def tm_if(self, children):
        return TmIf(children[0], children[1], children[2])

    def tm_app(self, children):
        return TmApp(children[0], children[1])

    def tm_mapp(self, children):
        return TmMApp(children[0], _ident(children[1]))

    def tm_succ(self, children):
        return TmSucc(children[0])

    def tm_pred(self, children):
        return TmPred(children[0])

    def tm_iszero(self, children):
        return TmIsZero(children[0])

    def tm_plus(self, children):
        return TmPlus(children[0], children[1])

    def tm_true(self, _):
        return TmTrue()

    def tm_false(self, _):
        return TmFalse()

    def tm_nat(self, children):
        return TmNat(int(children[0]))

    def tm_cinvk(self, children):
        return TmCInvk(_ident(children[0]), _ident(children[1]))

    def tm_var(self, children):
        return TmVar(_ident(children[0]))

    # Dichiarazioni
    def nameddecl(self, children):
        return (_ident(children[0]), children[1])

    def namedef(self, children):
        return (_ident(children[0]), children[1])

    def conceptdef(self, children):
        return ConceptDef(_ident(children[0]), tuple(children[1:]))

    def modeldef(self, children):
        return ModelDef(_ident(children[0]), _ident(children[1]), tuple(children[2:]))

    def program(self, children):
        concepts = tuple(c for c in children[:-1] if isinstance(c, ConceptDef))
        models = tuple(m for m in children[:-1] if isinstance(m, ModelDef))
        return Program(concepts, models, children[-1])


@lru_cache(maxsize=1)
def _parser() -> Lark:
    # Earley: i membri di un model richiedono due token di lookahead (IDENT "=")
    return Lark.open("grammar.lark", rel_to=__file__, start="program", parser="earley", lexer="basic")


def _display_expected(parser: Lark, names) -> frozenset:
    shown = set()
    for name in names:
        try:
            pattern = parser.get_terminal(name).pattern
        except KeyError:
            shown.add(name)
            continue
        shown.add(pattern.value if pattern.type == "str" else name)
    return frozenset(shown)


def _end_position(source: str) -> Tuple[int, int]:
    lines = source.split("\n")
    return len(lines), len(lines[-1]) + 1


def parse(source: str) -> Program:
    """
    Analizza un programma concept-STLC.

    Parameters:
    -----------
    source : str
        Testo del programma.

    Returns:
    --------
    Program
        L'unico albero sintattico del programma.

    Raises:
    -------
    ParseError
        In caso di violazione lessicale o grammaticale, con riga, colonna e token attesi.
    """
    parser = _parser()
    try:
        tree = parser.parse(source)
    except UnexpectedCharacters as err:
        raise ParseError(
            f"Carattere inatteso {source[err.pos_in_stream]!r}.",
            err.line, err.column, _display_expected(parser, err.allowed or ()),
            token=source[err.pos_in_stream],
        ) from None
    except UnexpectedEOF as err:
        line, column = _end_position(source)
        raise ParseError(
            "Fine del testo inattesa.", line, column,
            _display_expected(parser, err.expected or ()), token="<eof>",
        ) from None
    except UnexpectedToken as err:
        token = err.token
        expected = _display_expected(parser, err.expected or ())
        if token.type == "$END":
            line, column = _end_position(source)
            raise ParseError("Fine del testo inattesa.", line, column, expected, token="<eof>") from None
        if str(token) in RESERVED_WORDS and "IDENT" in expected:
            message = f"La parola riservata '{token}' non può essere usata come identificatore."
        else:
            message = f"Token inatteso '{token}'."
        raise ParseError(message, token.line, token.column, expected, token=str(token)) from None
    except UnexpectedInput as err:
        raise ParseError(str(err), getattr(err, "line", 0), getattr(err, "column", 0)) from None

    program = _ToAst().transform(tree)
    logger.debug("parse: %d concept, %d model", len(program.concepts), len(program.models))
    return program


# ---------------------------------------------------------------------------
# Pretty printing
# ---------------------------------------------------------------------------

# Livelli di precedenza: un nodo viene parenthesizzato se il contesto richiede
# un livello più alto del suo
_TY_FULL, _TY_ARROW, _TY_ATOM = 0, 1, 2
_TM_FULL, _TM_APP, _TM_ATOM = 0, 1, 2


def _wrap(text: str, own: int, required: int) -> str:
    return f"({text})" if own < required else text


def _pp_type(ty: Ty, level: int) -> str:
    if isinstance(ty, TBool):
        return "Bool"
    if isinstance(ty, TNat):
        return "Nat"
    if isinstance(ty, TArrow):
        return _wrap(f"{_pp_type(ty.dom, _TY_ATOM)} -> {_pp_type(ty.cod, _TY_ARROW)}", _TY_ARROW, level)
    if isinstance(ty, TConceptPrm):
        return _wrap(f"{ty.concept} # {_pp_type(ty.body, _TY_FULL)}", _TY_FULL, level)
    raise TypeError(f"Tipo non riconosciuto: {ty!r}")


def _pp_term(t: Term, level: int) -> str:
    if isinstance(t, TmVar):
        return t.x.text
    if isinstance(t, TmTrue):
        return "true"
    if isinstance(t, TmFalse):
        return "false"
    if isinstance(t, TmNat):
        return str(t.n)
    if isinstance(t, TmCInvk):
        return f"{t.recv}::{t.member}"
    if isinstance(t, TmAbs):
        return _wrap(f"\\{t.x}:{_pp_type(t.ann, _TY_FULL)}. {_pp_term(t.body, _TM_FULL)}", _TM_FULL, level)
    if isinstance(t, TmCAbs):
        return _wrap(f"\\{t.c} # {t.concept}. {_pp_term(t.body, _TM_FULL)}", _TM_FULL, level)
    if isinstance(t, TmLet):
        text = f"let {t.x} = {_pp_term(t.bound, _TM_FULL)} in {_pp_term(t.body, _TM_FULL)}"
        return _wrap(text, _TM_FULL, level)
    if isinstance(t, TmIf):
        text = (f"if {_pp_term(t.cond, _TM_FULL)} then {_pp_term(t.then_branch, _TM_FULL)} "
                f"else {_pp_term(t.else_branch, _TM_FULL)}")
        return _wrap(text, _TM_FULL, level)
    if isinstance(t, TmApp):
        return _wrap(f"{_pp_term(t.fn, _TM_APP)} {_pp_term(t.arg, _TM_ATOM)}", _TM_APP, level)
    if isinstance(t, TmMApp):
        return _wrap(f"{_pp_term(t.fn, _TM_APP)} # {t.model}", _TM_APP, level)
    if isinstance(t, TmSucc):
        return _wrap(f"succ {_pp_term(t.t, _TM_ATOM)}", _TM_APP, level)
    if isinstance(t, TmPred):
        return _wrap(f"pred {_pp_term(t.t, _TM_ATOM)}", _TM_APP, level)
    if isinstance(t, TmIsZero):
        return _wrap(f"iszero {_pp_term(t.t, _TM_ATOM)}", _TM_APP, level)
    if isinstance(t, TmPlus):
        return _wrap(f"plus {_pp_term(t.left, _TM_ATOM)} {_pp_term(t.right, _TM_ATOM)}", _TM_APP, level)
    raise TypeError(f"Termine non riconosciuto: {t!r}")


def pretty_type(ty: Ty) -> str:
    return _pp_type(ty, _TY_FULL)


def pretty_term(t: Term) -> str:
    return _pp_term(t, _TM_FULL)


def pretty(p: Program) -> str:
    """Stampa un programma con parentesi minime; il risultato si rianalizza nello stesso AST."""
    blocks = []
    for concept in p.concepts:
        lines = [f"concept {concept.name}"]
        lines += [f"  {name} : {pretty_type(ty)}" for name, ty in concept.members]
        lines.append("endc")
        blocks.append("\n".join(lines))
    for model in p.models:
        lines = [f"model {model.name} of {model.concept}"]
        lines += [f"  {name} = {pretty_term(body)}" for name, body in model.members]
        lines.append("endm")
        blocks.append("\n".join(lines))
    blocks.append(pretty_term(p.main))
    return "\n".join(blocks)


def ast_to_data(node: Any) -> Any:
    """Rappresentazione a dizionari annidati (serializzabile in JSON) di un nodo dell'AST."""
    if isinstance(node, Ident):
        return node.text
    if isinstance(node, (tuple, list)):
        return [ast_to_data(item) for item in node]
    if is_dataclass(node):
        data = {"node": type(node).__name__}
        for f in fields(node):
            data[f.name] = ast_to_data(getattr(node, f.name))
        return data
    return node
