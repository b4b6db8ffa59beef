# concept_stlc/ident_maps.py

import re
from dataclasses import dataclass, field
from typing import Generic, Iterator, Optional, Sequence, Tuple, TypeVar

from concept_stlc.config import IDENT_PATTERN

V = TypeVar("V")

_IDENT_RE = re.compile(IDENT_PATTERN)


@dataclass(frozen=True)
class Span:
    """Posizione nel sorgente (righe e colonne a partire da 1)."""
    line: int
    column: int
    end_line: Optional[int] = None
    end_column: Optional[int] = None


@dataclass(frozen=True, order=True)
class Ident:
    """
    Identificatore lessicale per nomi di concept, model, membri e variabili.

    L'uguaglianza, l'hash e l'ordinamento dipendono solo dal testo: lo span
    di provenienza viene portato con sé solo per localizzare le diagnostiche.
    """
    text: str
    span: Optional[Span] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.text, str) or _IDENT_RE.fullmatch(self.text) is None:
            raise ValueError(f"Identificatore non valido: {self.text!r}")

    def __str__(self) -> str:
        return self.text


# Forma grezza di una sezione di dichiarazioni: coppie (nome, dato) in ordine di sorgente,
# duplicati ammessi
DeclList = Sequence[Tuple[Ident, V]]


class _Node:
    __slots__ = ("key", "value", "left", "right", "height", "size")

    def __init__(self, key, value, left, right):
        self.key = key
        self.value = value
        self.left = left
        self.right = right
        self.height = 1 + max(_height(left), _height(right))
        self.size = 1 + _size(left) + _size(right)


def _height(node) -> int:
    return node.height if node is not None else 0


def _size(node) -> int:
    return node.size if node is not None else 0


def _rotate_right(node):
    pivot = node.left
    return _Node(pivot.key, pivot.value, pivot.left, _Node(node.key, node.value, pivot.right, node.right))


def _rotate_left(node):
    pivot = node.right
    return _Node(pivot.key, pivot.value, _Node(node.key, node.value, node.left, pivot.left), pivot.right)


def _balance(key, value, left, right):
    hl, hr = _height(left), _height(right)
    if hl > hr + 1:
        if _height(left.left) < _height(left.right):
            left = _rotate_left(left)
        return _rotate_right(_Node(key, value, left, right))
    if hr > hl + 1:
        if _height(right.right) < _height(right.left):
            right = _rotate_right(right)
        return _rotate_left(_Node(key, value, left, right))
    return _Node(key, value, left, right)


def _insert(node, key: Ident, value, replace: bool):
    if node is None:
        return _Node(key, value, None, None)
    if key.text < node.key.text:
        return _balance(node.key, node.value, _insert(node.left, key, value, replace), node.right)
    if key.text > node.key.text:
        return _balance(node.key, node.value, node.left, _insert(node.right, key, value, replace))
    if not replace:
        return node
    return _Node(key, value, node.left, node.right)


def _build_balanced(items: Sequence[Tuple[Ident, V]], lo: int, hi: int):
    # items ordinati per chiave e senza duplicati
    if lo >= hi:
        return None
    mid = (lo + hi) // 2
    key, value = items[mid]
    return _Node(key, value, _build_balanced(items, lo, mid), _build_balanced(items, mid + 1, hi))


def _walk(node) -> Iterator[_Node]:
    stack = []
    while stack or node is not None:
        while node is not None:
            stack.append(node)
            node = node.left
        node = stack.pop()
        yield node
        node = node.right


class FinMap(Generic[V]):
    """
    Mappa finita persistente Ident -> V (albero AVL).

    Ogni chiave compare una sola volta; l'iterazione segue l'ordine crescente
    del testo delle chiavi, quindi due mappe con gli stessi binding iterano
    allo stesso modo. Lookup, inserimento e appartenenza sono O(log n).
    """

    __slots__ = ("_root",)

    def __init__(self, _root=None):
        self._root = _root

    @classmethod
    def empty(cls) -> "FinMap[V]":
        return cls()

    @classmethod
    def from_items(cls, items: Sequence[Tuple[Ident, V]]) -> "FinMap[V]":
        """Costruisce la mappa dalle coppie date; a parità di chiave vince l'ultima."""
        result = cls()
        for key, value in items:
            result = result.insert(key, value)
        return result

    def insert(self, key: Ident, value: V, replace: bool = True) -> "FinMap[V]":
        """
        Restituisce una nuova mappa con il binding [key -> value].

        Con replace=False un binding già presente per key viene mantenuto.
        """
        return FinMap(_insert(self._root, key, value, replace))

    def _find(self, key: Ident):
        node = self._root
        text = key.text
        while node is not None:
            if text < node.key.text:
                node = node.left
            elif text > node.key.text:
                node = node.right
            else:
                return node
        return None

    def get(self, key: Ident, default: Optional[V] = None) -> Optional[V]:
        node = self._find(key)
        return node.value if node is not None else default

    def __getitem__(self, key: Ident) -> V:
        node = self._find(key)
        if node is None:
            raise KeyError(key.text)
        return node.value

    def __contains__(self, key: object) -> bool:
        return isinstance(key, Ident) and self._find(key) is not None

    def __len__(self) -> int:
        return _size(self._root)

    def __iter__(self) -> Iterator[Ident]:
        return (node.key for node in _walk(self._root))

    def keys(self) -> list[Ident]:
        return list(self)

    def values(self) -> list[V]:
        return [node.value for node in _walk(self._root)]

    def items(self) -> list[Tuple[Ident, V]]:
        return [(node.key, node.value) for node in _walk(self._root)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinMap):
            return NotImplemented
        return self.items() == other.items()

    def __hash__(self) -> int:
        return hash(tuple(self.items()))

    def __repr__(self) -> str:
        body = ", ".join(f"{key.text}↦{value!r}" for key, value in self.items())
        return "{" + body + "}"


def ids_are_unique(ids: Sequence[Ident]) -> bool:
    """Verifica l'assenza di ripetizioni in ids usando un insieme ausiliario."""
    seen = set()
    for ident in ids:
        if ident in seen:
            return False
        seen.add(ident)
    return True


def duplicate_ids(ids: Sequence[Ident]) -> list[Ident]:
    """
    Restituisce i nomi ripetuti in ids, ciascuno una volta sola, nell'ordine
    della loro seconda occorrenza.
    """
    seen = set()
    reported = set()
    duplicates = []
    for ident in ids:
        if ident in seen:
            if ident not in reported:
                reported.add(ident)
                duplicates.append(ident)
        else:
            seen.add(ident)
    return duplicates


def list_assoc_lookup(decls: DeclList[V], name: Ident) -> Optional[V]:
    """Scansione lineare: il dato della PRIMA voce con nome uguale a name, o None."""
    for key, payload in decls:
        if key == name:
            return payload
    return None


def map_from_list(decls: DeclList[V]) -> FinMap[V]:
    """
    Converte una lista di dichiarazioni in una FinMap.

    Parameters:
    -----------
    decls : DeclList
        Coppie (nome, dato) in ordine di sorgente, eventualmente con duplicati.

    Returns:
    --------
    FinMap
        Ogni binding [n -> d] proviene da una coppia (n, d) di decls; per un nome
        ripetuto viene conservato il dato della prima occorrenza. Con nomi tutti
        distinti la mappa contiene un binding per ogni voce.
    """
    # L'ordinamento è stabile: tra chiavi uguali resta prima la prima occorrenza
    ordered = sorted(decls, key=lambda pair: pair[0].text)
    unique = []
    for key, payload in ordered:
        if unique and unique[-1][0] == key:
            continue
        unique.append((key, payload))
    return FinMap(_build_balanced(unique, 0, len(unique)))
