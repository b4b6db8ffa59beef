# concept_stlc/benchmark.py
#
# Misura dei tempi del controllo di un concept con molti membri: controllo
# efficiente contro la pipeline di riferimento a liste.

import logging
import time
from typing import Dict, Sequence

import numpy as np
import pandas as pd

from concept_stlc.config import BENCHMARK_SIZES
from concept_stlc.ident_maps import Ident
from concept_stlc.syntax import ConceptDef, TArrow, TBool, TNat
from concept_stlc.typecheck import ConceptTable, check_concept_def
from concept_stlc.typecheck_ref import check_concept_def_ref

logger = logging.getLogger(__name__)

_MEMBER_TYPES = (
    TNat(),
    TBool(),
    TArrow(TNat(), TNat()),
    TArrow(TBool(), TArrow(TNat(), TBool())),
)


def synthetic_concept(n: int) -> ConceptDef:
    """Concept `Big` con n membri distinti m0 ... m{n-1} di tipi misti."""
    if n < 0:
        raise ValueError(f"Il numero di membri deve essere non negativo, ricevuto {n}.")
    members = tuple((Ident(f"m{i}"), _MEMBER_TYPES[i % len(_MEMBER_TYPES)]) for i in range(n))
    return ConceptDef(Ident("Big"), members)


def time_concept_check(n: int, reference: bool = False, repeat: int = 3) -> float:
    """
    Miglior tempo (secondi) su repeat esecuzioni del controllo di synthetic_concept(n).

    Parameters:
    -----------
    n : int
        Numero di membri.
    reference : bool
        Se True usa il controllo a liste, altrimenti check_concept_def.
    repeat : int
        Numero di ripetizioni.
    """
    if repeat < 1:
        raise ValueError(f"Servono almeno una ripetizione, ricevuto {repeat}.")
    cd = synthetic_concept(n)
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        if reference:
            check_concept_def_ref([], list(cd.members))
        else:
            check_concept_def(ConceptTable(), cd)
        best = min(best, time.perf_counter() - start)
    logger.debug("time_concept_check n=%d reference=%s: %.4fs", n, reference, best)
    return best


def run_benchmark(
    sizes: Sequence[int] = (BENCHMARK_SIZES["small"], BENCHMARK_SIZES["large"]),
    include_reference: bool = True,
    repeat: int = 3,
) -> pd.DataFrame:
    """
    Returns:
    --------
    pd.DataFrame
        Colonne members, efficient_s, reference_s (NaN se il riferimento è escluso),
        una riga per dimensione in ordine crescente.
    """
    rows = []
    for n in sorted(sizes):
        efficient = time_concept_check(n, reference=False, repeat=repeat)
        # l'oracolo quadratico si misura una volta sola
        ref = time_concept_check(n, reference=True, repeat=1) if include_reference else np.nan
        rows.append({"members": n, "efficient_s": efficient, "reference_s": ref})
    return pd.DataFrame(rows, columns=["members", "efficient_s", "reference_s"])


def growth_ratios(frame: pd.DataFrame) -> Dict[str, float]:
    """
    Rapporti fra i tempi alla dimensione massima e minima e pendenza log-log
    (esponente empirico) per ciascun controllo.
    """
    if len(frame) < 2:
        raise ValueError("Servono almeno due dimensioni per stimare la crescita.")
    ordered = frame.sort_values("members")
    result = {}
    for column, label in (("efficient_s", "efficient"), ("reference_s", "reference")):
        times = ordered[column].to_numpy(dtype=float)
        if np.isnan(times).any():
            continue
        # evita log(0) su misure sotto la risoluzione del timer
        times = np.maximum(times, 1e-9)
        result[f"{label}_ratio"] = float(times[-1] / times[0])
        slope, _ = np.polyfit(np.log(ordered["members"].to_numpy(dtype=float)), np.log(times), 1)
        result[f"{label}_slope"] = float(slope)
    return result
