# concept_stlc/config.py

import os

# Budget di passi di default per la valutazione (sovrascrivibile con --fuel)
DEFAULT_FUEL = 100_000

# Budget usato dai controlli dinamici di type soundness
SOUNDNESS_FUEL = 1_000

# Codici di uscita della CLI in base alla classificazione del risultato
EXIT_CODES = {
    "ok": 0,
    "diagnostics": 1,
    "usage": 2,
    "out_of_fuel": 3
}

# Regola lessicale degli identificatori
IDENT_PATTERN = r"[A-Za-z_][A-Za-z0-9_']*"

# Parole riservate della grammatica concreta
RESERVED_WORDS = frozenset({
    "concept", "endc", "model", "endm", "of",
    "Bool", "Nat", "true", "false",
    "if", "then", "else", "let", "in",
    "succ", "pred", "iszero", "plus"
})

# Soggetto delle diagnostiche sollevate durante la tipizzazione del termine principale
MAIN_SUBJECT = "main"

# Dimensioni del benchmark sul controllo di un singolo concept
BENCHMARK_SIZES = {
    "small": 1_000,
    "large": 10_000
}

# Soglie di accettazione del benchmark
BENCHMARK_LIMITS = {
    "efficient_max_seconds": 1.0,
    "efficient_max_ratio": 15.0,
    "reference_min_ratio": 50.0
}

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"

# Programmi di esempio distribuiti con il repository
SAMPLES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "samples")
