# concept_stlc/cli.py
#
# Interfaccia a riga di comando: check, run e dump-ast di un singolo programma.

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO

from concept_stlc.config import DEFAULT_FUEL, EXIT_CODES, LOG_FORMAT, MAIN_SUBJECT
from concept_stlc.evaluator import Converged, OutOfFuel, Stuck, evaluate
from concept_stlc.modcheck import CheckError
from concept_stlc.report import outcome_to_json, parse_error_to_dict
from concept_stlc.syntax import ParseError, ast_to_data, parse, pretty_term, pretty_type
from concept_stlc.typecheck import check_program

logger = logging.getLogger(__name__)

COMMANDS = ("check", "run", "dump-ast")
FORMATS = ("text", "json")
STDIN_MARKER = "-"

# Codice di uscita in funzione dello stato del risultato
STATUS_EXIT = {
    "ok": EXIT_CODES["ok"],
    "error": EXIT_CODES["diagnostics"],
    "stuck": EXIT_CODES["diagnostics"],
    "usage-error": EXIT_CODES["usage"],
    "out-of-fuel": EXIT_CODES["out_of_fuel"],
}


@dataclass(frozen=True)
class CliConfig:
    command: str
    input: str
    format: str = "text"
    fuel: int = DEFAULT_FUEL
    verbose: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Comando non valido: {self.command!r}")
        if self.format not in FORMATS:
            raise ValueError(f"Formato non valido: {self.format!r}")
        if self.fuel < 0:
            raise ValueError(f"Il budget di passi deve essere non negativo, ricevuto {self.fuel}.")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse terminerebbe il processo: l'errore viene invece restituito a run_cli
    def error(self, message):
        raise UsageError(message)


def _fuel(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' non è un numero naturale") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"il budget deve essere non negativo, ricevuto {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="concept-stlc", description="Checker e interprete per STLC con concept e model")
    parser.add_argument("command", choices=COMMANDS, help="Operazione da eseguire")
    parser.add_argument("input", help="File del programma, oppure '-' per lo standard input")
    parser.add_argument("--format", choices=FORMATS, default="text", help="Formato dell'output (default: text)")
    parser.add_argument("--fuel", type=_fuel, default=DEFAULT_FUEL,
                        help=f"Budget di passi di valutazione (default: {DEFAULT_FUEL})")
    parser.add_argument("--verbose", action="store_true", help="Log di debug sullo standard error")
    return parser


def parse_args(argv: Sequence[str]) -> CliConfig:
    """Raises UsageError per argomenti non validi."""
    ns = build_parser().parse_args(list(argv))
    return CliConfig(ns.command, ns.input, ns.format, ns.fuel, ns.verbose)


def _wants_json(argv: Sequence[str]) -> bool:
    # usato solo quando gli argomenti non si possono analizzare
    argv = list(argv)
    for i, arg in enumerate(argv):
        if arg == "--format=json" or (arg == "--format" and i + 1 < len(argv) and argv[i + 1] == "json"):
            return True
    return False


def _format_diagnostic(d: dict) -> str:
    where = f"{d['line']}:{d['col']}: " if "line" in d else ""
    return f"{where}{d['code']} {d['subject']}: {d['message']}"


def _emit(config_format: str, status: str, stdout: TextIO, stderr: TextIO,
          diagnostics=(), text: Optional[str] = None, **payload) -> int:
    """Scrive il risultato nel formato richiesto e restituisce il codice di uscita."""
    data = outcome_to_json(status, diagnostics, payload.pop("main_type", None), payload.pop("value", None))
    data.update(payload)
    if config_format == "json":
        stdout.write(json.dumps(data, ensure_ascii=False) + "\n")
    else:
        for d in data["diagnostics"]:
            stderr.write(_format_diagnostic(d) + "\n")
        if text is not None:
            stdout.write(text + "\n")
    return STATUS_EXIT[status]


def _read_source(path: str, stdin: TextIO) -> str:
    if path == STDIN_MARKER:
        return stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def run_cli(argv: Sequence[str], stdout: Optional[TextIO] = None, stderr: Optional[TextIO] = None,
            stdin: Optional[TextIO] = None) -> int:
    """
    Esegue un comando e restituisce il codice di uscita.

    Parameters:
    -----------
    argv : Sequence[str]
        Argomenti senza il nome del programma: (check|run|dump-ast) [--format text|json] [--fuel N] FILE|-
    stdout, stderr, stdin : TextIO, optional
        Stream da usare (default: quelli del processo).

    Returns:
    --------
    int
        0 ok, 1 diagnostiche (parsing, controllo o termine bloccato), 2 errore di uso o di IO,
        3 budget di passi esaurito.
    """
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    stdin = stdin if stdin is not None else sys.stdin

    try:
        config = parse_args(argv)
    except UsageError as err:
        fmt = "json" if _wants_json(argv) else "text"
        usage = {"code": "usage-error", "subject": "argv", "message": str(err)}
        return _emit(fmt, "usage-error", stdout, stderr, [usage])

    logging.basicConfig(level=logging.DEBUG if config.verbose else logging.WARNING, format=LOG_FORMAT, stream=stderr,
                        force=True)
    logging.getLogger("concept_stlc").setLevel(logging.DEBUG if config.verbose else logging.NOTSET)

    try:
        source = _read_source(config.input, stdin)
    except (OSError, UnicodeDecodeError) as err:
        io_error = {"code": "io-error", "subject": config.input, "message": f"Impossibile leggere l'input: {err}"}
        return _emit(config.format, "usage-error", stdout, stderr, [io_error])

    try:
        program = parse(source)
    except ParseError as err:
        return _emit(config.format, "error", stdout, stderr, [parse_error_to_dict(err)])

    if config.command == "dump-ast":
        data = ast_to_data(program)
        if config.format == "json":
            return _emit("json", "ok", stdout, stderr, ast=data)
        return _emit("text", "ok", stdout, stderr, text=json.dumps(data, indent=2, ensure_ascii=False))

    try:
        checked = check_program(program)
    except CheckError as err:
        return _emit(config.format, "error", stdout, stderr, err.outcome)

    if config.command == "check":
        return _emit(config.format, "ok", stdout, stderr, text=pretty_type(checked.main_type),
                     main_type=checked.main_type)

    result = evaluate(checked.mt, program.main, config.fuel)
    logger.debug("run: %s dopo %d passi", type(result).__name__, result.steps)
    if isinstance(result, Converged):
        return _emit(config.format, "ok", stdout, stderr, text=pretty_term(result.value),
                     main_type=checked.main_type, value=result.value)
    if isinstance(result, Stuck):
        stuck = {"code": "stuck", "subject": MAIN_SUBJECT,
                 "message": f"Valutazione bloccata dopo {result.steps} passi su {pretty_term(result.term)}."}
        return _emit(config.format, "stuck", stdout, stderr, [stuck], main_type=checked.main_type)
    assert isinstance(result, OutOfFuel)
    if config.format == "text":
        stderr.write(f"Budget di {config.fuel} passi esaurito.\n")
    return _emit(config.format, "out-of-fuel", stdout, stderr, main_type=checked.main_type)


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
