"""Command-line front end.

    skosval validate FILE... [--report json|turtle|text] [--fail-on errors|warnings|any|never]
    skosval ontology [PATH]

Exit codes: 0 nothing gated, 1 gated findings, 2 parse errors, 3 usage or I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from dataclasses import dataclass, field
from typing import IO, Optional, Sequence

from . import __version__
from .classify import convention_lint, ontology
from .closure import compute_closure
from .detect import PatternClass, Severity, collapse_symmetric, detect_all, finding_sort_key, resolve_patterns
from .rdf import Graph
from .report import build_report, digest, report_prefixes, to_json, to_rdf, to_text
from .syntax import NTRIPLES, TURTLE, ParseDiagnostic, Parser, PrefixTable, serialize

log = logging.getLogger("skosval")

EXIT_OK = 0
EXIT_GATED = 1
EXIT_PARSE = 2
EXIT_USAGE = 3

FAIL_ON = ("errors", "warnings", "any", "never")
_GATED = {
    "errors": {Severity.Error},
    "warnings": {Severity.Error, Severity.Warning},
    "any": set(Severity),
    "never": set(),
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    inputs: list[str]
    format: str = "auto"
    report: str = "text"
    verbosity: int = 0
    patterns: set = field(default_factory=lambda: set(PatternClass))
    fail_on: str = "errors"
    collapse_symmetric: bool = False
    convention_lint: bool = False
    dump_closure: Optional[str] = None
    emit_ontology: bool = False
    output: Optional[str] = None

    def __post_init__(self):
        if not self.inputs:
            raise UsageError("at least one input is required")
        if self.fail_on not in FAIL_ON:
            raise UsageError(f"unknown --fail-on policy {self.fail_on!r}")
        if self.format not in ("auto", TURTLE, NTRIPLES):
            raise UsageError(f"unknown format {self.format!r}")
        if self.report not in ("json", "turtle", "text"):
            raise UsageError(f"unknown report format {self.report!r}")
        if not 0 <= self.verbosity <= 2:
            raise UsageError("verbosity must be 0, 1 or 2")


def exit_code(diagnostics: Sequence[ParseDiagnostic], findings, fail_on: str) -> int:
    if any(d.severity == "error" for d in diagnostics):
        return EXIT_PARSE
    gated = _GATED[fail_on]
    if any(f.severity in gated for f in findings):
        return EXIT_GATED
    return EXIT_OK


def _format_for(path: str, requested: str) -> str:
    if requested != "auto":
        return requested
    if path.lower().endswith((".nt", ".ntriples")):
        return NTRIPLES
    return TURTLE


def _write(path: Optional[str], text: str, stdout: IO[str]) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_inputs(config: RunConfig, stdin: Optional[IO[bytes]] = None):
    """Parse every input into one merged graph; blank nodes are scoped per input.

    Returns the frozen graph, all diagnostics, the input digest and the union
    of the documents' prefix bindings.
    """
    merged = Graph()
    prefixes = PrefixTable()
    diagnostics: list[ParseDiagnostic] = []
    raw: list[bytes] = []
    for index, path in enumerate(config.inputs):
        if path == "-":
            data = (stdin or sys.stdin.buffer).read()
        else:
            try:
                with open(path, "rb") as fh:
                    data = fh.read()
            except OSError as err:
                raise UsageError(f"cannot read {path}: {err.strerror or err}") from None
        raw.append(data)
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as err:
            diagnostics.append(ParseDiagnostic(1, 1, f"input is not valid UTF-8: {err.reason}", source=path))
            continue
        parser = Parser(_format_for(path, config.format), scope=f"d{index}")
        graph, diags = parser.parse(text)
        merged.update(graph)
        for prefix, ns in parser.prefixes.bindings.items():
            prefixes.bindings.setdefault(prefix, ns)
        diagnostics.extend(dataclasses.replace(d, source=path) for d in diags)
        log.debug("%s: %d triples, %d diagnostics", path, len(graph), len(diags))
    return merged.freeze(), diagnostics, digest(raw), prefixes


def run(
    config: RunConfig,
    stdout: Optional[IO[str]] = None,
    stdin: Optional[IO[bytes]] = None,
) -> int:
    stdout = stdout or sys.stdout
    graph, diagnostics, input_digest, doc_prefixes = load_inputs(config, stdin)
    closure = compute_closure(graph)
    if config.dump_closure:
        fmt = _format_for(config.dump_closure, "auto")
        try:
            _write(config.dump_closure, serialize(closure.graph, fmt), stdout)
        except OSError as err:
            raise UsageError(f"cannot write {config.dump_closure}: {err.strerror or err}") from None

    findings = detect_all(closure, config.patterns)
    if config.collapse_symmetric:
        findings = collapse_symmetric(findings)
    if config.convention_lint:
        findings = sorted(findings + convention_lint(graph), key=finding_sort_key)
    report = build_report(findings, diagnostics, input_digest)

    if config.report == "json":
        text = to_json(report)
    elif config.report == "turtle":
        g = to_rdf(report)
        if config.emit_ontology:
            g.update(ontology())
        text = serialize(g, TURTLE, report_prefixes())
    else:
        table = report_prefixes()
        for prefix, ns in doc_prefixes.bindings.items():
            table.bindings.setdefault(prefix, ns)
        text = to_text(report, config.verbosity, table)
    try:
        _write(config.output, text, stdout)
    except OSError as err:
        raise UsageError(f"cannot write {config.output}: {err.strerror or err}") from None
    return exit_code(diagnostics, findings, config.fail_on)


def emit_ontology(path: Optional[str], stdout: Optional[IO[str]] = None) -> int:
    text = serialize(ontology(), TURTLE)
    try:
        _write(path, text, stdout or sys.stdout)
    except OSError as err:
        print(f"skosval: cannot write {path}: {err.strerror or err}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="skosval", description="Detect problematic SKOS mapping patterns.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--debug", action="store_true", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    v = sub.add_parser("validate", help="validate mapping files")
    v.add_argument("inputs", nargs="+", metavar="FILE", help="Turtle or N-Triples file, or - for stdin")
    v.add_argument("--format", choices=("auto", TURTLE, NTRIPLES), default="auto",
                   help="input syntax (auto: by file extension)")
    v.add_argument("--report", choices=("json", "turtle", "text"), default="text")
    v.add_argument("-v", "--verbose", action="count", default=0, help="repeat for more detail (max 2)")
    v.add_argument("--patterns", action="append", default=None, metavar="NAMES",
                   help="comma-separated pattern names (pattern1..pattern7 or class names)")
    v.add_argument("--fail-on", choices=FAIL_ON, default="errors")
    v.add_argument("--collapse-symmetric", action="store_true",
                   help="merge findings that differ only in the direction of symmetric links")
    v.add_argument("--convention-lint", action="store_true",
                   help="also check skos:inScheme conventions")
    v.add_argument("--dump-closure", metavar="PATH", help="write the closed graph to PATH")
    v.add_argument("--emit-ontology", action="store_true",
                   help="include the pattern class ontology in a turtle report")
    v.add_argument("-o", "--output", metavar="PATH", help="write the report to PATH instead of stdout")

    o = sub.add_parser("ontology", help="write the pattern class ontology as Turtle")
    o.add_argument("path", nargs="?", default=None)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.debug else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.command == "ontology":
        return emit_ontology(args.path)
    try:
        patterns = set(PatternClass)
        if args.patterns:
            patterns = resolve_patterns(name for chunk in args.patterns for name in chunk.split(","))
        config = RunConfig(
            inputs=args.inputs,
            format=args.format,
            report=args.report,
            verbosity=min(args.verbose, 2),
            patterns=patterns,
            fail_on=args.fail_on,
            collapse_symmetric=args.collapse_symmetric,
            convention_lint=args.convention_lint,
            dump_closure=args.dump_closure,
            emit_ontology=args.emit_ontology,
            output=args.output,
        )
        return run(config)
    except (UsageError, ValueError) as err:
        print(f"skosval: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
