"""Command-line entry point: batch queries and an interactive ``?-`` loop.

Every page given to ``--load`` is reachable by its URL.  Clause pages named
as individual files also form the top-level program; pages found by scanning
a directory do not, so linking them never duplicates clauses.  ``--map``
directories are consulted only when a link names a URL under the prefix.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, List, Optional, TextIO

from .builtins import IoChannel, Limits
from .errors import SeqWebError
from .goals import DPage, Goal
from .solver import OK, Failure, Outcome, Solver, Success, export_trace, format_degree
from .syntax import format_term, parse_page, parse_query
from .webreg import FileMapLoader, Registry, load_paths

EXIT_SUCCESS, EXIT_FAILURE, EXIT_ERROR = 0, 1, 2


@dataclass
class Config:
    page_paths: List[str] = field(default_factory=list)
    url_maps: List[str] = field(default_factory=list)
    query: Optional[str] = None
    script: Optional[str] = None
    trace: bool = False
    occurs_check: bool = True
    limits: Limits = field(default_factory=Limits)


def exit_status(outcome: Outcome) -> int:
    if isinstance(outcome, Success):
        return EXIT_SUCCESS
    if isinstance(outcome, Failure):
        return EXIT_FAILURE
    return EXIT_ERROR


class Session:
    """Loaded pages plus the solver settings shared by every query."""

    def __init__(self, config: Config, out: TextIO, err: TextIO, input_lines: Iterator[str]):
        self.config = config
        self.out, self.err = out, err
        self.input_lines = input_lines
        loaders = []
        program = []
        if config.page_paths:
            mem = load_paths(config.page_paths)
            loaders.append(mem)
        loaders.extend(FileMapLoader.parse(m) for m in config.url_maps)
        self.registry = Registry(loaders)
        for path in config.page_paths:
            if Path(path).is_file():
                url = parse_page(Path(path).read_text(encoding="utf-8"), source=path).url
                if isinstance(self.registry.page(url).content, DPage):
                    program.extend(self.registry.resolve_d(url))
        self.program = program
        self.solver = Solver(self.registry, config.limits, config.occurs_check)

    def _print(self, line: str):
        self.out.write(line + "\n")
        self.out.flush()

    def run(self, goal: Goal) -> int:
        io = IoChannel(self.input_lines, echo=self._print)
        outcome = self.solver.solve(self.program, goal, io)
        if self.config.trace:
            self.err.write(export_trace(outcome.trace))
        if isinstance(outcome, Success):
            for v, t in outcome.answer.items():
                self._print("%s = %s" % (v.name, format_term(t)))
            self._print("yes")
            if outcome.degree != OK:
                self._print("degree: %s" % format_degree(outcome.degree))
        elif isinstance(outcome, Failure):
            self._print("no")
        else:
            self.err.write("error: %s\n" % outcome.message)
        return exit_status(outcome)


def _query_lines(stream: TextIO, out: TextIO) -> Iterator[str]:
    """Complete queries from ``stream``; a query may span lines until a
    terminating ``.``."""
    buf = []
    while True:
        out.write("?- " if not buf else "|  ")
        out.flush()
        line = stream.readline()
        if not line:
            if buf:
                yield " ".join(buf)
            return
        if not line.strip():
            continue
        buf.append(line.rstrip("\n"))
        text = " ".join(buf).rstrip()
        if text.endswith(".") and not text.endswith(".."):
            buf = []
            yield text


def repl(session: Session, stream: TextIO) -> int:
    for text in _query_lines(stream, session.out):
        if text.strip() in ("halt.", "halt"):
            break
        try:
            goal = parse_query(text)
        except SeqWebError as e:
            session.err.write("error: %s\n" % e)
            continue
        session.run(goal)
    return EXIT_SUCCESS


def main(config: Config, stdin: TextIO = None, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    script = None
    try:
        if config.script is not None:
            script = open(config.script, encoding="utf-8")
            input_lines = iter(script)
        else:
            input_lines = _stream_lines(stdin)
        session = Session(config, stdout, stderr, input_lines)
        if config.query is not None:
            return session.run(parse_query(config.query))
        return repl(session, stdin)
    except (SeqWebError, OSError, ValueError) as e:
        stderr.write("error: %s\n" % e)
        return EXIT_ERROR
    finally:
        if script is not None:
            script.close()


def _stream_lines(stream: TextIO) -> Iterator[str]:
    while True:
        line = stream.readline()
        if not line:
            return
        yield line


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="seqweb", description="SeqWeb interpreter and REPL")
    ap.add_argument("--load", action="append", default=[], metavar="PATH",
                    help="page file or directory of .swb pages (repeatable)")
    ap.add_argument("--map", action="append", default=[], metavar="PREFIX=DIR",
                    help="serve URLs under PREFIX from DIR/<name>.swb (repeatable)")
    ap.add_argument("--query", help="run one goal and exit")
    ap.add_argument("--script", metavar="FILE", help="lines consumed by read/1")
    ap.add_argument("--trace", action="store_true", help="event log on stderr")
    ap.add_argument("--no-occurs-check", action="store_true")
    ap.add_argument("--max-depth", type=int, default=Limits.max_depth)
    ap.add_argument("--max-steps", type=int, default=Limits.max_steps)
    return ap


def config_from_args(argv=None) -> Config:
    ap = build_parser()
    ns = ap.parse_args(argv)
    if ns.max_depth < 1 or ns.max_steps < 1:
        ap.error("limits must be positive")
    return Config(ns.load, ns.map, ns.query, ns.script, ns.trace, not ns.no_occurs_check,
                  Limits(ns.max_depth, ns.max_steps))


def run(argv=None) -> int:
    return main(config_from_args(argv))


if __name__ == "__main__":
    sys.exit(run())
