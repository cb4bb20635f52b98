"""Replay the three hyperlinked web-page sessions and print their transcripts.

    python3 scripts/run_page_sessions.py [--trace]
"""
import argparse
import time
from pathlib import Path

from seqweb.solver import export_trace, format_degree, run_session
from seqweb.syntax import parse_query
from seqweb.webreg import registry_from_dirs

PAGES = Path(__file__).resolve().parents[1] / "pages"

SESSIONS = [
    ("query1", None, "www.dau.com/arith => www.dau.com/query1.", ["5"]),
    ("query2", None, "www.dau.com/arith => www.dau.com/query2.", ["5"]),
    ("nurse, normal reading", "www.dau.com/nurse", "www.dau.com/query3.", ["Kim", "150", "130"]),
    ("nurse, first reading high", "www.dau.com/nurse", "www.dau.com/query3.", ["Kim", "200", "130"]),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trace", action="store_true")
    args = ap.parse_args()
    registry = registry_from_dirs([PAGES])
    for name, program_url, query, inputs in SESSIONS:
        program = registry.resolve_d(program_url) if program_url else []
        start = time.perf_counter()
        outcome, lines = run_session(program, parse_query(query), inputs, registry)
        ms = (time.perf_counter() - start) * 1000
        print("== %s  (input %s, %.1f ms)" % (name, ",".join(inputs), ms))
        for line in lines:
            print("   " + line)
        status = type(outcome).__name__.lower()
        degree = getattr(outcome, "degree", None)
        print("   -> %s%s" % (status, "  degree " + format_degree(degree) if degree else ""))
        if args.trace:
            print(export_trace(outcome.trace), end="")


if __name__ == "__main__":
    main()
