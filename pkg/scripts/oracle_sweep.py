"""Compare solver success with the least-fixpoint oracle over enumerated
propositional programs, optionally with scoped implications in bodies.

    python3 scripts/oracle_sweep.py --clauses 3
    python3 scripts/oracle_sweep.py --clauses 2 --implications
"""
import argparse
import itertools
import sys
import time
from dataclasses import dataclass
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import _holds_in, least_model, to_clause, to_goal  # noqa: E402
from seqweb.solver import Solver  # noqa: E402


@dataclass
class SweepConfig:
    preds: tuple = ("p", "q", "r")
    max_clauses: int = 3
    implications: bool = False


def bodies(cfg: SweepConfig):
    atoms = [("atom", p) for p in cfg.preds]
    yield None
    yield from atoms
    for op in ("and", "or"):
        for a, b in itertools.combinations_with_replacement(atoms, 2):
            yield (op, a, b)
    if cfg.implications:
        for h, a in itertools.product(cfg.preds, atoms):
            for g in atoms:
                yield ("imp", ((h, a),), g)
                yield ("imp", ((h, None),), g)


def sweep(cfg: SweepConfig):
    clauses = [(h, b) for h in cfg.preds for b in bodies(cfg)]
    solver = Solver(loop_check=True)
    n = bad = 0
    for k in range(cfg.max_clauses + 1):
        for prog in itertools.combinations_with_replacement(clauses, k):
            program = [to_clause(c) for c in prog]
            if cfg.implications:
                truth = {p: _holds_in(frozenset(prog), ("atom", p), {}) for p in cfg.preds}
            else:
                model = least_model(prog)
                truth = {p: p in model for p in cfg.preds}
            for p in cfg.preds:
                got = next(solver.solutions(program, to_goal(("atom", p))), None) is not None
                if got != truth[p]:
                    bad += 1
                    print("mismatch: %s ?- %s solver=%s oracle=%s" % (prog, p, got, truth[p]))
            n += 1
    return n, bad


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--clauses", type=int, default=3)
    ap.add_argument("--implications", action="store_true")
    args = ap.parse_args()
    cfg = SweepConfig(max_clauses=args.clauses, implications=args.implications)
    start = time.perf_counter()
    n, bad = sweep(cfg)
    print("%d programs, %d mismatches, %.1fs" % (n, bad, time.perf_counter() - start))
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
