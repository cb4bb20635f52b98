"""The six acceptance criteria.  Each test prints one PASS/FAIL line with
its wall time, repeated in the terminal summary of any pytest run."""
import itertools
import random
import time
from contextlib import contextmanager

from seqweb.builtins import IoChannel
from seqweb.goals import And, Atom, Exists, Or, SeqAnd, SeqOr
from seqweb.solver import FAILED, OK, Failure, Node, Solver, Success, run_session
from seqweb.syntax import parse_clauses, parse_query
from seqweb.terms import (
    Compound, Const, Var, apply, compose_resolved, max_const_level, term_vars, unify,
)

from conftest import CRITERIA_LINES
from oracles import (
    fib_recurrence, is_variant, law_violations, least_model, robinson, to_clause,
    tuple_apply,
)

ARITH = "www.dau.com/arith"


@contextmanager
def criterion(label, budget):
    """Time the block, enforce ``budget`` seconds and print one status line."""
    start = time.perf_counter()
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget, "%s took %.2fs, budget %.0fs" % (label, elapsed, budget)
    except BaseException as e:
        _report("FAIL %s (%.2fs): %s" % (label, time.perf_counter() - start, str(e).splitlines()[0]))
        raise
    _report("PASS %s (%.2fs)" % (label, elapsed))


def _report(line):
    CRITERIA_LINES.append(line)
    print("\n" + line)


# 1 ---------------------------------------------------------------------------------

def test_c1_golden_transcripts(registry):
    fib5 = str(fib_recurrence(5))
    sessions = [
        ("query1", [], "%s => www.dau.com/query1." % ARITH, ["5"], ["5", "fib:", fib5]),
        ("query2", [], "%s => www.dau.com/query2." % ARITH, ["5"],
         ["5", "its fib:", fib5, "twin prime"]),
        ("nurse+query3", registry.resolve_d("www.dau.com/nurse"), "www.dau.com/query3.",
         ["Kim", "150", "130"], ["150", "130"]),
    ]
    with criterion("1 golden transcripts", budget=3):
        for name, program, query, inputs, expected in sessions:
            start = time.perf_counter()
            outcome, lines = run_session(program, parse_query(query), inputs, registry)
            assert time.perf_counter() - start < 1.0, name
            assert isinstance(outcome, Success), (name, outcome)
            assert lines == expected, (name, lines)


# 2 ---------------------------------------------------------------------------------

def _value(out, var="V"):
    return out.answer[Var(var)].value if isinstance(out, Success) else None


def test_c2_scoping_suite(registry):
    solver = Solver(registry)
    q = parse_query("fib(5, F), V is F.")
    problems = []
    with criterion("2 scoping suite", budget=1):
        # helper alone is not visible at top level
        if not isinstance(solver.solve([], parse_query("fib_aux(2, 5, 1, 1, F).")), Failure):
            problems.append("fib_aux visible at top level")
        # nested-implication definition must give F = 8
        got = _value(solver.solve(registry.resolve_d("fiblocal"), q))
        if got != 8:
            problems.append("fiblocal proves fib(5, F) with F = %s, expected 8" % got)
        # protected version with a conflicting global helper
        safe = list(registry.resolve_d("fibsafe"))
        rogue = parse_clauses("fib_aux(_, _, _, _, 0).")
        values = [_value(s) for s in solver.all_solutions(safe + rogue, q)]
        if values != [8]:
            problems.append("fibsafe with a conflicting helper gives %s, expected [8]" % values)
        # the renamed helper cannot be reached from outside
        for text in ("forall(fib_aux, fib_aux(2, 5, 1, 1, F)).", "fib_aux(2, 5, 1, 1, F)."):
            if not isinstance(solver.solve(safe, parse_query(text)), Failure):
                problems.append("renamed helper reachable via %s" % text)
        assert not problems, "; ".join(problems)


# 3 ---------------------------------------------------------------------------------

PREDS = ("p", "q", "r")


def _bodies():
    yield None
    for a in PREDS:
        yield ("atom", a)
    for op in ("and", "or"):
        for a, b in itertools.combinations_with_replacement(PREDS, 2):
            yield (op, ("atom", a), ("atom", b))


def enumerate_programs(max_clauses=3):
    clauses = [(h, b) for h in PREDS for b in _bodies()]
    for n in range(max_clauses + 1):
        yield from itertools.combinations_with_replacement(clauses, n)


def test_c3_oracle_equivalence():
    solver = Solver(loop_check=True)
    goals = {p: Atom(Const(p)) for p in PREDS}
    with criterion("3 oracle equivalence", budget=30):
        programs = checked = 0
        mismatches = []
        for prog in enumerate_programs():
            model = least_model(prog)
            clauses = [to_clause(c) for c in prog]
            for p in PREDS:
                proved = next(solver.solutions(clauses, goals[p]), None) is not None
                if proved != (p in model):
                    mismatches.append((prog, p))
                checked += 1
            programs += 1
        print("\n  %d programs, %d queries, %d mismatches" % (programs, checked, len(mismatches)))
        assert programs > 5000
        assert not mismatches, mismatches[:3]


# 4 ---------------------------------------------------------------------------------

CHOICE = parse_clauses("ch(1). ch(2).")


def random_goal(rng, depth, counter):
    if depth == 0 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.55:
            return Atom(Compound("write", (Const("m%d" % next(counter)),)))
        if r < 0.75:
            return Atom(Compound("ch", (Var("_C%d" % next(counter)),)))
        if r < 0.9:
            n = "E%d" % next(counter)
            return Exists(n, Atom(Compound("ch", (Var(n),))))
        return Atom(Const("fail"))
    kind = rng.choice((SeqAnd, SeqOr, SeqAnd, SeqOr, And, Or))
    g = kind(random_goal(rng, depth - 1, counter), random_goal(rng, depth - 1, counter))
    if rng.random() < 0.1:
        g = And(g, Atom(Const("fail")))
    return g


def test_c4_sequencing_laws():
    rng = random.Random(20261016)
    solver = Solver()
    with criterion("4 sequencing laws", budget=30):
        violations, events = [], 0
        for i in range(1000):
            goal = random_goal(rng, 5, itertools.count())
            io = IoChannel()
            for _ in itertools.islice(solver.solutions(CHOICE, goal, io), 20):
                pass
            trace = solver.last_machine.trace
            events += len(trace)
            writes = [e.payload for e in trace if e.kind == "write"]
            if writes != io.output:
                violations.append((i, "trace and channel disagree"))
            violations.extend((i, v) for v in law_violations(trace))
        print("\n  1000 goals, %d events, %d violations" % (events, len(violations)))
        assert events > 1000
        assert not violations, violations[:5]


# 5 ---------------------------------------------------------------------------------

def _random_term(rng, depth, vars_, consts):
    r = rng.random()
    if depth == 0 or r < 0.35:
        return rng.choice(vars_) if rng.random() < 0.5 else rng.choice(consts)
    arity = rng.randint(1, 3)
    f = rng.choice("fg")
    return Compound(f, tuple(_random_term(rng, depth - 1, vars_, consts) for _ in range(arity)))


def _to_tuple(t):
    if isinstance(t, Var):
        return ("v", (t.name, t.level))
    if isinstance(t, Const):
        return ("c", t.name)
    return ("%s/%d" % (t.functor, len(t.args)),) + tuple(_to_tuple(a) for a in t.args)


def check_pair(t1, t2, levelled):
    """Violations of the unifier invariants for one pair."""
    out = []
    s = unify(t1, t2)
    back = unify(t2, t1)
    if (s is None) != (back is None):
        out.append("asymmetric success")
    if s is None:
        if not levelled and robinson(_to_tuple(t1), _to_tuple(t2)) is not None:
            out.append("missed a unifier")
        return out
    r1, r2 = apply(s, t1), apply(s, t2)
    if r1 != r2:
        out.append("not a unifier")
    if not is_variant(_to_tuple(r1), _to_tuple(apply(back, t1))):
        out.append("symmetric results differ")
    resolved = compose_resolved(s)
    if any(apply(resolved, v) != v for t in resolved.values() for v in term_vars(t)):
        out.append("not idempotent")
    if apply(s, r1) != r1:
        out.append("apply not idempotent")
    if not levelled:
        ref = robinson(_to_tuple(t1), _to_tuple(t2))
        if ref is None:
            out.append("unified what the reference cannot")
        elif not is_variant(_to_tuple(r1), tuple_apply(ref, _to_tuple(t1))):
            out.append("not most general")
    for t in (t1, t2):
        for v in term_vars(t):
            if max_const_level(apply(s, v)) > v.level:
                out.append("level escape through %s" % v.name)
            if any(w.level > v.level for w in term_vars(apply(s, v))):
                out.append("deeper variable under %s" % v.name)
    return out


def test_c5_unification_properties():
    rng = random.Random(5)
    plain_vars = [Var(n) for n in "XYZW"]
    plain_consts = [Const(n) for n in "abc"]
    lv_vars = plain_vars + [Var("U", 1), Var("V", 2)]
    lv_consts = plain_consts + [Const("k#1", 1), Const("k#2", 2)]
    with criterion("5 unification properties", budget=10):
        violations = []
        stats = {"unified": 0, "occurs": 0}
        for i in range(10000):
            levelled = i % 2 == 1
            vs, cs = (lv_vars, lv_consts) if levelled else (plain_vars, plain_consts)
            t1 = _random_term(rng, 3, vs, cs)
            if i % 10 == 0:
                # force an occurs-check case: a variable against a term containing it
                v = rng.choice(plain_vars)
                t1, t2 = v, Compound("f", (_random_term(rng, 2, vs, cs), v))
                if unify(t1, t2) is not None:
                    violations.append((i, "occurs check missed"))
                stats["occurs"] += 1
            else:
                t2 = _random_term(rng, 3, vs, cs)
            problems = check_pair(t1, t2, levelled)
            violations.extend((i, p) for p in problems)
            stats["unified"] += unify(t1, t2) is not None
        print("\n  10000 pairs, %(unified)d unified, %(occurs)d occurs cases" % stats,
              "%d violations" % len(violations))
        assert stats["unified"] > 1000
        assert not violations, violations[:5]


# 6 ---------------------------------------------------------------------------------

def test_c6_seqor_truth_table():
    prog = parse_clauses("yes1. yes2.")
    cases = [
        ("(write(l), yes1) |> (write(r), yes2).", Node(OK, OK)),
        ("(write(l), yes1) |> (write(r), no2).", Node(OK, FAILED)),
        ("(write(l), no1) |> (write(r), yes2).", Node(FAILED, OK)),
        ("(write(l), no1) |> (write(r), no2).", None),
    ]
    with criterion("6 seqor degree semantics", budget=1):
        for query, degree in cases:
            io = IoChannel()
            out = Solver().solve(prog, parse_query(query), io)
            if degree is None:
                assert isinstance(out, Failure), query
            else:
                assert isinstance(out, Success) and out.degree == degree, (query, out)
            # the right branch runs whatever the left did
            assert io.output == ["l", "r"], query
            assert [e.payload for e in out.trace if e.kind == "write"] == ["l", "r"]
            assert not law_violations(out.trace)
