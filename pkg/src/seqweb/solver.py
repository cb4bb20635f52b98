"""Goal execution: depth-first search with scoped clauses, eigenconstant
levels and commit barriers for the two sequential connectives.

Each goal is run by a generator that yields once per solution, leaving its
bindings in place while suspended.  When a generator is exhausted it has
already rolled its own bindings back.  Sequential connectives take just the
first solution of a branch and ``close()`` the generator: the bindings stay,
the alternatives are gone.
"""
from __future__ import annotations

import sys
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import count
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .builtins import IoChannel, Limits, builtin_for, render
from .errors import LimitExceeded, SeqWebError
from .goals import (
    And, Atom, Clause, ClauseSet, DConj, DGroup, Exists, ForAll, Goal,
    Implies, LinkD, LinkG, Or, Renaming, SeqAnd, SeqOr, goal_free_vars,
    pred_key, rename_clause, subst_goal,
)
from .terms import Const, FreshGen, Term, Var, apply, is_ground, unify_into


# -- degrees ------------------------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    succeeded: bool


@dataclass(frozen=True)
class Node:
    """Outcome of one ``|>``: which branches succeeded."""

    left: "DegreeTree"
    right: "DegreeTree"


@dataclass(frozen=True)
class Pair:
    """Two independent degree-bearing subgoals of a conjunction."""

    left: "DegreeTree"
    right: "DegreeTree"


DegreeTree = Union[Leaf, Node, Pair]
OK = Leaf(True)
FAILED = Leaf(False)


def conj_degree(a: DegreeTree, b: DegreeTree) -> DegreeTree:
    if a == OK:
        return b
    if b == OK:
        return a
    return Pair(a, b)


def format_degree(d: DegreeTree) -> str:
    if isinstance(d, Leaf):
        return "ok" if d.succeeded else "fail"
    if isinstance(d, Node):
        return "(%s |> %s)" % (format_degree(d.left), format_degree(d.right))
    return "(%s & %s)" % (format_degree(d.left), format_degree(d.right))


def degree_succeeded(d: DegreeTree) -> bool:
    if isinstance(d, Leaf):
        return d.succeeded
    if isinstance(d, Node):
        return degree_succeeded(d.left) or degree_succeeded(d.right)
    return degree_succeeded(d.left) and degree_succeeded(d.right)


# -- events and outcomes ------------------------------------------------------

@dataclass(frozen=True)
class Event:
    seq: int
    kind: str  # write read exists-choice clause-choice seq-commit
    payload: str
    # innermost-first chain (node, side, parent) of sequential branches
    origin: Optional[tuple] = None

    def path(self) -> List[Tuple[int, str]]:
        out, o = [], self.origin
        while o is not None:
            out.append((o[0], o[1]))
            o = o[2]
        out.reverse()
        return out

    def line(self) -> str:
        return "%d %s %s" % (self.seq, self.kind, self.payload)


def export_trace(trace: Sequence[Event]) -> str:
    return "".join(e.line() + "\n" for e in trace)


@dataclass(frozen=True)
class Success:
    answer: Dict[Var, Term]
    degree: DegreeTree = OK
    trace: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class Failure:
    trace: tuple = field(default=(), repr=False)


@dataclass(frozen=True)
class Error:
    message: str
    trace: tuple = field(default=(), repr=False)


Outcome = Union[Success, Failure, Error]


# -- program frames -----------------------------------------------------------

class Frame:
    """One scope of clauses; ``parent`` is the enclosing program."""

    __slots__ = ("clauses", "parent", "_index", "_signature")

    def __init__(self, clauses: Sequence[Clause], parent: Optional["Frame"] = None):
        self.clauses = tuple(clauses)
        self.parent = parent
        index: Dict[tuple, list] = {}
        for c in self.clauses:
            index.setdefault(c.key, []).append(c)
        self._index = index
        self._signature = None

    def signature(self) -> frozenset:
        """Every clause in scope, as a set; equal signatures prove the same
        things, whichever order the frames were pushed in."""
        if self._signature is None:
            base = self.parent.signature() if self.parent is not None else frozenset()
            self._signature = base | frozenset(self.clauses)
        return self._signature

    def candidates(self, key) -> List[Clause]:
        out: List[Clause] = []
        f = self
        while f is not None:
            out.extend(f._index.get(key, ()))
            f = f.parent
        return out


EMPTY = Frame(())


def _is_var_name(name: str) -> bool:
    return name[:1].isupper() or name[:1] == "_"


class Machine:
    """Mutable state of one run.  Not shareable between threads."""

    def __init__(self, registry=None, io: Optional[IoChannel] = None, limits: Limits = Limits(),
                 occurs_check: bool = True, loop_check: bool = False):
        self.registry = registry
        self.io = io if io is not None else IoChannel()
        self.limits = limits
        self.occurs_check = occurs_check
        self.loop_check = loop_check
        self.bindings: Dict[Var, Term] = {}
        self.trail: List[Var] = []
        self.trace: List[Event] = []
        self.fresh = FreshGen()
        self.steps = 0
        self._watched: Dict[Var, str] = {}
        self._nodes = count()

    # bindings
    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int):
        trail, bindings = self.trail, self.bindings
        while len(trail) > mark:
            del bindings[trail.pop()]

    def unify(self, a: Term, b: Term, origin=None) -> bool:
        mark = len(self.trail)
        watched = self._watched

        def bind(v, t):
            self.bindings[v] = t
            self.trail.append(v)
            if v in watched:
                self.emit("exists-choice", "%s = %s" % (watched[v], render(apply(self.bindings, t))), origin)

        if unify_into(a, b, self.bindings, bind, self.occurs_check):
            return True
        self.undo(mark)
        return False

    def emit(self, kind: str, payload: str, origin=None):
        self.trace.append(Event(len(self.trace), kind, payload, origin))

    # program hypotheses
    def dclauses(self, d: DGroup) -> tuple:
        if isinstance(d, ClauseSet):
            return d.clauses
        if isinstance(d, LinkD):
            if self.registry is None:
                raise SeqWebError("no page registry to resolve %s" % d.url)
            return self.registry.resolve_d(d.url, d.renames)
        if isinstance(d, DConj):
            out: list = []
            for p in d.parts:
                out.extend(self.dclauses(p))
            return tuple(out)
        raise TypeError(d)

    # search
    def solve(self, g: Goal, prog: Frame, level: int = 0, depth: int = 0,
              origin=None, anc=None) -> Iterator[DegreeTree]:
        self.steps += 1
        if self.steps > self.limits.max_steps:
            raise LimitExceeded("step limit %d exceeded" % self.limits.max_steps)
        if depth > self.limits.max_depth:
            raise LimitExceeded("depth limit %d exceeded" % self.limits.max_depth)
        depth += 1
        t = type(g)

        if t is Atom:
            yield from self._atom(g.term, prog, level, depth, origin, anc)

        elif t is And:
            for d1 in self.solve(g.left, prog, level, depth, origin, anc):
                for d2 in self.solve(g.right, prog, level, depth, origin, anc):
                    yield conj_degree(d1, d2)

        elif t is Or:
            yield from self.solve(g.left, prog, level, depth, origin, anc)
            yield from self.solve(g.right, prog, level, depth, origin, anc)

        elif t is Exists:
            v = self.fresh.var(level, g.var)
            self._watched[v] = g.var
            body = subst_goal(g.body, Renaming({g.var: v}))
            yield from self.solve(body, prog, level, depth, origin, anc)

        elif t is ForAll:
            if _is_var_name(g.var):
                r = Renaming({g.var: self.fresh.const(level + 1)})
            else:
                r = Renaming({}, {g.var: Const(self.fresh.symbol(g.var), level + 1)})
            yield from self.solve(subst_goal(g.body, r), prog, level + 1, depth, origin, anc)

        elif t is Implies:
            frame = Frame(self.dclauses(g.hyp), prog)
            yield from self.solve(g.body, frame, level, depth, origin, anc)

        elif t is SeqAnd:
            node = next(self._nodes)
            mark = self.mark()
            d1 = self._first(g.left, prog, level, depth, (node, "L", origin), anc)
            self.emit("seq-commit", "&> #%d left" % node, (node, "C", origin))
            if d1 is None:
                return
            for d2 in self.solve(g.right, prog, level, depth, (node, "R", origin), anc):
                yield conj_degree(d1, d2)
            self.undo(mark)

        elif t is SeqOr:
            node = next(self._nodes)
            mark = self.mark()
            d1 = self._first(g.left, prog, level, depth, (node, "L", origin), anc)
            self.emit("seq-commit", "|> #%d left" % node, (node, "C", origin))
            d2 = self._first(g.right, prog, level, depth, (node, "R", origin), anc)
            self.emit("seq-commit", "|> #%d right" % node, (node, "D", origin))
            if d1 is not None or d2 is not None:
                yield Node(d1 or FAILED, d2 or FAILED)
            self.undo(mark)

        elif t is LinkG:
            if self.registry is None:
                raise SeqWebError("no page registry to resolve %s" % g.url)
            goal = self.registry.resolve_g(g.url, self.fresh, level)
            yield from self.solve(goal, prog, level, depth, origin, anc)

        else:
            raise TypeError("not a goal: %r" % (g,))

    def _first(self, g, prog, level, depth, origin, anc) -> Optional[DegreeTree]:
        """First solution of ``g``, keeping its bindings and dropping its
        alternatives; None (bindings restored) if it has none."""
        gen = self.solve(g, prog, level, depth, origin, anc)
        try:
            return next(gen, None)
        finally:
            gen.close()

    def _atom(self, term, prog, level, depth, origin, anc):
        fn = builtin_for(term)
        if fn is not None:
            mark = self.mark()
            if fn(self, term.args, origin):
                yield OK
            self.undo(mark)
            return

        if self.loop_check:
            # a ground atom already being proved under the same clauses
            # cannot need itself; prune so finite ground programs terminate
            resolved = apply(self.bindings, term)
            if is_ground(resolved):
                sig = prog.signature()
                a = anc
                while a is not None:
                    if a[0] == resolved and a[1] == sig:
                        return
                    a = a[2]
                anc = (resolved, sig, anc)

        key = pred_key(term)
        cands = prog.candidates(key)
        many = len(cands) > 1
        for i, clause in enumerate(cands):
            mark = self.mark()
            c = rename_clause(clause, self.fresh, level)
            if self.unify(term, c.head, origin):
                if many:
                    self.emit("clause-choice", "%s/%d #%d" % (key[0], key[1], i + 1), origin)
                if c.body is None:
                    yield OK
                else:
                    yield from self.solve(c.body, prog, level, depth, origin, anc)
            self.undo(mark)


def _as_frame(program) -> Frame:
    if isinstance(program, Frame):
        return program
    return Frame(tuple(program or ()))


# Nested generators recurse on the C stack when resumed, so deep searches run
# on a worker thread with a large stack instead of the caller's.
_STACK_BYTES = 512 * 1024 * 1024


@contextmanager
def _recursion_room(limits: Limits):
    """Raise the interpreter recursion limit for one deep run, then restore."""
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 12 * limits.max_depth + 5000))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


def call_deep(fn, *args):
    """Run ``fn(*args)`` on a thread with a large stack; re-raise its errors."""
    box: dict = {}

    def target():
        try:
            box["value"] = fn(*args)
        except BaseException as e:  # handed back to the caller
            box["error"] = e

    old = threading.stack_size(_STACK_BYTES)
    try:
        worker = threading.Thread(target=target, name="seqweb-solver")
        worker.start()
    finally:
        threading.stack_size(old)
    worker.join()
    if "error" in box:
        raise box["error"]
    return box["value"]


class Solver:
    """Runs goals against clause lists, resolving page links via ``registry``."""

    def __init__(self, registry=None, limits: Limits = Limits(), occurs_check: bool = True,
                 loop_check: bool = False):
        self.registry = registry
        self.limits = limits
        self.occurs_check = occurs_check
        self.loop_check = loop_check
        self.last_machine: Optional[Machine] = None

    def machine(self, io: Optional[IoChannel] = None) -> Machine:
        m = Machine(self.registry, io, self.limits, self.occurs_check, self.loop_check)
        self.last_machine = m
        return m

    def solutions(self, program, goal: Goal, io: Optional[IoChannel] = None) -> Iterator[Success]:
        """Every success in search order, on the caller's stack.

        Errors propagate as exceptions.  Deep searches need ``all_solutions``
        or ``solve``, which run on a large stack.
        """
        m = self.machine(io)
        qvars = [Var(n) for n in goal_free_vars(goal) if not n.startswith("_")]
        for d in m.solve(goal, _as_frame(program)):
            answer = {v: apply(m.bindings, v) for v in qvars}
            yield Success(answer, d, tuple(m.trace))

    def all_solutions(self, program, goal: Goal, io: Optional[IoChannel] = None,
                      limit: Optional[int] = None) -> List[Success]:
        def collect():
            out = []
            for sol in self.solutions(program, goal, io):
                out.append(sol)
                if limit is not None and len(out) >= limit:
                    break
            return out
        with _recursion_room(self.limits):
            return call_deep(collect)

    def solve(self, program, goal: Goal, io: Optional[IoChannel] = None) -> Outcome:
        with _recursion_room(self.limits):
            return call_deep(self._solve_first, program, goal, io)

    def _solve_first(self, program, goal, io) -> Outcome:
        gen = self.solutions(program, goal, io)
        try:
            return next(gen)
        except StopIteration:
            return Failure(tuple(self.last_machine.trace))
        except (SeqWebError, RecursionError) as e:
            msg = "recursion too deep" if isinstance(e, RecursionError) else str(e)
            return Error(msg, tuple(self.last_machine.trace))
        finally:
            gen.close()


def solve(program, goal: Goal, io: Optional[IoChannel] = None, limits: Limits = Limits(),
          registry=None, occurs_check: bool = True) -> Outcome:
    return Solver(registry, limits, occurs_check).solve(program, goal, io)


def run_session(program, goal: Goal, scripted_input: Sequence[str], registry=None,
                limits: Limits = Limits()) -> Tuple[Outcome, List[str]]:
    """Run ``goal`` with ``read/1`` fed from ``scripted_input``; return the
    outcome and every line written."""
    io = IoChannel(scripted_input)
    outcome = Solver(registry, limits).solve(program, goal, io)
    return outcome, list(io.output)
