"""Abstract syntax of goals, clauses and pages."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

from .terms import Compound, Const, FreshGen, Term, Var, rename_term, term_vars


class Goal:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Goal):
    term: Term  # Const or Compound

    def __post_init__(self):
        if not isinstance(self.term, (Const, Compound)):
            raise TypeError("atomic goal must be a constant or compound, got %r" % (self.term,))


@dataclass(frozen=True)
class And(Goal):
    left: Goal
    right: Goal


@dataclass(frozen=True)
class Or(Goal):
    left: Goal
    right: Goal


@dataclass(frozen=True)
class SeqAnd(Goal):
    left: Goal
    right: Goal


@dataclass(frozen=True)
class SeqOr(Goal):
    left: Goal
    right: Goal


@dataclass(frozen=True)
class ForAll(Goal):
    # an upper-case name quantifies a variable, a lower-case one a symbol
    var: str
    body: Goal


@dataclass(frozen=True)
class Exists(Goal):
    var: str
    body: Goal


@dataclass(frozen=True)
class Implies(Goal):
    hyp: "DGroup"
    body: Goal


@dataclass(frozen=True)
class LinkG(Goal):
    url: str


@dataclass(frozen=True)
class Clause:
    head: Term
    body: Optional[Goal] = None
    vars: tuple = ()  # names closed over by this clause

    def __post_init__(self):
        if not isinstance(self.head, (Const, Compound)):
            raise TypeError("clause head must be atomic, got %r" % (self.head,))

    @property
    def key(self):
        return pred_key(self.head)


class DGroup:
    __slots__ = ()


@dataclass(frozen=True)
class ClauseSet(DGroup):
    clauses: tuple


@dataclass(frozen=True)
class LinkD(DGroup):
    url: str
    # symbol renamings imposed by enclosing universal goals, applied on load
    renames: tuple = ()


@dataclass(frozen=True)
class DConj(DGroup):
    """Conjunction mixing inline clauses and page links, kept in source order."""

    parts: tuple


@dataclass(frozen=True)
class DPage:
    items: tuple  # Clause | LinkD


@dataclass(frozen=True)
class GPage:
    goal: Goal
    vars: tuple = ()  # free variable names, existential per resolution


@dataclass(frozen=True)
class Page:
    url: str
    content: Union[DPage, GPage]

    def __post_init__(self):
        if not self.url or any(c.isspace() for c in self.url):
            raise ValueError("bad page url %r" % (self.url,))


def pred_key(t: Term):
    if isinstance(t, Compound):
        return (t.functor, len(t.args), t.level)
    return (t.name, 0, t.level)


# -- substitution over goals ------------------------------------------------

@dataclass
class Renaming:
    """A capture-avoiding rename of variable names and symbol names."""

    vars: dict = field(default_factory=dict)  # name -> Term
    symbols: dict = field(default_factory=dict)  # name -> Const

    def without(self, name: str) -> "Renaming":
        if name not in self.vars and name not in self.symbols:
            return self
        return Renaming({k: v for k, v in self.vars.items() if k != name},
                        {k: v for k, v in self.symbols.items() if k != name})

    def without_all(self, names) -> "Renaming":
        r = self
        for n in names:
            r = r.without(n)
        return r

    def __bool__(self):
        return bool(self.vars or self.symbols)

    def term(self, t: Term) -> Term:
        mapping = {Var(n): v for n, v in self.vars.items()}
        return rename_term(t, mapping, self.symbols)


def subst_goal(g: Goal, r: Renaming) -> Goal:
    if not r:
        return g
    if isinstance(g, Atom):
        return Atom(r.term(g.term))
    if isinstance(g, (And, Or, SeqAnd, SeqOr)):
        return type(g)(subst_goal(g.left, r), subst_goal(g.right, r))
    if isinstance(g, (ForAll, Exists)):
        inner = r.without(g.var)
        return type(g)(g.var, subst_goal(g.body, inner))
    if isinstance(g, Implies):
        return Implies(subst_dgroup(g.hyp, r), subst_goal(g.body, r))
    if isinstance(g, LinkG):
        return g
    raise TypeError(g)


def subst_clause(c: Clause, r: Renaming) -> Clause:
    inner = r.without_all(c.vars)
    if not inner:
        return c
    body = subst_goal(c.body, inner) if c.body is not None else None
    return Clause(inner.term(c.head), body, c.vars)


def subst_dgroup(d: DGroup, r: Renaming) -> DGroup:
    if isinstance(d, ClauseSet):
        return ClauseSet(tuple(subst_clause(c, r) for c in d.clauses))
    if isinstance(d, LinkD):
        if not r.symbols:
            return d
        # page clauses are closed, so only symbol renames reach them
        renames = dict(d.renames)
        for k, v in renames.items():
            if v.name in r.symbols:
                renames[k] = r.symbols[v.name]
        for k, v in r.symbols.items():
            renames.setdefault(k, v)
        return LinkD(d.url, tuple(renames.items()))
    if isinstance(d, DConj):
        return DConj(tuple(subst_dgroup(p, r) for p in d.parts))
    raise TypeError(d)


def rename_clause(c: Clause, gen: FreshGen, level: int = 0) -> Clause:
    """Fresh copy of ``c`` with its closed variables renamed at ``level``."""
    if not c.vars:
        return c
    r = Renaming({n: gen.var(level, n) for n in c.vars})
    body = subst_goal(c.body, r) if c.body is not None else None
    return Clause(r.term(c.head), body, ())


def rename_symbols_in_clause(c: Clause, symbols: Mapping) -> Clause:
    return subst_clause(c, Renaming({}, dict(symbols)))


# -- free variables -----------------------------------------------------------

def _term_names(t: Term) -> Iterator[str]:
    for v in term_vars(t):
        yield v.name


def goal_free_vars(g: Goal) -> list:
    out: dict = {}
    _goal_fv(g, frozenset(), out)
    return list(out)


def _goal_fv(g: Goal, bound: frozenset, out: dict):
    if isinstance(g, Atom):
        for n in _term_names(g.term):
            if n not in bound:
                out.setdefault(n, None)
    elif isinstance(g, (And, Or, SeqAnd, SeqOr)):
        _goal_fv(g.left, bound, out)
        _goal_fv(g.right, bound, out)
    elif isinstance(g, (ForAll, Exists)):
        _goal_fv(g.body, bound | {g.var}, out)
    elif isinstance(g, Implies):
        _dgroup_fv(g.hyp, bound, out)
        _goal_fv(g.body, bound, out)


def _dgroup_fv(d: DGroup, bound: frozenset, out: dict):
    if isinstance(d, ClauseSet):
        for c in d.clauses:
            _clause_fv(c, bound, out)
    elif isinstance(d, DConj):
        for p in d.parts:
            _dgroup_fv(p, bound, out)


def _clause_fv(c: Clause, bound: frozenset, out: dict):
    inner = bound | set(c.vars)
    for n in _term_names(c.head):
        if n not in inner:
            out.setdefault(n, None)
    if c.body is not None:
        _goal_fv(c.body, inner, out)


def clause_free_vars(c: Clause) -> list:
    out: dict = {}
    _clause_fv(Clause(c.head, c.body, ()), frozenset(), out)
    return list(out)


def contains_seq_or(g: Goal) -> bool:
    if isinstance(g, SeqOr):
        return True
    if isinstance(g, (And, Or, SeqAnd)):
        return contains_seq_or(g.left) or contains_seq_or(g.right)
    if isinstance(g, (ForAll, Exists, Implies)):
        return contains_seq_or(g.body)
    return False
