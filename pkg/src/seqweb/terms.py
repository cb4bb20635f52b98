"""First-order terms, triangular substitutions and level-aware unification.

Every variable and constant carries a *level*.  Source text only ever
produces level 0; the solver mints higher levels when it enters a universal
goal.  Unification refuses to let a variable capture a constant minted at a
deeper level, which is what keeps eigenconstants inside their scope.

Fresh symbols contain ``#``, a character the lexer never accepts, so they
cannot collide with anything a user can write.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Mapping, Optional


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str
    level: int = 0

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const(Term):
    name: str
    level: int = 0

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Int(Term):
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Compound(Term):
    functor: str
    args: tuple
    # non-zero only for functors renamed by a universal goal over a symbol
    level: int = 0

    def __post_init__(self):
        if not self.args:
            raise ValueError("compound term needs at least one argument; use Const")
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    @property
    def arity(self) -> int:
        return len(self.args)

    def __str__(self):
        return "%s(%s)" % (self.functor, ", ".join(map(str, self.args)))


Subst = dict  # Var -> Term, triangular


@dataclass
class FreshGen:
    """Mints identifiers outside the source namespace."""

    counter: int = 0

    def _next(self) -> int:
        n = self.counter
        self.counter += 1
        return n

    def const(self, level: int, base: str = "c") -> Const:
        if level < 1:
            raise ValueError("eigenconstants live at level >= 1")
        return Const("%s#%d" % (base, self._next()), level)

    def var(self, level: int, base: str = "_G") -> Var:
        return Var("%s#%d" % (base.split("#")[0], self._next()), level)

    def symbol(self, base: str) -> str:
        return "%s#%d" % (base.split("#")[0], self._next())


def fresh_const(gen: FreshGen, level: int) -> Const:
    return gen.const(level)


def walk(t: Term, s: Mapping) -> Term:
    while isinstance(t, Var):
        bound = s.get(t)
        if bound is None:
            return t
        t = bound
    return t


def apply(s: Mapping, t: Term) -> Term:
    """Resolve ``t`` under ``s`` until no bound variable remains."""
    t = walk(t, s)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(apply(s, a) for a in t.args), t.level)
    return t


def term_vars(t: Term) -> Iterator[Var]:
    """Variables of ``t`` in left-to-right order of first occurrence."""
    seen = set()
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t not in seen:
                seen.add(t)
                yield t
        elif isinstance(t, Compound):
            stack.extend(reversed(t.args))


def is_ground(t: Term) -> bool:
    return next(term_vars(t), None) is None


def max_const_level(t: Term) -> int:
    """Highest level of any constant or renamed functor inside ``t``."""
    if isinstance(t, Const):
        return t.level
    if isinstance(t, Compound):
        return max([t.level] + [max_const_level(a) for a in t.args])
    return 0


def rename_term(t: Term, mapping: Mapping, symbols: Optional[Mapping] = None) -> Term:
    """Replace variables per ``mapping`` and (optionally) constants/functors per
    ``symbols`` (name -> Const).  No walking: this is syntactic."""
    if isinstance(t, Var):
        return mapping.get(t, t)
    if symbols:
        if isinstance(t, Const) and t.name in symbols and t.level == 0:
            return symbols[t.name]
        if isinstance(t, Compound):
            args = tuple(rename_term(a, mapping, symbols) for a in t.args)
            sym = symbols.get(t.functor) if t.level == 0 else None
            if sym is not None:
                return Compound(sym.name, args, sym.level)
            return Compound(t.functor, args, t.level)
        return t
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(rename_term(a, mapping) for a in t.args), t.level)
    return t


def _check_and_lower(v: Var, t: Term, s: Mapping, bind: Callable, occurs_check: bool) -> bool:
    """Walk ``t`` before binding ``v`` to it.

    Fails on an occurrence of ``v`` (when checking) or on a constant from a
    deeper scope; rebinds deeper unbound variables down to ``v``'s level so a
    later binding cannot smuggle an eigenconstant out.
    """
    stack = [t]
    while stack:
        u = walk(stack.pop(), s)
        if isinstance(u, Var):
            if u == v:
                if occurs_check:
                    return False
            elif u.level > v.level:
                # the name records the origin level, so it cannot alias
                bind(u, Var("%s^%d" % (u.name, u.level), v.level))
        elif isinstance(u, Const):
            if u.level > v.level:
                return False
        elif isinstance(u, Compound):
            if u.level > v.level:
                return False
            stack.extend(u.args)
    return True


def unify_into(t1: Term, t2: Term, s: Mapping, bind: Callable, occurs_check: bool = True) -> bool:
    """Unify against bindings ``s``, recording new bindings through ``bind``.

    On failure some bindings may already have been recorded; the caller is
    responsible for discarding them (a copy or a trail rollback).
    """
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        a = walk(a, s)
        b = walk(b, s)
        if a is b:
            continue
        if isinstance(a, Var):
            if isinstance(b, Var):
                if a == b:
                    continue
                # bind the deeper variable so the shallower one survives
                if a.level < b.level:
                    a, b = b, a
                bind(a, b)
                continue
            if not _check_and_lower(a, b, s, bind, occurs_check):
                return False
            bind(a, b)
        elif isinstance(b, Var):
            if not _check_and_lower(b, a, s, bind, occurs_check):
                return False
            bind(b, a)
        elif isinstance(a, Compound):
            if not (isinstance(b, Compound) and a.functor == b.functor
                    and a.level == b.level and len(a.args) == len(b.args)):
                return False
            stack.extend(zip(a.args, b.args))
        elif a != b:
            return False
    return True


def unify(t1: Term, t2: Term, s: Optional[Mapping] = None, occurs_check: bool = True) -> Optional[Subst]:
    """Most general unifier extending ``s``, or None.

    >>> X, Y = Var("X"), Var("Y")
    >>> r = unify(Compound("f", (X, Const("b"))), Compound("f", (Const("a"), Y)))
    >>> apply(r, X), apply(r, Y)
    (Const(name='a', level=0), Const(name='b', level=0))
    """
    out = dict(s or {})
    if unify_into(t1, t2, out, out.__setitem__, occurs_check):
        return out
    return None


def compose_resolved(s: Mapping) -> Subst:
    """Fully resolved (idempotent, non-triangular) view of ``s``."""
    return {v: apply(s, v) for v in s}

