"""Evaluable predicates: integer arithmetic, comparison, ``=``, read/write."""
from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, List, Mapping, Optional

from .errors import EvalError, InputExhausted, SeqWebError
from .terms import Compound, Const, Int, Term, Var, apply, walk


@dataclass(frozen=True)
class Limits:
    max_depth: int = 10_000
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.max_depth < 1 or self.max_steps < 1:
            raise ValueError("limits must be positive")


class IoChannel:
    """Line-oriented input source and output sink.

    ``echo`` receives each written line as it happens (the CLI passes a
    printer); ``output`` keeps the full transcript either way.
    """

    def __init__(self, lines: Iterable[str] = (), echo: Optional[Callable[[str], None]] = None):
        self._input: Iterator[str] = iter(lines)
        self.output: List[str] = []
        self.echo = echo

    def read_line(self) -> str:
        try:
            line = next(self._input)
        except StopIteration:
            raise InputExhausted("read/1: input exhausted") from None
        return line.rstrip("\r\n")

    def write_line(self, text: str):
        self.output.append(text)
        if self.echo is not None:
            self.echo(text)


_ARITH = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
}


def eval_arith(t: Term, s: Mapping = None) -> int:
    s = s or {}
    t = walk(t, s)
    if isinstance(t, Int):
        return t.value
    if isinstance(t, Var):
        raise EvalError("arithmetic: unbound variable %s" % t.name)
    if isinstance(t, Compound) and t.level == 0:
        if len(t.args) == 2:
            if t.functor in _ARITH:
                return _ARITH[t.functor](eval_arith(t.args[0], s), eval_arith(t.args[1], s))
            if t.functor == "//":
                a, b = eval_arith(t.args[0], s), eval_arith(t.args[1], s)
                if b == 0:
                    raise EvalError("arithmetic: division by zero")
                # truncate toward zero like ISO Prolog
                q = abs(a) // abs(b)
                return q if (a >= 0) == (b >= 0) else -q
        if len(t.args) == 1 and t.functor == "-":
            return -eval_arith(t.args[0], s)
        raise EvalError("arithmetic: unknown function %s/%d" % (t.functor, len(t.args)))
    raise EvalError("arithmetic: not a number: %s" % (t,))


_COMPARE = {
    "<": operator.lt,
    ">": operator.gt,
    ">=": operator.ge,
    "=<": operator.le,
}


def render(t: Term) -> str:
    """Text written by ``write/1``: canonical syntax, atoms unquoted."""
    from .syntax import format_term
    return format_term(t, quoted=False)


def read_term(line: str) -> Term:
    """Parse one input line.  Capitalised words are names, not variables."""
    from .syntax import parse_term
    try:
        t = parse_term(line)
    except SeqWebError as e:
        raise SeqWebError("read/1: cannot parse input %r (%s)" % (line, e)) from None
    return _vars_to_consts(t)


def _vars_to_consts(t: Term) -> Term:
    if isinstance(t, Var):
        return Const(t.name)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_vars_to_consts(a) for a in t.args))
    return t


# Each builtin gets (machine, args, origin) and returns True/False.  It may
# bind through machine.unify; the machine rolls back on failure.

def _bi_eq(m, args, origin):
    return m.unify(args[0], args[1], origin)


def _bi_is(m, args, origin):
    return m.unify(args[0], Int(eval_arith(args[1], m.bindings)), origin)


def _make_compare(op):
    def compare(m, args, origin):
        return op(eval_arith(args[0], m.bindings), eval_arith(args[1], m.bindings))
    return compare


def _bi_read(m, args, origin):
    line = m.io.read_line()
    m.emit("read", line, origin)
    return m.unify(args[0], read_term(line), origin)


def _bi_write(m, args, origin):
    text = render(apply(m.bindings, args[0]))
    m.io.write_line(text)
    m.emit("write", text, origin)
    return True


BUILTINS = {
    ("=", 2): _bi_eq,
    ("is", 2): _bi_is,
    ("read", 1): _bi_read,
    ("write", 1): _bi_write,
}
BUILTINS.update({(name, 2): _make_compare(op) for name, op in _COMPARE.items()})


def builtin_for(t: Term):
    if isinstance(t, Compound) and t.level == 0:
        return BUILTINS.get((t.functor, len(t.args)))
    return None


def call_builtin(atom: Term, machine, origin=()) -> bool:
    fn = builtin_for(atom)
    if fn is None:
        raise KeyError("not a builtin: %s" % (atom,))
    mark = machine.mark()
    ok = fn(machine, atom.args, origin)
    if not ok:
        machine.undo(mark)
    return ok
