"""Lexer, operator-precedence parser and printer for SeqWeb source text.

Operators, loosest first::

    :-   (clause neck, xfx)            ?-   (goal page marker, prefix)
    =>   implication goal (xfy)
    |>   sequential disjunction (xfy)
    &>   sequential conjunction (xfy)
    ;    disjunction (xfy)
    ,    conjunction (xfy)
    = < > >= =< is                    (xfx)
    + -                               (yfx)
    * //                              (yfx)
    -    unary minus                   (fy)

URLs are bare identifiers that may contain ``.``, ``/`` and ``-`` between
name characters, e.g. ``www.dau.com/arith``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, List, Optional

from .errors import SeqWebError
from .goals import (
    And, Atom, Clause, ClauseSet, DConj, DPage, Exists, ForAll, GPage, Goal,
    Implies, LinkD, LinkG, Or, Page, SeqAnd, SeqOr, clause_free_vars,
    goal_free_vars,
)
from .terms import Compound, Const, Int, Term, Var


class ParseError(SeqWebError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, source: Optional[str] = None):
        self.msg, self.line, self.col, self.source = msg, line, col, source
        where = "%d:%d" % (line, col)
        if source:
            where = "%s:%s" % (source, where)
        super().__init__("%s: %s" % (where, msg))


INFIX = {
    ":-": (1200, "xfx"),
    "=>": (1150, "xfy"),
    "|>": (1130, "xfy"),
    "&>": (1120, "xfy"),
    ";": (1100, "xfy"),
    ",": (1000, "xfy"),
    "=": (700, "xfx"),
    "<": (700, "xfx"),
    ">": (700, "xfx"),
    ">=": (700, "xfx"),
    "=<": (700, "xfx"),
    "is": (700, "xfx"),
    "+": (500, "yfx"),
    "-": (500, "yfx"),
    "*": (400, "yfx"),
    "//": (400, "yfx"),
}
PREFIX = {"-": (200, "fy"), "?-": (1200, "fx")}
ARG_PREC = 999

GOAL_OPS = {",": And, ";": Or, "&>": SeqAnd, "|>": SeqOr}

_SYMBOLS = sorted([":-", "?-", "=>", "|>", "&>", ">=", "=<", "//", "=", "<", ">",
                   "+", "-", "*", ";", ",", "(", ")"], key=len, reverse=True)

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<end>\.(?=\s|%|$))
  | (?P<int>\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*(?:(?:[./][A-Za-z0-9_]|-[A-Za-z_])[A-Za-z0-9_]*)*)
  | (?P<quoted>'(?:[^'\\]|''|\\.)*')
  | (?P<sym>""" + "|".join(re.escape(s) for s in _SYMBOLS) + r""")
""", re.VERBOSE)

_PLAIN_ATOM = re.compile(r"[a-z][A-Za-z0-9_]*(?:(?:[./][A-Za-z0-9_]|-[A-Za-z_])[A-Za-z0-9_]*)*\Z")


@dataclass
class Token:
    kind: str  # int var ident quoted sym end eof
    text: str
    line: int
    col: int
    # whether the next character immediately follows (for "f(" detection)
    pos: int = 0
    endpos: int = 0


def tokenize(text: str, source: Optional[str] = None) -> List[Token]:
    toks = []
    pos, line, line_start = 0, 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError("unexpected character %r" % text[pos], line, pos - line_start + 1, source)
        kind = m.lastgroup
        tok_text = m.group()
        if kind != "ws":
            if kind == "quoted":
                tok_text = _unquote(tok_text[1:-1])
            toks.append(Token(kind, tok_text, line, pos - line_start + 1, m.start(), m.end()))
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = m.start() + m.group().rfind("\n") + 1
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1, pos, pos))
    return toks


def _unquote(body: str) -> str:
    out, i = [], 0
    esc = {"n": "\n", "t": "\t", "\\": "\\", "'": "'"}
    while i < len(body):
        c = body[i]
        if c == "'" and body[i + 1:i + 2] == "'":
            out.append("'")
            i += 2
        elif c == "\\" and i + 1 < len(body):
            out.append(esc.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def is_url(name: str) -> bool:
    return "/" in name or "." in name


class _Parser:
    def __init__(self, text: str, source: Optional[str] = None):
        self.source = source
        self.toks = tokenize(text, source)
        self.i = 0
        self.anon = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.line, tok.col, self.source)

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_sym(self, s: str):
        if not (self.tok.kind == "sym" and self.tok.text == s):
            self.error("expected %r, found %r" % (s, self.tok.text or "end of input"))
        self.advance()

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    def clause_term(self) -> Term:
        """One ``.``-terminated item."""
        start = self.tok
        t = self.parse(1200)
        if self.tok.kind != "end":
            self.error("expected '.' after %s" % ("term" if start is not self.tok else "input"))
        self.advance()
        return t

    # precedence climbing
    def parse(self, max_prec: int) -> Term:
        left, left_prec = self.primary(max_prec)
        while True:
            tok = self.tok
            name = tok.text if tok.kind in ("sym", "ident") else None
            if name not in INFIX:
                break
            prec, typ = INFIX[name]
            if prec > max_prec:
                break
            lmax = prec if typ == "yfx" else prec - 1
            if left_prec > lmax:
                break
            self.advance()
            rmax = prec if typ == "xfy" else prec - 1
            right = self.parse(rmax)
            left, left_prec = Compound(name, (left, right)), prec
        return left

    def primary(self, max_prec: int):
        tok = self.advance()
        if tok.kind == "int":
            return Int(int(tok.text)), 0
        if tok.kind == "var":
            if tok.text == "_":
                self.anon += 1
                return Var("_#%d" % self.anon), 0
            return Var(tok.text), 0
        if tok.kind in ("ident", "quoted"):
            if self._open_paren_follows(tok):
                self.advance()
                args = [self.parse(ARG_PREC)]
                while self.tok.kind == "sym" and self.tok.text == ",":
                    self.advance()
                    args.append(self.parse(ARG_PREC))
                self.expect_sym(")")
                return Compound(tok.text, tuple(args)), 0
            if tok.kind == "ident" and tok.text == "module" and self.tok.kind in ("ident", "quoted"):
                target = self.advance()
                return Compound("module", (Const(target.text),)), 0
            return Const(tok.text), 0
        if tok.kind == "sym":
            if tok.text == "(":
                t = self.parse(1200)
                self.expect_sym(")")
                return t, 0
            if tok.text == "-" and self.tok.kind == "int" and self.tok.pos == tok.endpos:
                n = self.advance()
                return Int(-int(n.text)), 0
            if tok.text in PREFIX:
                prec, typ = PREFIX[tok.text]
                if prec > max_prec:
                    prec = max_prec
                arg = self.parse(prec if typ == "fy" else prec - 1)
                return Compound(tok.text, (arg,)), prec
        if tok.kind == "eof":
            self.error("unexpected end of input", tok)
        self.error("unexpected %r" % tok.text, tok)

    def _open_paren_follows(self, tok: Token) -> bool:
        nxt = self.tok
        return nxt.kind == "sym" and nxt.text == "(" and nxt.pos == tok.endpos


# -- raw term -> AST -------------------------------------------------------------

class _Converter:
    def __init__(self, parser: _Parser):
        self.p = parser
        self.at: Optional[Token] = None  # start of the item being converted

    def err(self, msg: str):
        self.p.error(msg, self.at or self.p.toks[max(self.p.i - 1, 0)])

    def goal(self, t: Term) -> Goal:
        if isinstance(t, Compound):
            f, args = t.functor, t.args
            if len(args) == 2 and f in GOAL_OPS:
                return GOAL_OPS[f](self.goal(args[0]), self.goal(args[1]))
            if len(args) == 2 and f == "=>":
                return Implies(self.dgroup(args[0]), self.goal(args[1]))
            if len(args) == 2 and f in ("forall", "exists"):
                name = self.binder(args[0], allow_symbol=(f == "forall"))
                body = self.goal(args[1])
                return ForAll(name, body) if f == "forall" else Exists(name, body)
            if f == "module" and len(args) == 1 and isinstance(args[0], Const):
                return LinkG(args[0].name)
            if f == ":-":
                self.err("':-' is only allowed at clause level")
            if f == "?-":
                self.err("'?-' is only allowed at the start of a page goal")
            return Atom(t)
        if isinstance(t, Const):
            if is_url(t.name):
                return LinkG(t.name)
            return Atom(t)
        if isinstance(t, Var):
            self.err("variable %s used as a goal" % t.name)
        self.err("number used as a goal")

    def binder(self, t: Term, allow_symbol: bool) -> str:
        if isinstance(t, Var) and not t.name.startswith("_#"):
            return t.name
        if allow_symbol and isinstance(t, Const) and not is_url(t.name):
            return t.name
        self.err("bad quantifier variable %s" % (t,))

    def d_items(self, t: Term, closed: tuple) -> list:
        """Flatten a D-formula into clauses and page links, in order."""
        if isinstance(t, Compound):
            f, args = t.functor, t.args
            if f == "," and len(args) == 2:
                return self.d_items(args[0], closed) + self.d_items(args[1], closed)
            if f == "forall" and len(args) == 2:
                name = self.binder(args[0], allow_symbol=False)
                return self.d_items(args[1], closed + (name,))
            if f == ":-" and len(args) == 2:
                return [self.clause(args[0], self.goal(args[1]), closed)]
            if f == "module" and len(args) == 1 and isinstance(args[0], Const):
                return [LinkD(args[0].name)]
            if f in GOAL_OPS or f in ("=>", "exists", "?-"):
                self.err("goal connective %r where a clause is expected" % f)
            return [self.clause(t, None, closed)]
        if isinstance(t, Const):
            if is_url(t.name):
                return [LinkD(t.name)]
            return [self.clause(t, None, closed)]
        self.err("clause head must be atomic, got %s" % (t,))

    def clause(self, head: Term, body: Optional[Goal], closed: tuple) -> Clause:
        if not isinstance(head, (Const, Compound)) or (isinstance(head, Const) and is_url(head.name)):
            self.err("clause head must be atomic, got %s" % (head,))
        return Clause(head, body, tuple(dict.fromkeys(closed)))

    def dgroup(self, t: Term):
        items = self.d_items(t, ())
        return group_items(items)


def group_items(items: list):
    parts, run = [], []
    for it in items:
        if isinstance(it, Clause):
            run.append(it)
        else:
            if run:
                parts.append(ClauseSet(tuple(run)))
                run = []
            parts.append(it)
    if run:
        parts.append(ClauseSet(tuple(run)))
    if len(parts) == 1:
        return parts[0]
    return DConj(tuple(parts))


def close_clause(c: Clause) -> Clause:
    """Universally close every free variable of a top-level clause."""
    names = tuple(dict.fromkeys(list(c.vars) + clause_free_vars(c)))
    return Clause(c.head, c.body, names)


def normalize(t: Term, closed: bool = True, source: Optional[str] = None) -> list:
    """Clauses and page links of a raw D-formula term, in source order."""
    p = _Parser("", source)
    items = _Converter(p).d_items(t, ())
    if closed:
        items = [close_clause(c) if isinstance(c, Clause) else c for c in items]
    return items


_G_ONLY = {";", "&>", "|>", "=>", "exists", "?-"}


def _g_only(t: Term) -> bool:
    if isinstance(t, Const):
        return is_url(t.name)
    if isinstance(t, Compound):
        if t.functor in _G_ONLY:
            return True
        if t.functor == "," and len(t.args) == 2:
            return _g_only(t.args[0]) or _g_only(t.args[1])
        if t.functor == "forall" and len(t.args) == 2:
            return _g_only(t.args[1]) or isinstance(t.args[0], Const)
    return False


def _header(p: _Parser) -> str:
    tok = p.tok
    t = p.clause_term()
    if isinstance(t, Compound) and t.functor == "mod" and len(t.args) == 1 and isinstance(t.args[0], Const):
        return t.args[0].name
    if isinstance(t, Compound) and t.functor == "module" and len(t.args) == 1 and isinstance(t.args[0], Const):
        return t.args[0].name
    p.error("page must start with a mod(<url>). header", tok)


def parse_page(text: str, source: Optional[str] = None) -> Page:
    p = _Parser(text, source)
    if p.at_end():
        p.error("missing mod(<url>). header")
    url = _header(p)
    conv = _Converter(p)
    raw = []
    while not p.at_end():
        tok = p.tok
        raw.append((tok, p.clause_term()))
    explicit = [r for r in raw if isinstance(r[1], Compound) and r[1].functor == "?-" and len(r[1].args) == 1]
    if explicit or (len(raw) == 1 and _g_only(raw[0][1])):
        if len(raw) != 1:
            p.error("mixed clause-and-goal page", (explicit or raw)[0][0] if len(raw) > 1 else raw[0][0])
        conv.at, t = raw[0]
        if explicit:
            t = t.args[0]
        g = conv.goal(t)
        return Page(url, GPage(g, tuple(goal_free_vars(g))))
    items = []
    for tok, t in raw:
        if _g_only(t):
            p.error("mixed clause-and-goal page", tok)
        items.extend(normalize_at(conv, t, tok))
    return Page(url, DPage(tuple(items)))


def normalize_at(conv: _Converter, t: Term, tok: Token) -> list:
    conv.at = tok
    items = conv.d_items(t, ())
    conv.at = None
    return [close_clause(c) if isinstance(c, Clause) else c for c in items]


def parse_query(text: str) -> Goal:
    p = _Parser(text, None)
    if p.at_end():
        p.error("empty query")
    # the final '.' is optional at the REPL
    if p.toks[-2].kind != "end":
        eof = p.toks[-1]
        p.toks.insert(len(p.toks) - 1, Token("end", ".", eof.line, eof.col, eof.pos, eof.pos))
    t = p.clause_term()
    if not p.at_end():
        p.error("unexpected input after query")
    return _Converter(p).goal(t)


def parse_term(text: str) -> Term:
    """A single term, optionally ``.``-terminated (used by ``read/1``)."""
    p = _Parser(text, None)
    if p.at_end():
        p.error("empty term")
    t = p.parse(ARG_PREC)
    if p.tok.kind == "end":
        p.advance()
    if not p.at_end():
        p.error("unexpected input after term")
    return t


def parse_clauses(text: str, source: Optional[str] = None) -> list:
    """Header-less clause text (no ``mod`` line), closed per clause."""
    p = _Parser(text, source)
    conv = _Converter(p)
    items = []
    while not p.at_end():
        tok = p.tok
        items.extend(normalize_at(conv, p.clause_term(), tok))
    return items


# -- printing -------------------------------------------------------------------

def quote_atom(name: str) -> str:
    if _PLAIN_ATOM.match(name) or "#" in name:
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'").replace("\n", "\\n") + "'"


def format_term(t: Term, quoted: bool = True, max_prec: int = 1200) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Int):
        return str(t.value)
    if isinstance(t, Const):
        return quote_atom(t.name) if quoted else t.name
    if isinstance(t, Compound):
        f, args = t.functor, t.args
        if len(args) == 2 and f in INFIX and t.level == 0:
            prec, typ = INFIX[f]
            lmax = prec if typ == "yfx" else prec - 1
            rmax = prec if typ == "xfy" else prec - 1
            left = format_term(args[0], quoted, lmax)
            right = format_term(args[1], quoted, rmax)
            sep = ", " if f == "," else " %s " % f
            s = left + sep + right
            return "(%s)" % s if prec > max_prec else s
        if len(args) == 1 and f == "-" and t.level == 0:
            prec = PREFIX["-"][0]
            inner = format_term(args[0], quoted, prec)
            if inner.startswith("-") or isinstance(args[0], Int):
                inner = "(%s)" % inner
            s = "-" + inner
            return "(%s)" % s if prec > max_prec else s
        name = quote_atom(f) if quoted else f
        return "%s(%s)" % (name, ", ".join(format_term(a, quoted, ARG_PREC) for a in args))
    raise TypeError(t)


_GOAL_PREC = {And: 1000, Or: 1100, SeqAnd: 1120, SeqOr: 1130}
_GOAL_SYM = {And: ",", Or: ";", SeqAnd: "&>", SeqOr: "|>"}


def format_goal(g: Goal, max_prec: int = 1200) -> str:
    if isinstance(g, Atom):
        return format_term(g.term, True, max_prec)
    if isinstance(g, LinkG):
        return g.url if _PLAIN_ATOM.match(g.url) and is_url(g.url) else "module %s" % quote_atom(g.url)
    if type(g) in _GOAL_PREC:
        prec = _GOAL_PREC[type(g)]
        sym = _GOAL_SYM[type(g)]
        sep = ", " if sym == "," else " %s " % sym
        s = format_goal(g.left, prec - 1) + sep + format_goal(g.right, prec)
        return "(%s)" % s if prec > max_prec else s
    if isinstance(g, (ForAll, Exists)):
        kw = "forall" if isinstance(g, ForAll) else "exists"
        return "%s(%s, %s)" % (kw, g.var, format_goal(g.body, ARG_PREC))
    if isinstance(g, Implies):
        s = "%s => %s" % (format_dgroup(g.hyp, 1149), format_goal(g.body, 1150))
        return "(%s)" % s if 1150 > max_prec else s
    raise TypeError(g)


def format_clause(c: Clause, max_prec: int = 1200, top: bool = True) -> str:
    head = format_term(c.head, True, 999 if c.body is not None else max_prec)
    if c.body is None:
        s = head
    else:
        s = "%s :- %s" % (head, format_goal(c.body, 1199))
        if max_prec < 1200:
            s = "(%s)" % s
    if not top and c.vars:
        inner = s
        for v in reversed(c.vars):
            inner = "forall(%s, %s)" % (v, inner)
        s = inner
    return s


def format_dgroup(d, max_prec: int = 1200) -> str:
    if isinstance(d, LinkD):
        return d.url if _PLAIN_ATOM.match(d.url) and is_url(d.url) else "module %s" % quote_atom(d.url)
    if isinstance(d, ClauseSet):
        parts = [format_clause(c, 999, top=False) for c in d.clauses]
    elif isinstance(d, DConj):
        parts = [format_dgroup(p, 999) for p in d.parts]
    else:
        raise TypeError(d)
    s = ", ".join(parts)
    if len(parts) > 1 and max_prec < 1000:
        s = "(%s)" % s
    return s


def format_page(page: Page) -> str:
    lines = ["mod(%s)." % (page.url if _PLAIN_ATOM.match(page.url) else quote_atom(page.url))]
    if isinstance(page.content, GPage):
        lines.append("?- %s." % format_goal(page.content.goal, 1199))
    else:
        for it in page.content.items:
            if isinstance(it, Clause):
                lines.append(format_clause(it) + ".")
            else:
                lines.append(format_dgroup(it) + ".")
    return "\n".join(lines) + "\n"


def iter_pages(texts) -> Iterator[Page]:
    for t in texts:
        yield parse_page(t)
