"""SeqWeb: hereditary Harrop logic programming with sequential goals and
URL-keyed pages."""
from .builtins import IoChannel, Limits, eval_arith
from .errors import SeqWebError
from .goals import Clause, Page
from .solver import (
    Error, Failure, Leaf, Node, Pair, Solver, Success, run_session, solve,
)
from .syntax import ParseError, parse_page, parse_query
from .terms import Compound, Const, FreshGen, Int, Var, apply, unify
from .webreg import FileMapLoader, InMemoryLoader, Registry

__all__ = [
    "Clause", "Compound", "Const", "Error", "Failure", "FileMapLoader", "FreshGen",
    "InMemoryLoader", "Int", "IoChannel", "Leaf", "Limits", "Node", "Page", "Pair",
    "ParseError", "Registry", "SeqWebError", "Solver", "Success", "Var", "apply",
    "eval_arith", "parse_page", "parse_query", "run_session", "solve", "unify",
]
