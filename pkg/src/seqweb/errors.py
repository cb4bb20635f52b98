"""Exception hierarchy.  Logical failure is never an exception."""


class SeqWebError(Exception):
    pass


class EvalError(SeqWebError):
    """Arithmetic on unbound or non-numeric terms, division by zero."""


class InputExhausted(SeqWebError):
    pass


class LimitExceeded(SeqWebError):
    pass


class ResolveError(SeqWebError):
    pass


class PageNotFound(ResolveError):
    pass


class WrongPageKind(ResolveError):
    pass


class ImportCycle(ResolveError):
    pass
