"""Exception hierarchy shared by all modules.

The CLI maps any :class:`IGError` to exit code 1 and prints its class name.
"""


class IGError(Exception):
    """Base class for domain errors."""


class NotAssociative(IGError):
    def __init__(self, a, b, c):
        super().__init__(f"(a*b)*c != a*(b*c) for a={a}, b={b}, c={c}")
        self.witness = (a, b, c)


class OutOfRange(IGError):
    def __init__(self, row, col, value, n):
        super().__init__(f"table[{row}][{col}] = {value} not in 0..{n - 1}")
        self.cell = (row, col)


class NotSquare(IGError):
    pass


class NotIdempotent(IGError):
    pass


class BaseNotInClass(IGError):
    pass


class NoIdempotents(IGError):
    pass


class EmptyWord(IGError):
    pass


class CapExceeded(IGError):
    pass


class TooManyVariables(IGError):
    pass


class ClassNotAbove(IGError):
    pass


class InconsistentAction(IGError):
    pass


class InvalidSquare(IGError):
    pass


class SchreierNotFound(IGError):
    def __init__(self, max_len, missing):
        super().__init__(
            f"no Schreier word of length <= {max_len} for L-classes {sorted(missing)}"
        )
        self.max_len = max_len
        self.missing = missing


class NotSeminormal(IGError):
    pass


class UnknownBuiltin(IGError):
    pass


class ParseError(IGError):
    pass
