"""Exception hierarchy shared across the package."""


class DaeStructError(Exception):
    """Base class for all errors raised by daestruct."""


class StructurallySingular(DaeStructError, ValueError):
    """The signature matrix admits no transversal."""

    def __init__(self, message="structurally singular: no transversal"):
        super().__init__(message)


class EmptyColumn(StructurallySingular):
    def __init__(self, column):
        self.column = column
        super().__init__(f"structurally singular: column {column} has no finite entry")


class DimensionMismatch(DaeStructError, ValueError):
    pass


class NegativeParameter(DaeStructError, ValueError):
    pass


class InvalidBlockStructure(DaeStructError, ValueError):
    pass


class TooLarge(DaeStructError, ValueError):
    def __init__(self, n, limit):
        self.n = n
        self.limit = limit
        super().__init__(f"n={n} exceeds the oracle limit of {limit}")


class FormatError(DaeStructError, ValueError):
    """Malformed interchange document. ``location`` points at the offending part."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class DuplicateEntry(FormatError):
    pass


class IndexOutOfRange(FormatError, IndexError):
    pass


class DaeSyntaxError(DaeStructError, ValueError):
    def __init__(self, line, col, message):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}")


class UndeclaredVariable(DaeStructError, ValueError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"undeclared variable {name!r}")


class NonSquare(DaeStructError, ValueError):
    def __init__(self, eqs, vars):
        self.eqs = eqs
        self.vars = vars
        super().__init__(f"system is not square: {eqs} equations, {vars} variables")
