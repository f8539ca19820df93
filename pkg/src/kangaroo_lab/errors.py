"""Exception types shared across the package."""


class KangarooLabError(Exception):
    pass


class PrecisionError(KangarooLabError):
    """An order or degree question cannot be answered inside the jet budget."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class NotZRegular(KangarooLabError):
    """No generator has a unit coefficient in front of z^c."""


class ParseError(KangarooLabError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class InternalAssertion(KangarooLabError):
    """A mathematical invariant that must always hold was violated."""


def check(condition, message):
    if not condition:
        raise InternalAssertion(message)
