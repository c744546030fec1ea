"""Exception hierarchy. Each CLI-visible class carries its exit code."""


class ChernlabError(Exception):
    exit_code = 1


class ContextError(ChernlabError):
    """Objects from incompatible rings, fields or free modules were combined."""


class DomainError(ChernlabError, ValueError):
    """An argument is outside the domain of an operation."""


class ParseError(ChernlabError):
    exit_code = 2

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
        elif column is not None:
            where = f"column {column}"
        super().__init__(f"{where}: {message}" if where else message)


class PreconditionError(ChernlabError):
    exit_code = 3


class ResourceError(ChernlabError):
    """The working degree guard or an iteration budget was exceeded."""

    exit_code = 4


class StabilizationError(ResourceError):
    """A Hilbert-Samuel table did not stabilize within the allowed range."""


class GenericityError(ChernlabError):
    """Random choices kept failing verification (field too small or degenerate input)."""

    exit_code = 4
