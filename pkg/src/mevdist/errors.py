"""Exception hierarchy. All subclass ValueError so callers can catch broadly."""


class MevdError(ValueError):
    """Base class for package errors."""


class DomainError(MevdError):
    """Argument outside the mathematical domain of an operation."""


class DataError(MevdError):
    """Malformed or unusable input data."""

    def __init__(self, message, line=None, year=None, source=None):
        self.line = line
        self.year = year
        self.source = source
        context = []
        if source is not None:
            context.append(str(source))
        if line is not None:
            context.append(f"line {line}")
        if year is not None:
            context.append(f"year {year}")
        if context:
            message = f"{': '.join(context)}: {message}"
        super().__init__(message)


class DegenerateModelError(MevdError):
    """Model has no inverse (e.g. every year has zero events)."""


class NumericalError(MevdError):
    """A numerical procedure failed to produce a finite answer."""
