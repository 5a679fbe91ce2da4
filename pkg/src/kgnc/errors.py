"""Exception hierarchy shared by the numerical modules and the CLI."""


class KGError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KGError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class SingularFormulaError(DomainError):
    """A closed-form expression is singular for the requested quantum numbers."""


class EvaluationError(KGError, ArithmeticError):
    """A numerical evaluation produced a non-finite value."""


class GridError(KGError, ValueError):
    """A finite-difference grid cannot resolve the requested problem."""


class OracleError(KGError, RuntimeError):
    """The nonperturbative oracle hit an unrecoverable condition."""


class ConfigError(KGError, ValueError):
    """A run configuration could not be parsed or validated."""

    def __init__(self, message, key=None, line=None):
        self.key = key
        self.line = line
        where = []
        if key is not None:
            where.append(f"key {key!r}")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
