"""Exception hierarchy shared across the package."""


class CoupledCavError(Exception):
    """Base class for all package errors."""


class ValidationError(CoupledCavError, ValueError):
    """Input violates a documented invariant."""


class NegativeRate(ValidationError):
    pass


class ZeroGamma1(ValidationError):
    pass


class NonSquare(ValidationError):
    pass


class NotXState(ValidationError):
    pass


class NegativeEigenvalue(ValidationError):
    pass


class SolverError(CoupledCavError, RuntimeError):
    """Numerical procedure failed to produce a trustworthy result."""


class StepSizeUnderflow(SolverError):
    pass


class RepeatedRoots(SolverError):
    pass


class GridTooCoarse(SolverError):
    pass


class HorizonTooShort(SolverError):
    pass


class ParseError(CoupledCavError, ValueError):
    def __init__(self, message, *, key=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.key = key
        self.line = line


class UnknownPreset(CoupledCavError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown preset"
