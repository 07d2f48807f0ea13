"""Exception hierarchy shared by the solvers and the command line."""


class EITError(Exception):
    """Base class for all package errors."""


class ConfigError(EITError):
    """Malformed or inconsistent configuration (CLI exit code 1)."""


class RegimeError(EITError):
    """Scenario outside the weak-probe/adiabatic/switching regime (exit code 2)."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(d.message for d in self.diagnostics))


class NumericalError(EITError):
    """Solver failure (exit code 3)."""


class CFLViolation(NumericalError):
    pass


class NonFiniteError(NumericalError):
    pass


class IntegrationUnstable(NumericalError):
    pass
