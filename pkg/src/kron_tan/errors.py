"""Exception hierarchy for kron_tan."""


class KronError(Exception):
    """Base class for every error raised by this package."""


class ComplexError(KronError, ValueError):
    """Malformed cell complex (self-loop, dangling vertex, open face...)."""


class DegreeError(KronError, ValueError):
    """A (co)boundary was requested on a degree where it is not defined."""


class SourcePlacementError(KronError, ValueError):
    """A current source was placed on an edge outside the spanning tree."""


class SingularFrequencyError(KronError, ZeroDivisionError):
    """An impedance term has a pole at the requested frequency."""


class AssemblyError(KronError, ValueError):
    """Inconsistent dimensions or references while assembling a metric."""


class DomainError(KronError, ValueError):
    """A coupling model was evaluated outside its domain of validity."""


class SingularMetricError(KronError, ArithmeticError):
    """The mesh block of the metric cannot be inverted reliably."""

    def __init__(self, omega, cond):
        self.omega = omega
        self.cond = cond
        super().__init__(
            f"mesh metric is singular at omega={omega:.6g} rad/s (condition estimate {cond:.3g})"
        )


class SweepError(KronError, RuntimeError):
    """A frequency sweep produced no usable point."""


class ObservableError(KronError, KeyError):
    """An observable name was not found in a sweep solution."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class OracleSingularError(KronError, ArithmeticError):
    """The nodal admittance system of the oracle is singular."""


class NetlistError(KronError, ValueError):
    """A netlist line could not be parsed or validated."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
