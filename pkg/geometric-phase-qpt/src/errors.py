"""
Exception hierarchy for geometric-phase computations
Parameter problems are ValueErrors, numerical breakdowns are ArithmeticErrors
"""


class QPTGeometryError(Exception):
    """Base class for every error raised by this package"""


class InvalidParameterError(QPTGeometryError, ValueError):
    """A model parameter or option is outside its allowed domain"""


class ConfigError(InvalidParameterError):
    """Command-line or TOML configuration could not be validated"""


class SchemaMismatchError(ConfigError):
    """A table does not have the columns of any sweep output"""


class NumericalError(QPTGeometryError, ArithmeticError):
    """A numerical procedure failed or missed its tolerance"""


class SingularInputError(NumericalError):
    """The requested quantity is singular at the given parameters"""


class GaplessModeError(SingularInputError, ZeroDivisionError):
    """A mode energy vanishes exactly (level crossing)"""

    def __init__(self, message: str, gapless_modes: int = 0):
        super().__init__(message)
        self.gapless_modes = gapless_modes


class DegenerateGroundStateError(SingularInputError):
    """Ground state is degenerate within the crossing threshold"""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not reach the requested tolerance"""


class GridTooSmallError(NumericalError):
    """Oscillator wavefunction has not decayed at the box edges"""

    def __init__(self, message: str, edge_amplitude: float = 0.0):
        super().__init__(message)
        self.edge_amplitude = edge_amplitude


class FitError(NumericalError):
    """Regression input does not satisfy the fit preconditions"""


class PeakBracketError(NumericalError):
    """The maximum sits on a bracket end, so the curve is not unimodal there"""

    def __init__(self, message: str, suggested_bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.suggested_bracket = suggested_bracket


class GaugeFixingError(NumericalError):
    """Neighbouring states are (nearly) orthogonal; the step is too large"""
