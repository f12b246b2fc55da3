"""Exception hierarchy.

Every error raised by the toolkit derives from :class:`DepthError`.  The
three intermediate classes map onto the CLI exit codes (config 2, data 3,
numerical 4).
"""


class DepthError(Exception):
    exit_code = 1


class ConfigError(DepthError, ValueError):
    exit_code = 2


class DataError(DepthError, ValueError):
    exit_code = 3


class NumericalError(DepthError, ArithmeticError):
    exit_code = 4


class ZeroNorm(DataError):
    pass


class DimensionTooSmall(DataError):
    pass


class DimMismatch(DataError):
    pass


class EmptySample(DataError):
    pass


class SampleTooSmall(DataError):
    pass


class NotCircle(DataError):
    pass


class LengthMismatch(DataError):
    pass


class InvalidKernel(ConfigError):
    pass


class NullResultant(NumericalError):
    """The sample mean vector vanishes, so the spherical mean is undefined."""


class ConstantDepth(NumericalError):
    """The depth is constant on the sphere; every point is a deepest point."""


class QuadratureFailure(NumericalError):
    pass


class _LineError(DataError):
    def __init__(self, line, message=""):
        self.line = line
        super().__init__(f"line {line}: {message}" if message else f"line {line}")


class ParseError(_LineError):
    pass


class NormError(_LineError):
    pass


class DimInconsistent(_LineError):
    pass
