"""
    Exception hierarchy shared by every package.

    Each class carries the exit code the command line reports for it.
"""


class QdSimError(Exception):
    exit_code = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {
            'error': type(self).__name__,
            'message': self.message,
            'exit_code': self.exit_code,
            'details': {k: (v if isinstance(v, (int, float, str, bool)) or v is None else repr(v))
                        for k, v in self.details.items()},
        }


class UnknownCommandError(QdSimError):
    exit_code = 2


class InvalidDeviceError(QdSimError):
    exit_code = 3


class UndefinedPurcellError(QdSimError):
    exit_code = 4


class DomainError(QdSimError):
    exit_code = 5


class SolverError(QdSimError):
    exit_code = 6


class IntegrationError(QdSimError):
    exit_code = 7


class TruncationError(QdSimError):
    exit_code = 8


class ThresholdUndefinedError(QdSimError):
    exit_code = 9


class UndefinedStatisticError(QdSimError):
    exit_code = 10


class DegenerateOutputError(QdSimError):
    exit_code = 11


class FitError(QdSimError):
    exit_code = 12


class ConfigError(QdSimError):
    exit_code = 13
