# src/core/exceptions.py
from typing import Optional


class SimulatorException(Exception):
    """Base exception for the nested interferometer simulator."""
    pass


class StateError(SimulatorException):
    """Exception raised when a joint state is malformed or an operation would break unitarity."""
    pass


class UnknownModeError(StateError):
    """Exception raised when a mode label is not part of the state's register."""
    pass


class MarkerError(SimulatorException):
    """Exception raised for unknown markers or a marker coupled on the wrong segment."""
    pass


class ConfigurationError(SimulatorException):
    """Exception raised when a network or experiment configuration is invalid."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        location = ""
        if key is not None:
            location = f" [key: {key}"
            location += f", line {line}]" if line is not None else "]"
        super().__init__(f"{message}{location}")


class PostselectionError(SimulatorException):
    """Exception raised when a post-selection has (numerically) zero probability."""
    pass


class DiscriminationError(SimulatorException):
    """Exception raised when a POVM cannot be built or sampled."""
    pass


class SpectrumError(SimulatorException):
    """Exception raised for invalid vibration or spectrum inputs."""
    pass


class PhysicsAssertionError(SimulatorException):
    """Exception raised when a physics regression guard fails."""
    pass


EXIT_OK = 0
EXIT_VALIDATION_ERROR = 1
EXIT_PHYSICS_ASSERTION = 2


def exit_code_for(exc: BaseException) -> int:
    """Return the standardized CLI exit code for an exception."""
    if isinstance(exc, PhysicsAssertionError):
        return EXIT_PHYSICS_ASSERTION
    return EXIT_VALIDATION_ERROR
