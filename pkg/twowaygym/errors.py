"""Exception hierarchy of the package."""
import typing as T


class TwoWayGymError(Exception):
    """Base class for all errors raised by the package."""


class ValidationError(TwoWayGymError, ValueError):
    """A machine or graph violates its structural invariants."""

    def __init__(self, violations: T.Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class FormatError(TwoWayGymError, ValueError):
    """A string does not follow one of the encodings."""

    def __init__(self, message: str, condition: T.Optional[str] = None):
        self.condition = condition
        if condition is not None:
            message = f"[{condition}] {message}"
        super().__init__(message)


class EncodingError(TwoWayGymError, ValueError):
    """A value cannot be encoded under the requested scheme."""


class DomainError(TwoWayGymError, ValueError):
    """An argument lies outside the domain of a function."""


class WrongMachineKindError(TwoWayGymError, ValueError):
    """A machine of the wrong kind or shape was passed."""


class CompositionError(TwoWayGymError, ValueError):
    """Two machines cannot be chained."""


class CapExceededError(TwoWayGymError):
    """A construction would exceed one of the configured caps."""

    def __init__(self, message: str, sizing: T.Optional[dict] = None):
        self.sizing = dict(sizing or {})
        super().__init__(message)


class OracleDisagreement(TwoWayGymError):
    """An evaluator and a brute-force oracle returned different verdicts."""

    def __init__(self, message: str, counterexample: T.Optional[dict] = None):
        self.counterexample = dict(counterexample or {})
        super().__init__(message)
