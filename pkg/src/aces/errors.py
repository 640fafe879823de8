"""Exception types shared across the toolkit."""


class AcesError(Exception):
    """Base class for all library errors."""


class ParameterError(AcesError):
    """A channel, key, or argument violates a structural constraint."""


class NoiseBudgetError(AcesError):
    """An operation would push a ciphertext past its decryptable noise level."""


class GenerationError(AcesError):
    """Key generation could not satisfy a required invariant within its budget."""


class CircuitError(AcesError):
    """A circuit failed to parse or evaluate."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
