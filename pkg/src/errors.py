from typing import Any, Optional


class AEMError(Exception):
    """Base class for every error raised by the event model pipeline"""


class ConfigurationError(AEMError):
    """Invalid configuration or unusable input (empty corpus, k > N, ...)"""


class ContractViolation(AEMError):
    """A caller broke a precondition: wrong shapes, bad mode, non-simplex input"""


class CorpusFormatError(AEMError):
    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class NonFiniteError(AEMError):
    """Raised when a loss or gradient stops being finite during training"""

    def __init__(self, message: str, trace: Any = None):
        super().__init__(message)
        self.trace = trace


class VocabularyMismatchError(AEMError):
    pass


class ProjectionError(AEMError):
    pass
