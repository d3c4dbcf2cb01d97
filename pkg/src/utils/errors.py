from typing import Any, Dict


class AnzaiError(ValueError):
    """Base error for every failure raised by the library.

    Each subclass carries a stable machine tag so the CLI (and callers) can
    report failures without parsing messages.
    """

    tag = "ANZAI_ERROR"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context: Dict[str, Any] = context

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": type(self).__name__,
            "tag": self.tag,
            "message": self.message,
            "context": {k: str(v) for k, v in self.context.items()},
        }


class VariantMismatchError(AnzaiError):
    tag = "VARIANT_MISMATCH"


class FrequencyCapError(AnzaiError):
    tag = "FREQUENCY_CAP"


class InexactError(AnzaiError):
    tag = "INEXACT"


class GridTooSmallError(AnzaiError):
    tag = "GRID_TOO_SMALL"


class NotUnimodularError(AnzaiError):
    tag = "NOT_UNIMODULAR"


class NotHermitianError(AnzaiError):
    tag = "NOT_HERMITIAN"


class NotPositiveError(AnzaiError):
    tag = "NOT_POSITIVE"


class RootOnCircleError(AnzaiError):
    tag = "ROOT_ON_CIRCLE"


class RootCountError(AnzaiError):
    tag = "ROOT_COUNT"


class InvalidMatrixError(AnzaiError):
    tag = "INVALID_MATRIX"


class DimensionMismatchError(AnzaiError):
    tag = "DIMENSION_MISMATCH"


class DomainError(AnzaiError):
    tag = "DOMAIN"


class ExactPathUnavailableError(AnzaiError):
    tag = "NO_EXACT_PATH"


class SupportError(AnzaiError):
    tag = "SUPPORT"


class InputError(AnzaiError):
    tag = "INPUT"
