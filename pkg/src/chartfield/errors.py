"""Exception types shared across the package."""


class ChartFieldError(Exception):
    """Base class for all chartfield errors."""


class InvalidInputError(ChartFieldError):
    """Raised when input data (images, point sets, tables) is unusable."""


class InvalidParameterError(ChartFieldError):
    """Raised when a numeric parameter is outside its valid range."""


class EmptyCanvasError(ChartFieldError):
    """Canvas extraction found no chart objects.

    Carries a `diagnostics` dict describing what each preprocessing stage saw.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class EmptyTableError(ChartFieldError):
    """Data extraction produced no rows."""


class InvalidSpecError(ChartFieldError):
    """A fixture spec describes geometry that cannot be rasterized."""
