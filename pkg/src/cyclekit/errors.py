"""Shared exception types."""


class GraphFormatError(ValueError):
    """An edge-list document was rejected; line_no is 1-based when known."""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class GuardError(ValueError):
    """An instance exceeds a configured resource guard."""


class BudgetExceededError(RuntimeError):
    """Enumeration or search ran out of extension-step budget."""

    def __init__(self, budget: int):
        self.budget = budget
        super().__init__(f"budget of {budget} extension steps exhausted")


class SpectralError(RuntimeError):
    """Dense eigendecomposition failed; never reported as a silent NaN."""


class ImproperColouringError(ValueError):
    """Operation requires a proper edge colouring."""
