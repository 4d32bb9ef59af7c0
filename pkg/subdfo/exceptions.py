class SubdfoError(Exception):
    """Base exception class for subdfo errors."""

    pass


class CatalogError(SubdfoError):
    """
    Exception raised when a problem cannot be built from the catalog.

    Parameters
    ----------
    field : str
        The offending request field, ``"name"`` or ``"n"``.
    message : str
        Human readable description of the problem.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class EvaluationError(SubdfoError):
    """Exception raised when a point cannot be handed to the objective."""

    pass


class BudgetExhaustedError(EvaluationError):
    """Exception raised when the oracle's evaluation cap has been reached."""

    pass


class GradientEstimationError(SubdfoError):
    """
    Exception raised when a stencil value is not finite.

    Parameters
    ----------
    index : int
        Position of the offending value in the stencil (0 is the center).
    """

    def __init__(self, index: int):
        super().__init__(f"Non-finite function value at stencil index {index}")
        self.index = index


class SubspaceError(SubdfoError):
    """Exception raised when a subspace basis is empty or malformed."""

    pass


class OptionsError(SubdfoError):
    """Exception raised for invalid solver options."""

    pass


class ManifestError(SubdfoError):
    """Exception raised when a benchmark manifest cannot be loaded."""

    pass


class ProfileError(SubdfoError):
    """Exception raised when performance profile inputs are inconsistent."""

    pass


class OutputError(SubdfoError):
    """
    Exception raised when results cannot be written.

    Parameters
    ----------
    path : str
        The file or directory that could not be written.
    message : str
        Underlying reason.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
