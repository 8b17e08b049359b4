class FQGaussError(Exception):
    """
    Base class of all errors raised by this package
    """

    pass


class FormSyntaxError(FQGaussError, ValueError):
    """
    Exception raised if a form expression does not follow the grammar
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidParameterError(FQGaussError, ValueError):
    """
    Exception raised if a block or raw form has parameters which do not define a valid form
    """

    pass


class WordSyntaxError(FQGaussError, ValueError):
    """
    Exception raised if a word in the generators S, T and Z could not be parsed
    """

    pass


class DegenerateFormError(FQGaussError):
    """
    Exception raised if a Gauss sum or an orthogonal group is requested for a degenerate form
    """

    pass


class EnumerationCapError(FQGaussError):
    """
    Exception raised if a form has more elements than the configured enumeration cap
    """

    def __init__(self, order: int, cap: int):
        super().__init__(
            f"The form has {order} elements which exceeds the enumeration cap of {cap}"
        )
        self.order = order
        self.cap = cap


class SearchBudgetExceeded(FQGaussError):
    """
    Exception raised if the isometry search visits more partial assignments than allowed
    """

    def __init__(self, budget: int):
        super().__init__(f"The isometry search exceeded its budget of {budget} partial assignments")
        self.budget = budget


class NotAnIsometryError(FQGaussError):
    """
    Exception raised if a matrix does not describe an element of the orthogonal group
    """

    pass


class StructureError(FQGaussError):
    """
    Exception raised if an operation which needs a 2-elementary form receives another form, or
    if the characteristic element is not unique
    """

    pass


class ConsistencyError(FQGaussError):
    """
    Exception raised if an exact internal cross-check fails. This always points at a bug or at
    inconsistent input data
    """

    pass
