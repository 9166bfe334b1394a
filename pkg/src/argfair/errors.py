"""Exception types raised across the library."""


class ArgfairError(Exception):
    """Base class for all argfair errors."""


class SchemaError(ArgfairError):
    """Schema config is invalid, or data does not match the declared schema."""


class DomainError(ArgfairError):
    """A cell value falls outside its attribute's declared domain."""

    def __init__(self, attribute, value, row_index=None):
        self.attribute = attribute
        self.value = value
        self.row_index = row_index
        where = f" at row {row_index}" if row_index is not None else ""
        super().__init__(f"value {value!r} not in domain of {attribute!r}{where}")


class BinningError(ArgfairError):
    """A numeric value is not covered by any declared bin."""

    def __init__(self, attribute, value):
        self.attribute = attribute
        self.value = value
        super().__init__(f"value {value!r} of {attribute!r} not covered by any bin")


class ParameterError(ArgfairError):
    """An argument to an operation is out of its valid range."""


class ComparabilityError(ArgfairError):
    """Two individuals do not share a schema and cannot be compared."""


class InsufficientPoolError(ArgfairError):
    """The candidate pool has fewer than k individuals."""


class CoverageError(ArgfairError):
    """A label assignment does not cover exactly the rows of a dataset."""


class DegenerateTrainingError(ArgfairError):
    """Training data contains a single class."""


class MissingAttributeError(ArgfairError):
    """An individual lacks a required attribute."""


class ParseError(ArgfairError):
    """A data or predictions file contains an unparseable value."""


class NonConvergenceError(ArgfairError):
    """Fixed-point iteration hit the iteration cap before converging.

    Carries the last iterate so callers can inspect how far it got.
    """

    def __init__(self, last_weights, iterations, epsilon):
        self.last_weights = last_weights
        self.iterations = iterations
        self.epsilon = epsilon
        super().__init__(
            f"no convergence within {iterations} iterations (epsilon={epsilon})"
        )
