"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A numeric argument lies outside its mathematical domain."""


class ThresholdError(ParameterError):
    """A threshold list is not a positive, strictly increasing sequence."""

    def __init__(self, index, message):
        self.index = index
        super().__init__(f"threshold index {index}: {message}")


class UndefinedConditionalError(ArithmeticError):
    """Conditioning on an event of probability zero."""


class CapacityError(RuntimeError):
    """A request exceeds the exhaustive-enumeration limits of the simulator."""


class NumericalError(ArithmeticError):
    """An integration or reduction failed to meet its accuracy target."""
