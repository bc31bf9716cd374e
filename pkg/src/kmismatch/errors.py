"""Exception types shared across the package."""


class IndexOutOfRange(IndexError):
    pass


class PreconditionViolation(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class EmptyQ(ValueError):
    pass


class BadK(ValueError):
    pass


class StructureNotFound(RuntimeError):
    """Many occurrences were found but no short approximate period verified."""


class EpochExhausted(RuntimeError):
    pass


class NonPrimitiveQ(ValueError):
    pass


class UniverseTooLarge(ValueError):
    pass


class DivergenceDetected(AssertionError):
    def __init__(self, op_index, got, expected):
        super().__init__(f"op {op_index}: got {got}, expected {expected}")
        self.op_index = op_index
        self.got = got
        self.expected = expected
