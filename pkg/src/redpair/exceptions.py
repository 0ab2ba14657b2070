"""Exception hierarchy shared by all engine modules."""


class RedpairError(Exception):
    """Base class for every error raised by the engine."""


class DimensionError(RedpairError, ValueError):
    """Operands live in spaces of different dimension."""


class SingularError(RedpairError, ValueError):
    """A set of linear forms that should be a basis is dependent."""


class ModelError(RedpairError, ValueError):
    """Fixed-point data or class data violates a model invariant."""


class GenericityError(RedpairError, ValueError):
    """A polarizing vector pairs to zero with some weight."""

    def __init__(self, message, weight=None, point_id=None):
        super().__init__(message)
        self.weight = weight
        self.point_id = point_id


class NotProperError(RedpairError, ValueError):
    """Weights of a linear model admit no polarizing vector (moment map not proper)."""


class NonRegularValueError(RedpairError, ValueError):
    """The evaluation point lies on a wall of some cone-spline atom."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ChamberError(RedpairError, ValueError):
    """Chamber polynomial interpolation was inconsistent."""


class OracleError(RedpairError, ValueError):
    """An oracle was called outside of its domain."""
