"""Exception hierarchy shared by every module of the package."""


class SpreadSpectraError(Exception):
    """Base class for all errors raised by spread_spectra."""


# -- model construction ------------------------------------------------------

class ModelError(SpreadSpectraError, ValueError):
    """A construction was asked for with parameters it cannot honour."""


class NonPositive(ModelError):
    pass


class OrderViolation(ModelError):
    pass


class NonUnimodular(ModelError):
    pass


class ProvenanceMismatch(ModelError):
    pass


class LimitMismatch(ModelError):
    pass


class MonotonicityViolation(ModelError):
    pass


class RangeViolation(ModelError):
    pass


# -- analysis ----------------------------------------------------------------

class ZeroLambda(SpreadSpectraError, ValueError):
    pass


class BadGrid(SpreadSpectraError, ValueError):
    pass


# -- finite-dimensional lab --------------------------------------------------

class NoShiftPart(SpreadSpectraError, ValueError):
    pass


class OutsideInterior(SpreadSpectraError, ValueError):
    pass


class DimensionTooLarge(SpreadSpectraError, ValueError):
    pass


class BadKernelDims(SpreadSpectraError, ValueError):
    pass


# -- scenario files ----------------------------------------------------------

class ScenarioError(SpreadSpectraError):
    """Anything that makes a scenario document unusable."""


class ParseError(ScenarioError):
    pass


class SchemaError(ScenarioError):
    pass


class ValidationError(ScenarioError):
    pass
