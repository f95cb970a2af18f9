"""Exception types raised by the model and its numerics."""


class ModelError(ValueError):
    """Base class for domain errors (the CLI maps these to exit status 1)."""


class InvalidParameterError(ModelError):
    pass


class SingularDenominatorError(ModelError):
    """Total contact activity vanished, so the incidence is undefined."""


class RootPolishError(ModelError):
    pass


class RepeatedRootError(ModelError):
    pass


class EndpointRootError(ModelError):
    pass


class UnresolvedPoleError(ModelError):
    pass


class StepSizeUnderflowError(ModelError):
    pass
