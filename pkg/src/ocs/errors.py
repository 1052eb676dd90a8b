"""Exception hierarchy. ValidationError maps to exit code 2, NumericalError to 3."""


class OCSError(Exception):
    exit_code = 1


class ValidationError(OCSError):
    exit_code = 2


class AsymmetricBarrier(ValidationError):
    pass


class DegenerateGeometry(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


class NumericalError(OCSError):
    exit_code = 3


class AtBarrierTop(NumericalError):
    pass


class NonPositiveK(NumericalError):
    pass


class IntegrationFailure(NumericalError):
    pass


class UnwrapAmbiguity(NumericalError):
    pass


class MinStepReached(NumericalError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ZeroTransmission(NumericalError):
    pass


class ZeroReflection(NumericalError):
    pass


class LambdaUndefined(NumericalError):
    pass


class DegenerateSplit(NumericalError):
    pass


class UnderResolvedPhase(NumericalError):
    pass


class NormLeak(NumericalError):
    pass


class NoBracket(NumericalError):
    pass
