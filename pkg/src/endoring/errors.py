"""Exception hierarchy shared across the package."""


class EndoRingError(Exception):
    """Base class for all package errors."""


class FactorizationError(EndoRingError):
    pass


class PrecisionError(EndoRingError):
    pass


class InputError(EndoRingError):
    """Malformed or out-of-scope input."""


class NotOrdinaryError(InputError):
    pass


class NotSimpleError(InputError):
    pass


class NotPrimitiveError(InputError):
    pass


class NonInvertibleIdealError(EndoRingError):
    pass


class NotInvertibleError(EndoRingError):
    pass


class NotAnOrderError(EndoRingError):
    pass


class RelationNotFoundError(EndoRingError):
    pass


class OracleError(EndoRingError):
    pass


class AmbiguousResultError(EndoRingError):
    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class CertificateError(EndoRingError):
    pass
