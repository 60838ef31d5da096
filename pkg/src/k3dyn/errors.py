"""Exception hierarchy shared by every k3dyn module."""


class K3DynError(ValueError):
    """Base class; every domain error is also a ValueError."""


class NotSquare(K3DynError):
    pass


class NotSymmetric(K3DynError):
    pass


class DimensionMismatch(K3DynError):
    pass


class NotDefinite(K3DynError):
    pass


class UnknownName(K3DynError):
    pass


class UnknownCurve(K3DynError):
    pass


class TooLarge(K3DynError):
    pass


class NotAFiber(K3DynError):
    pass


class DisconnectedSupport(NotAFiber):
    pass


class NotIsotropic(K3DynError):
    pass


class NotASection(K3DynError):
    pass


class SingularSystem(K3DynError):
    pass


class IrreducibleType(K3DynError):
    pass


class PreconditionViolated(K3DynError):
    pass


class NotAnIsometry(PreconditionViolated):
    pass


class NoIntegralPower(K3DynError):
    pass


class WrongArity(K3DynError):
    pass


class NotComponentStable(K3DynError):
    pass


class ClassNotFixed(K3DynError):
    pass


class NotReciprocal(K3DynError):
    pass


class ParseError(K3DynError):
    pass


class ValidationError(K3DynError):
    pass


class NotSalem(K3DynError):
    """Raised by Salem certification; ``criterion`` names the first failed check."""

    def __init__(self, criterion: str, detail: str = ""):
        self.criterion = criterion
        super().__init__(f"{criterion}: {detail}" if detail else criterion)
