"""Exception hierarchy shared by every heytica module."""

from __future__ import annotations


class HeyticaError(Exception):
    """Base class for all library errors."""


class CycleError(HeyticaError):
    """A relation that must be acyclic (or antisymmetric) is not."""


class SizeError(HeyticaError):
    """A configured enumeration or growth bound was exceeded."""


class BadElement(HeyticaError):
    """An element index or up-set does not belong to the structure."""


class NotPMorphism(HeyticaError):
    pass


class NotSurjective(HeyticaError):
    pass


class TargetMismatch(HeyticaError):
    pass


class DegenerateError(HeyticaError):
    """The one-element algebra (0 = 1) was requested or supplied."""


class AxiomError(HeyticaError):
    """Raw operation tables violate a Heyting algebra identity.

    ``identity`` names the failed law and ``witness`` holds the offending
    assignment of table indices.
    """

    def __init__(self, identity: str, witness: dict[str, int]):
        self.identity = identity
        self.witness = witness
        detail = ", ".join(f"{k}={v}" for k, v in witness.items())
        super().__init__(f"{identity} fails at {detail}")


class NotHomomorphism(HeyticaError):
    pass


class UnboundVariable(HeyticaError):
    pass


class NoDual(HeyticaError):
    pass


class NotPrincipal(HeyticaError):
    pass


class NotForest(HeyticaError):
    pass


class ZeroElement(HeyticaError):
    pass


class ConstructionError(HeyticaError):
    """A witness construction failed one of its own stage checks."""

    def __init__(self, stage: str, message: str = ""):
        self.stage = stage
        super().__init__(f"stage {stage!r} failed" + (f": {message}" if message else ""))


class IndependenceFailure(HeyticaError):
    def __init__(self, pair: tuple[int, int], message: str = ""):
        self.pair = pair
        super().__init__(message or f"independence fails at pair {pair}")


class NotExtension(HeyticaError):
    pass


class IncompatibleOrders(HeyticaError):
    pass


class InsufficientFamily(HeyticaError):
    pass


class FormatError(HeyticaError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")
