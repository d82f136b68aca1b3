"""Exception hierarchy shared by all padiclfc modules.

Every error that a caller is expected to catch has its own class; the CLI
maps the important ones to stable exit codes.
"""


class PadicError(Exception):
    """Base class for all padiclfc errors."""


# -- finite field layer -------------------------------------------------

class ParentMismatch(PadicError):
    """Operands belong to different fields."""


class DivisionByZero(PadicError):
    pass


class DegreeError(PadicError):
    """Subfield degree does not divide the extension degree."""


class NormConditionViolated(PadicError):
    """Right-hand side of a Hilbert-90 equation has norm != 1."""


class TraceConditionViolated(PadicError):
    """Right-hand side of an Artin-Schreier equation has trace != 0."""


class NotAGenerator(PadicError):
    pass


class ZeroArgument(PadicError):
    pass


# -- local field layer --------------------------------------------------

class NotEisenstein(PadicError):
    """Polynomial fails the Eisenstein condition over the unramified layer."""


class PrecisionTooSmall(PadicError):
    pass


class PrecisionExhausted(PadicError):
    """An operation cannot deliver the precision its contract requires."""


class IndistinguishableFromZero(PadicError):
    """All digits vanish within the declared precision; valuation undefined."""


class HenselFails(PadicError):
    """Newton iteration hypothesis |g(x0)| < |g'(x0)|^2 is violated."""


# -- Galois / cocycle layer ---------------------------------------------

class NotGalois(PadicError):
    """The extension has fewer automorphisms than its degree."""


class NormSolveFailed(PadicError):
    pass


class DiagonalityViolated(PadicError):
    """Components of a cocycle value disagree; signals an action bug."""


class NotInL(PadicError):
    """A value expected in the base tower is not, within precision."""


# -- verification oracle ------------------------------------------------

class OracleTooLarge(PadicError):
    """Requested oracle computation exceeds the size guard."""
