"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`KhovanovError`.
The CLI maps :class:`ParseError` to exit code 2, :class:`WindowError` to exit
code 3 and :class:`UnsupportedMove` to exit code 4.
"""

from __future__ import annotations


class KhovanovError(Exception):
    """Base class for all library errors."""


# -- parsing -----------------------------------------------------------------


class ParseError(KhovanovError, ValueError):
    """Input text could not be turned into a diagram, movie or module."""


class MalformedSyntax(ParseError):
    pass


class DuplicateArcUse(ParseError):
    pass


class OpenStrandInLinkMode(ParseError):
    pass


class InconsistentOrientation(ParseError):
    pass


class GeneratorOutOfRange(ParseError):
    pass


class EmptyBraidWithZeroStrands(ParseError):
    pass


class InvalidModule(ParseError):
    """A module presentation is malformed or violates X*X = 0."""


# -- diagram manipulation ------------------------------------------------------


class ArcNotFound(KhovanovError, KeyError):
    pass


class ComponentNotFound(KhovanovError, KeyError):
    pass


class CrossingAlreadyResolvedToOne(KhovanovError, ValueError):
    pass


class NotABigon(KhovanovError, ValueError):
    """Two crossings do not bound a removable bigon."""


class ArcsNotAdjacent(KhovanovError, ValueError):
    """Two arcs do not lie on a common face of the diagram."""


# -- algebra -----------------------------------------------------------------


class FactorOutOfRange(KhovanovError, IndexError):
    pass


class ArityMismatch(KhovanovError, ValueError):
    pass


class ArityChainMismatch(KhovanovError, ValueError):
    pass


class NonPeriodicTail(KhovanovError, ValueError):
    pass


class NonDivisible(KhovanovError, ArithmeticError):
    pass


# -- complexes and windows -----------------------------------------------------


class WindowError(KhovanovError, ValueError):
    """A requested q-degree window is invalid or does not cover the request."""


class DegreeWindowTooSmall(WindowError):
    pass


class OutOfWindow(WindowError):
    pass


class WindowTooSmall(WindowError):
    pass


class NotATwistChain(KhovanovError, ValueError):
    pass


# -- cobordisms and tangles ----------------------------------------------------


class FramesMismatch(KhovanovError, ValueError):
    pass


class UnsupportedMove(KhovanovError, ValueError):
    pass


class NonEmptyEnds(KhovanovError, ValueError):
    pass


class NotATangle(KhovanovError, ValueError):
    pass
