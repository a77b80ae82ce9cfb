"""Exception types shared across the package."""


class SchemeLabError(Exception):
    """Base class for all schemelab errors."""


class InvalidTypeSequence(SchemeLabError):
    """A triple list violates one of the four type-sequence conditions.

    `condition` is one of 'a', 'b', 'c', 'd'; `level` is the first
    offending conceptual level (1-based, matching n_k / r_k subscripts).
    """

    def __init__(self, condition: str, level: int, message: str):
        super().__init__(message)
        self.condition = condition
        self.level = level


class CellMismatch(SchemeLabError):
    """A level partition does not cover exactly the levels 0..K."""


class OutOfDomain(SchemeLabError):
    """An ordinal or level argument falls outside the scheme's finite domain."""


class NotAMember(SchemeLabError):
    """The given set is not a member of the scheme at the expected level."""


class NotBinaryScheme(SchemeLabError):
    """Operation requires a scheme whose type has n_k = 2 at every level."""


class NotDeltaSystem(SchemeLabError):
    """The family is not a root-tail-tail Delta-system of equal-size members."""


class EqualArguments(SchemeLabError):
    """The operation requires two distinct ordinals."""


class TooFewIndices(SchemeLabError):
    """At least two index positions are required."""


class NotNormal(SchemeLabError):
    """The pregap is not normal (some L_a meets R_a)."""


class InvalidSeparating(SchemeLabError):
    """The function does not separate the pregap."""


class OutOfUniverse(SchemeLabError):
    """A condition mentions indices outside the poset view's universe."""


class IncompleteFilter(SchemeLabError):
    """The filter does not decide a value at every required index."""
