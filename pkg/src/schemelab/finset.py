"""FinSet: the strictly increasing finite sequence of naturals.

This is the universal currency of the package: scheme members,
Delta-system members, poset conditions and closure traces are all
FinSets.  A FinSet is an immutable tuple sorted increasingly, with the
order-type indexing used throughout: ``X[a]`` is the a-th element of X
in increasing enumeration and ``X.image(A)`` is ``{X(a) : a in A}``.
"""

from __future__ import annotations

from typing import Iterable


class FinSet(tuple):
    """Immutable strictly increasing tuple of naturals.

    The constructor accepts any iterable of ints; elements are sorted
    and deduplicated.  Negative entries are rejected.
    """

    __slots__ = ()

    def __new__(cls, elems: Iterable[int] = ()) -> "FinSet":
        t = tuple(sorted(set(elems)))
        if t and t[0] < 0:
            raise ValueError(f"FinSet elements must be naturals, got {t[0]}")
        return super().__new__(cls, t)

    def image(self, positions: Iterable[int]) -> "FinSet":
        """X[A]: the set of X(a) for a in A (positions into the enumeration)."""
        return FinSet(self[a] for a in positions)

    def position(self, x: int) -> int:
        """Index of x in the increasing enumeration; ValueError if absent."""
        return self.index(x)

    def union(self, other: Iterable[int]) -> "FinSet":
        return FinSet((*self, *other))

    def intersect(self, other: Iterable[int]) -> "FinSet":
        o = set(other)
        return FinSet(x for x in self if x in o)

    def difference(self, other: Iterable[int]) -> "FinSet":
        o = set(other)
        return FinSet(x for x in self if x not in o)

    def below(self, bound: int) -> "FinSet":
        """Elements strictly below `bound` (the set-theoretic X ∩ bound)."""
        return FinSet(x for x in self if x < bound)

    def is_initial_segment_of(self, other: "FinSet") -> bool:
        return self == other[: len(self)]

    def __repr__(self) -> str:
        return f"FinSet({list(self)})"


def set_below(x: Iterable[int], y: Iterable[int]) -> bool:
    """X < Y in the blockwise order: max(X) < min(Y), or X empty."""
    xt, yt = tuple(x), tuple(y)
    if not xt:
        return True
    if not yt:
        return False
    return max(xt) < min(yt)
