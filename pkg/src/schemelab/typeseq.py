"""Finite prefixes of type sequences and level partitions.

A type prefix is a list of triples ``(m_k, n_{k+1}, r_{k+1})`` for
k = 0..K-1, describing conceptual levels 0..K.  The member size of the
top level, ``m_K``, is derived by the recursion and stored redundantly
so corrupted inputs fail fast.  Validity means:

  (a) m_0 = 1
  (b) n_{k+1} >= 2
  (c) r_{k+1} < m_k
  (d) m_{k+1} = r_{k+1} + (m_k - r_{k+1}) * n_{k+1}

Goodness of a type is a property of infinite sequences; a finite prefix
only witnesses occurrence counts, so the reporting operations return
counts and never a boolean verdict.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .errors import CellMismatch, InvalidTypeSequence

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class TypeSequence:
    """A validated type prefix: triples (m_k, n_{k+1}, r_{k+1}), k < K."""

    triples: tuple[Triple, ...]
    m: tuple[int, ...] = field(compare=False)  # m_0..m_K, recomputed & checked

    @property
    def K(self) -> int:
        return len(self.triples)

    def n(self, k: int) -> int:
        """Fan-out n_k of level k, 1 <= k <= K."""
        return self.triples[k - 1][1]

    def r(self, k: int) -> int:
        """Root size r_k of level k, 1 <= k <= K."""
        return self.triples[k - 1][2]

    @property
    def is_binary(self) -> bool:
        """True when n_k = 2 at every level."""
        return all(n == 2 for (_, n, _) in self.triples)

    def to_json(self) -> str:
        return json.dumps([list(t) for t in self.triples])

    @staticmethod
    def from_json(text: str) -> "TypeSequence":
        data = json.loads(text)
        return make_type_prefix([tuple(t) for t in data])


def make_type_prefix(triples) -> TypeSequence:
    """Validate a triple list against conditions (a)-(d).

    Raises InvalidTypeSequence naming the condition ('a'..'d') and the
    first offending level.  The m values carried in the input are
    revalidated against the recursion rather than trusted.
    """
    triples = tuple((int(m), int(n), int(r)) for (m, n, r) in triples)
    if not triples:
        raise InvalidTypeSequence("a", 0, "a type prefix needs at least one triple")
    if triples[0][0] != 1:
        raise InvalidTypeSequence("a", 0, f"m_0 must be 1, got {triples[0][0]}")
    m = [1]
    for k, (mk, n, r) in enumerate(triples, start=1):
        if mk != m[-1]:
            raise InvalidTypeSequence(
                "d", k - 1, f"m_{k-1} = {mk} does not match recursion value {m[-1]}"
            )
        if n < 2:
            raise InvalidTypeSequence("b", k, f"n_{k} = {n} < 2")
        if r < 0 or r >= mk:
            raise InvalidTypeSequence("c", k, f"r_{k} = {r} not below m_{k-1} = {mk}")
        m.append(r + (mk - r) * n)
    return TypeSequence(triples=triples, m=tuple(m))


def goodness_report(t: TypeSequence) -> dict[int, int]:
    """Occurrence count of each root size r among r_1..r_K.

    An infinite type is good when every r occurs infinitely often; a
    prefix can only witness this heuristically, so callers get counts.
    """
    counts: dict[int, int] = {}
    for k in range(1, t.K + 1):
        counts[t.r(k)] = counts.get(t.r(k), 0) + 1
    return counts


@dataclass(frozen=True)
class LevelPartition:
    """Finite truncation of a partition of the level indices 0..K."""

    cells: tuple[frozenset[int], ...]

    @staticmethod
    def of(cells) -> "LevelPartition":
        return LevelPartition(tuple(frozenset(c) for c in cells))


def partition_compatible_report(
    p: LevelPartition, t: TypeSequence
) -> dict[tuple[int, int], int]:
    """Per-cell occurrence counts of each root size: (cell index, r) -> count.

    Raises CellMismatch unless the cells are disjoint and cover exactly
    0..K.  Levels 0 may appear in cells but carry no r value.
    """
    seen: set[int] = set()
    for cell in p.cells:
        if seen & cell:
            raise CellMismatch("partition cells overlap")
        seen |= cell
    if seen != set(range(t.K + 1)):
        raise CellMismatch(f"cells cover {sorted(seen)}, expected 0..{t.K}")
    counts: dict[tuple[int, int], int] = {}
    for i, cell in enumerate(p.cells):
        for k in cell:
            if 1 <= k <= t.K:
                key = (i, t.r(k))
                counts[key] = counts.get(key, 0) + 1
    return counts


def random_type_prefix(
    rng: random.Random,
    K: int,
    max_n: int = 4,
    max_r: int | None = None,
    max_m: int | None = None,
    binary: bool = False,
) -> TypeSequence:
    """Seeded random valid prefix of length K.

    Every emitted sequence passes make_type_prefix.  When `max_m` is
    set, growth is reined in by forcing the slowest-growing choice
    (n = 2, r = m-1) once the cap is near.
    """
    triples: list[Triple] = []
    m = 1
    for _ in range(K):
        n = 2 if binary else rng.randint(2, max_n)
        hi = m - 1 if max_r is None else min(m - 1, max_r)
        r = rng.randint(0, hi) if hi > 0 else 0
        if max_m is not None and r + (m - r) * n > max_m:
            n, r = 2, m - 1
            if m + 1 > max_m:
                break
        triples.append((m, n, r))
        m = r + (m - r) * n
    if not triples:
        triples = [(1, 2, 0)]
    return make_type_prefix(triples)


def enumerate_type_prefixes(max_K: int, max_n: int, max_m: int):
    """All valid prefixes with K <= max_K, n_k <= max_n and m_K <= max_m.

    Yields TypeSequence objects in a deterministic (depth-first,
    lexicographic) order.
    """

    def extend(triples: list[Triple], m: int):
        if triples:
            yield make_type_prefix(triples)
        if len(triples) == max_K:
            return
        for n in range(2, max_n + 1):
            for r in range(m):
                m_next = r + (m - r) * n
                if m_next > max_m:
                    continue
                triples.append((m, n, r))
                yield from extend(triples, m_next)
                triples.pop()

    yield from extend([], 1)
