"""Canonical finite construction scheme of a type prefix.

The scheme over the domain {0,..,m_K-1} is built top-down: the whole
domain is the unique top-level member and every level-(k+1) member F
splits positionally into its n_{k+1} level-k children

    F_i = F[0:r] + F[r + i*b : r + (i+1)*b],   b = m_k - r,  r = r_{k+1},

which form a root-tail-tail Delta-system with root F[0:r].  Lower
levels are the decomposition closure with duplicates merged.  This is
the smallest family satisfying the scheme axioms over the finite
domain, and the block layout is the only one under which every child
has cardinality m_k.

All canonical functions (rho, Delta, Xi, the k-norms and k-closures)
are computed from memoized tables; the definition-literal recomputation
lives in the oracle module and never shares these code paths.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import NotAMember, OutOfDomain
from .finset import FinSet
from .typeseq import TypeSequence

#: Sentinel for Delta(alpha, alpha): strictly greater than every level.
TOP = math.inf


@dataclass(frozen=True, eq=False)
class Violation:
    """One axiom/law violation found by a checker."""

    kind: str
    detail: str
    level: int | None = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "level": self.level, "detail": self.detail}


@dataclass(frozen=True, eq=False)
class Scheme:
    """Immutable finite construction scheme with memoized function tables.

    `levels[k]` is the sorted tuple of level-k members (each a FinSet of
    size m_k).  `children`/`roots` record the canonical decompositions.
    Function tables are computed lazily under a lock, so any number of
    readers can share a scheme.
    """

    type: TypeSequence
    levels: tuple[tuple[FinSet, ...], ...]
    children: dict[FinSet, tuple[FinSet, ...]] = field(repr=False)
    roots: dict[FinSet, FinSet] = field(repr=False)

    def __post_init__(self):
        # builders nest (delta needs norms need chains), so the guard is reentrant
        object.__setattr__(self, "_lock", threading.RLock())
        object.__setattr__(self, "_cache", {})

    @property
    def K(self) -> int:
        return self.type.K

    @property
    def domain_size(self) -> int:
        return self.type.m[-1]

    @property
    def domain(self) -> FinSet:
        return FinSet(range(self.domain_size))

    def level_of(self, F: FinSet) -> int:
        """Level index of a member, by its cardinality; NotAMember otherwise."""
        sizes = self.type.m
        if len(F) in sizes:
            k = sizes.index(len(F))
            if F in self._level_sets()[k]:
                return k
        raise NotAMember(f"{tuple(F)} is not a scheme member")

    def _check_ordinal(self, alpha: int):
        if not (0 <= alpha < self.domain_size):
            raise OutOfDomain(f"ordinal {alpha} outside domain 0..{self.domain_size - 1}")

    def _check_level(self, k: int):
        if not (0 <= k <= self.K):
            raise OutOfDomain(f"level {k} outside 0..{self.K}")

    # -- lazily built internals -------------------------------------------

    def _cached(self, name: str, builder):
        cache = self._cache
        val = cache.get(name)
        if val is None:
            with self._lock:
                val = cache.get(name)
                if val is None:
                    val = builder()
                    cache[name] = val
        return val

    def _level_sets(self) -> tuple[frozenset, ...]:
        return self._cached(
            "level_sets", lambda: tuple(frozenset(lev) for lev in self.levels)
        )

    def _chains(self) -> tuple[tuple[FinSet, ...], ...]:
        """Per ordinal, the closure trace F ∩ (alpha+1) at every level.

        Walks the child links down from the unique top member; by axiom
        (i) the trace does not depend on which containing member is used.
        """

        def build():
            K = self.K
            out = []
            for alpha in range(self.domain_size):
                chain = [None] * (K + 1)
                F = self.levels[K][0]
                chain[K] = FinSet(x for x in F if x <= alpha)
                for k in range(K - 1, -1, -1):
                    F = next(c for c in self.children[F] if alpha in c)
                    chain[k] = FinSet(x for x in F if x <= alpha)
                out.append(tuple(chain))
            return tuple(out)

        return self._cached("chains", build)

    def _norm_table(self) -> np.ndarray:
        def build():
            chains = self._chains()
            tab = np.empty((self.domain_size, self.K + 1), dtype=np.int32)
            for alpha, chain in enumerate(chains):
                tab[alpha] = [len(c) - 1 for c in chain]
            return tab

        return self._cached("norm", build)

    def _xi_table(self) -> np.ndarray:
        """Xi[alpha, k]: -1 for root positions, child index otherwise; 0 at k=0."""

        def build():
            m = self.domain_size
            tab = np.zeros((m, self.K + 1), dtype=np.int32)
            filled = np.zeros((m, self.K + 1), dtype=bool)
            for k in range(1, self.K + 1):
                r = self.type.r(k)
                for F in self.levels[k]:
                    root = F[:r]
                    for x in root:
                        self._xi_assign(tab, filled, x, k, -1)
                    for i, child in enumerate(self.children[F]):
                        for x in child[r:]:
                            self._xi_assign(tab, filled, x, k, i)
            return tab

        return self._cached("xi", build)

    @staticmethod
    def _xi_assign(tab, filled, x, k, value):
        if filled[x, k] and tab[x, k] != value:
            raise ValueError(
                f"Xi ill-defined at ({x},{k}): {tab[x, k]} vs {value}"
            )
        tab[x, k] = value
        filled[x, k] = True

    def _rho_matrix(self) -> np.ndarray:
        def build():
            m, K = self.domain_size, self.K
            chains = self._chains()
            cl = np.zeros((K + 1, m, m), dtype=bool)
            for beta in range(m):
                for k in range(K + 1):
                    cl[k, beta, list(chains[beta][k])] = True
            half = np.argmax(cl, axis=0).astype(np.int32)  # [beta, xi], xi <= beta
            lower = np.tri(m, dtype=bool)  # [beta, xi] with xi <= beta
            return np.where(lower, half, half.T)

        return self._cached("rho", build)

    def _delta_matrix(self) -> np.ndarray:
        """Delta with the internal sentinel K+1 standing for TOP."""

        def build():
            norms = self._norm_table()
            diff = norms[:, None, :] != norms[None, :, :]
            d = np.argmax(diff, axis=2).astype(np.int32)
            d[~diff.any(axis=2)] = self.K + 1
            return d

        return self._cached("delta", build)

    def captured_pairs_by_level(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """For each level l in 1..K the captured pairs {alpha, beta}, alpha < beta.

        A pair is captured at l when rho = Delta = l and the Xi values at
        l are exactly 0 and 1.
        """

        def build():
            rho_m = self._rho_matrix()
            delta_m = self._delta_matrix()
            xi_t = self._xi_table()
            out = []
            for l in range(1, self.K + 1):
                idx = np.arange(self.domain_size)
                cond = (
                    (rho_m == l)
                    & (delta_m == l)
                    & (xi_t[:, None, l] == 0)
                    & (xi_t[None, :, l] == 1)
                    & (idx[:, None] < idx[None, :])
                )
                a, b = np.nonzero(cond)
                out.append(tuple(zip(a.tolist(), b.tolist())))
            return tuple(out)

        return self._cached("captured_pairs", build)


def build_scheme(t: TypeSequence) -> Scheme:
    """Build the canonical scheme of a type prefix over {0,..,m_K-1}."""
    K = t.K
    levels: list[dict[FinSet, None]] = [dict() for _ in range(K + 1)]
    children: dict[FinSet, tuple[FinSet, ...]] = {}
    roots: dict[FinSet, FinSet] = {}
    top = FinSet(range(t.m[K]))
    levels[K][top] = None
    frontier = [top]
    for k in range(K, 0, -1):
        r, n = t.r(k), t.n(k)
        blk = t.m[k - 1] - r
        next_frontier: dict[FinSet, None] = {}
        for F in frontier:
            kids = tuple(
                FinSet(F[:r] + F[r + i * blk : r + (i + 1) * blk]) for i in range(n)
            )
            children[F] = kids
            roots[F] = FinSet(F[:r])
            for c in kids:
                levels[k - 1][c] = None
                next_frontier[c] = None
        frontier = list(next_frontier)
    return Scheme(
        type=t,
        levels=tuple(tuple(sorted(lev)) for lev in levels),
        children=children,
        roots=roots,
    )


def canonical_decomposition(s: Scheme, F) -> tuple[FinSet, list[FinSet]]:
    """Root and ordered children of a member at level >= 1."""
    F = FinSet(F)
    k = s.level_of(F)
    if k == 0:
        raise NotAMember("level-0 members have no decomposition")
    return s.roots[F], list(s.children[F])


def rho(s: Scheme, alpha: int, beta: int) -> int:
    """Least level at which some member contains both ordinals."""
    s._check_ordinal(alpha)
    s._check_ordinal(beta)
    return int(s._rho_matrix()[alpha, beta])


def rho_set(s: Scheme, A) -> int:
    """rho^A = max of rho over all pairs from A (0 for singletons)."""
    A = FinSet(A)
    if not A:
        raise OutOfDomain("rho_set needs a non-empty set")
    for x in A:
        s._check_ordinal(x)
    idx = np.array(A, dtype=np.intp)
    return int(s._rho_matrix()[np.ix_(idx, idx)].max())


def closure(s: Scheme, alpha: int, k: int) -> FinSet:
    """The k-closure (alpha)_k = {xi <= alpha : rho(alpha, xi) <= k}."""
    s._check_ordinal(alpha)
    s._check_level(k)
    return s._chains()[alpha][k]


def norm(s: Scheme, alpha: int, k: int) -> int:
    """The k-norm |(alpha)_k \\ {alpha}|: alpha's position in containing members."""
    s._check_ordinal(alpha)
    s._check_level(k)
    return int(s._norm_table()[alpha, k])


def delta(s: Scheme, alpha: int, beta: int) -> int | float:
    """First level where the norm sequences diverge; TOP when alpha = beta."""
    s._check_ordinal(alpha)
    s._check_ordinal(beta)
    d = int(s._delta_matrix()[alpha, beta])
    return TOP if d > s.K else d


def xi(s: Scheme, alpha: int, k: int) -> int:
    """Root flag (-1) or child index of alpha at level k; 0 at k = 0."""
    s._check_ordinal(alpha)
    s._check_level(k)
    return int(s._xi_table()[alpha, k])


# -- axiom verification ----------------------------------------------------


def verify_axioms(s: Scheme) -> list[Violation]:
    """Exhaustively check the scheme axioms; the report is expected empty.

    Works off `type` and `levels` alone (decompositions are recomputed
    positionally), so corrupted fixtures are diagnosed faithfully.
    """
    t = s.type
    out: list[Violation] = []
    if len(s.levels) != t.K + 1:
        out.append(Violation("levels", f"expected {t.K + 1} levels, got {len(s.levels)}"))
        return out
    dom = FinSet(range(t.m[-1]))
    if s.levels[t.K] != (dom,):
        out.append(
            Violation("cofinality", "top level is not the single full-domain member", t.K)
        )
    for k, lev in enumerate(s.levels):
        for F in lev:
            if len(F) != t.m[k]:
                out.append(
                    Violation("cardinality", f"{tuple(F)} has size {len(F)} != m_{k}", k)
                )
    # axiom (i): pairwise intersections are common initial segments
    for k, lev in enumerate(s.levels):
        sets = [set(F) for F in lev]
        for i in range(len(lev)):
            for j in range(i + 1, len(lev)):
                E, F = lev[i], lev[j]
                p = 0
                while p < len(E) and p < len(F) and E[p] == F[p]:
                    p += 1
                if len(sets[i] & sets[j]) != p:
                    out.append(
                        Violation(
                            "axiom-i",
                            f"{tuple(E)} ∩ {tuple(F)} is not an initial segment of both",
                            k,
                        )
                    )
    # axiom (ii): positional decomposition into a root-tail-tail system of members
    for k in range(1, t.K + 1):
        r, n = t.r(k), t.n(k)
        blk = t.m[k - 1] - r
        below = frozenset(s.levels[k - 1])
        for F in s.levels[k]:
            if len(F) != t.m[k]:
                continue  # already reported
            root = F[:r]
            kids = [FinSet(F[:r] + F[r + i * blk : r + (i + 1) * blk]) for i in range(n)]
            for c in kids:
                if c not in below:
                    out.append(
                        Violation(
                            "axiom-ii",
                            f"child {tuple(c)} of {tuple(F)} missing from level {k - 1}",
                            k,
                        )
                    )
            if FinSet(x for c in kids for x in c) != F:
                out.append(Violation("axiom-ii", f"children do not cover {tuple(F)}", k))
            for i in range(len(kids)):
                for j in range(i + 1, len(kids)):
                    if kids[i].intersect(kids[j]) != FinSet(root):
                        out.append(
                            Violation(
                                "axiom-ii",
                                f"children of {tuple(F)} are not a Delta-system",
                                k,
                            )
                        )
            tails = [c[r:] for c in kids]
            ordered = all(
                (not root or not tail or root[-1] < tail[0]) for tail in tails
            ) and all(tails[i][-1] < tails[i + 1][0] for i in range(len(tails) - 1) if tails[i] and tails[i + 1])
            if not ordered:
                out.append(
                    Violation("axiom-ii", f"tails of {tuple(F)} not root-tail-tail ordered", k)
                )
    return out


# -- export ----------------------------------------------------------------


def scheme_to_json(s: Scheme) -> str:
    return json.dumps(
        {
            "type": [list(t) for t in s.type.triples],
            "levels": [[list(F) for F in lev] for lev in s.levels],
        }
    )


def xi_table_csv(s: Scheme) -> str:
    lines = ["alpha,k,value"]
    for alpha in range(s.domain_size):
        for k in range(s.K + 1):
            lines.append(f"{alpha},{k},{xi(s, alpha, k)}")
    return "\n".join(lines) + "\n"


def rho_table_csv(s: Scheme) -> str:
    # the second column holds beta; header kept uniform with the Xi table
    lines = ["alpha,k,value"]
    for alpha in range(s.domain_size):
        for beta in range(s.domain_size):
            lines.append(f"{alpha},{beta},{rho(s, alpha, beta)}")
    return "\n".join(lines) + "\n"
