"""Pregaps, the explicit gap constructions, and separation machinery.

The Hausdorff-style gap of a scheme needs a binary type (n_k = 2
everywhere): the defining formulas 2k + Xi_a(k) and 2k + (1 - Xi_a(k))
place level-k information in the two-point window {2k, 2k+1}, which
collapses as soon as some Xi value exceeds 1.  Almost-containment
claims are implemented with the explicit finite windows N_k used by
the proofs themselves, so every check is literally true at this scale.

Internally the checkers pack the L/R sets into integer bitmasks; the
public Pregap keeps plain frozensets.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import scheme as sch
from .errors import (
    InvalidSeparating,
    NotBinaryScheme,
    NotNormal,
    OutOfDomain,
    TooFewIndices,
)
from .finset import FinSet
from .scheme import Scheme, Violation

LEFT = "L"
RIGHT = "R"


@dataclass(frozen=True, eq=False)
class Pregap:
    """Indexed family of pairs (L_a, R_a) of finite sets of naturals.

    `index` holds the admissible indices; `left`/`right` map each index
    to its set.  Difference pregaps remember in `base` which parent
    indices each row consumed (row i came from base[i], base[i+1]).
    """

    index: FinSet
    left: dict[int, frozenset[int]]
    right: dict[int, frozenset[int]]
    tag: str = "custom"
    base: tuple[int, ...] | None = None

    def is_normal(self) -> bool:
        return all(not (self.left[a] & self.right[a]) for a in self.index)

    def restrict(self, sub) -> "Pregap":
        sub = FinSet(sub)
        if not all(a in set(self.index) for a in sub):
            raise OutOfDomain("restriction indices outside the pregap index")
        return Pregap(
            index=sub,
            left={a: self.left[a] for a in sub},
            right={a: self.right[a] for a in sub},
            tag=self.tag,
            base=self.base,
        )


@dataclass(frozen=True, eq=False)
class SeparatingFunction:
    """Thresholds s(side, index) certifying separability of a pregap."""

    thresholds: dict[tuple[str, int], int] = field(default_factory=dict)

    @staticmethod
    def symmetric(values: dict[int, int]) -> "SeparatingFunction":
        t = {}
        for a, v in values.items():
            t[(LEFT, a)] = v
            t[(RIGHT, a)] = v
        return SeparatingFunction(t)

    def threshold(self, side: str, a: int) -> int:
        return self.thresholds[(side, a)]


def hausdorff_gap(s: Scheme) -> Pregap:
    """The explicit Hausdorff-style pregap of a binary scheme.

    L_a = {2k + Xi_a(k) : 1 <= k <= K, Xi_a(k) >= 0} and R_a flips the
    parity bit.  Tagged normal: L_a and R_a are disjoint by parity.
    """
    if not s.type.is_binary:
        raise NotBinaryScheme("the gap construction needs n_k = 2 at every level")
    xi_t = s._xi_table()
    left, right = {}, {}
    for a in range(s.domain_size):
        ks = [k for k in range(1, s.K + 1) if xi_t[a, k] >= 0]
        left[a] = frozenset(2 * k + int(xi_t[a, k]) for k in ks)
        right[a] = frozenset(2 * k + 1 - int(xi_t[a, k]) for k in ks)
    return Pregap(index=s.domain, left=left, right=right, tag="hausdorff")


def n_window(k: int) -> FinSet:
    """N_k = {0, .., 2k+1}, the window holding levels up to k."""
    return FinSet(range(2 * k + 2))


def _mask_dtype(K: int):
    # windows reach bit 2K+1; stay on int64 while that fits
    return np.int64 if 2 * K + 3 < 63 else object


def _masks(g: Pregap, K: int) -> tuple[np.ndarray, np.ndarray, list[int]]:
    order = list(g.index)
    dt = _mask_dtype(K)
    lm = np.array([sum(1 << e for e in g.left[a]) for a in order], dtype=dt)
    rm = np.array([sum(1 << e for e in g.right[a]) for a in order], dtype=dt)
    return lm, rm, order


def _window_masks(K: int) -> np.ndarray:
    return np.array(
        [(1 << (2 * k + 2)) - 1 for k in range(K + 1)], dtype=_mask_dtype(K)
    )


def _parity_masks(K: int) -> tuple[int, int]:
    even = sum(1 << e for e in range(0, 2 * K + 2, 2))
    odd = sum(1 << e for e in range(1, 2 * K + 2, 2))
    return even, odd


def check_interhausdorff(s: Scheme, g: Pregap) -> list[Violation]:
    """Window laws of the Hausdorff gap, exhaustively over index pairs.

    (0) L_a disjoint from R_a; (1) each window {2k,2k+1} meets L_a and
    R_a at most once; (2) differences and cross intersections live in
    N_rho(a,b); (3) below N_{Delta(a,b)-1} the rows of a and b agree.
    """
    out: list[Violation] = []
    lm, rm, order = _masks(g, s.K)
    idx = np.array(order, dtype=np.intp)
    win = _window_masks(s.K)
    for pos, a in enumerate(order):
        if lm[pos] & rm[pos]:
            out.append(Violation("interhausdorff-0", f"L_{a} meets R_{a}"))
        for k in range(1, s.K + 1):
            if (lm[pos] >> (2 * k)) & 3 == 3 or (rm[pos] >> (2 * k)) & 3 == 3:
                out.append(
                    Violation("interhausdorff-1", f"two points of window {k} at index {a}", k)
                )
    rho_m = s._rho_matrix()[np.ix_(idx, idx)]
    delta_m = s._delta_matrix()[np.ix_(idx, idx)]
    n = len(order)
    upper = np.arange(n)[:, None] < np.arange(n)[None, :]
    nw = win[np.minimum(rho_m, s.K)]
    bad2 = (
        ((lm[:, None] & ~lm[None, :]) & ~nw)
        | ((rm[:, None] & ~rm[None, :]) & ~nw)
        | ((lm[:, None] & rm[None, :]) & ~nw)
        | ((lm[None, :] & rm[:, None]) & ~nw)
    )
    for i, j in np.argwhere(upper & (bad2 != 0)):
        out.append(
            Violation(
                "interhausdorff-2",
                f"pair ({order[i]},{order[j]}) escapes N_rho",
                int(rho_m[i, j]),
            )
        )
    dwin = win[np.clip(delta_m - 1, 0, s.K)]
    bad3 = ((lm[:, None] ^ lm[None, :]) & dwin) | ((rm[:, None] ^ rm[None, :]) & dwin)
    for i, j in np.argwhere(upper & (bad3 != 0)):
        out.append(
            Violation(
                "interhausdorff-3",
                f"pair ({order[i]},{order[j]}) differs inside N_(Delta-1)",
            )
        )
    return out


def check_hausdorff_condition(s: Scheme, g: Pregap) -> list[Violation]:
    """{a < b : L_b ∩ R_a ⊆ k} ⊆ (b)_k for every b and k <= K."""
    out: list[Violation] = []
    lm, rm, order = _masks(g, s.K)
    idx = np.array(order, dtype=np.intp)
    rho_m = s._rho_matrix()[np.ix_(idx, idx)]
    n = len(order)
    upper = np.arange(n)[:, None] < np.arange(n)[None, :]
    for k in range(s.K + 1):
        low = (1 << k) - 1
        inter = lm[None, :] & rm[:, None]  # [a, b] -> L_b ∩ R_a
        small = (inter & ~low) == 0
        bad = upper & small & (rho_m > k)
        for i, j in np.argwhere(bad):
            out.append(
                Violation(
                    "hausdorff-condition",
                    f"index {order[i]} with L_{order[j]}∩R_{order[i]} ⊆ {k} "
                    f"but outside ({order[j]})_{k}",
                    k,
                )
            )
    return out


def levelwise_diff(g: Pregap, X) -> Pregap:
    """Successor-difference pregap along the positions X of g.index."""
    X = FinSet(X)
    if len(X) < 2:
        raise TooFewIndices("levelwise_diff needs at least two index positions")
    if X[-1] >= len(g.index):
        raise OutOfDomain(f"position {X[-1]} outside the index enumeration")
    vals = [g.index[p] for p in X]
    left, right = {}, {}
    for i in range(len(vals) - 1):
        lo, hi = vals[i], vals[i + 1]
        left[i] = g.left[hi] - g.left[lo]
        right[i] = g.right[hi] - g.right[lo]
    return Pregap(
        index=FinSet(range(len(vals) - 1)),
        left=left,
        right=right,
        tag="difference",
        base=tuple(vals),
    )


def check_levelwise_even_odd(s: Scheme, g: Pregap) -> list[Violation]:
    """Outside N_rho(a,a+1), successor differences are even on L, odd on R."""
    out: list[Violation] = []
    lm, rm, order = _masks(g, s.K)
    pos_of = {a: i for i, a in enumerate(order)}
    win = _window_masks(s.K)
    rho_m = s._rho_matrix()
    even, odd = _parity_masks(s.K)
    for a in order:
        if a + 1 not in pos_of:
            continue
        i, j = pos_of[a], pos_of[a + 1]
        nw = win[min(int(rho_m[a, a + 1]), s.K)]
        if (lm[j] & ~lm[i]) & ~nw & odd:
            out.append(Violation("levelwise-even", f"odd excess in L_{a+1}\\L_{a}"))
        if (rm[j] & ~rm[i]) & ~nw & even:
            out.append(Violation("levelwise-odd", f"even excess in R_{a+1}\\R_{a}"))
    return out


def todorcevic_restrict(s: Scheme, g: Pregap, P0) -> Pregap:
    """Restrict the Hausdorff gap to C = union of the windows of P0."""
    P0 = frozenset(P0)
    if not P0 <= set(range(1, s.K + 1)):
        raise OutOfDomain(f"P0 must be a subset of 1..{s.K}")
    C = frozenset(x for k in P0 for x in (2 * k, 2 * k + 1))
    return Pregap(
        index=g.index,
        left={a: g.left[a] & C for a in g.index},
        right={a: g.right[a] & C for a in g.index},
        tag="todorcevic",
        base=g.base,
    )


def check_todorcevic_capture_laws(s: Scheme, gC: Pregap, P0, P1) -> list[Violation]:
    """Capture laws of the restricted gap.

    Pairs captured at l in P0 must satisfy L^C_a ∩ R^C_b = {2l};
    pairs captured at l in P1 must be inclusion-increasing on both sides.
    """
    P0, P1 = frozenset(P0), frozenset(P1)
    out: list[Violation] = []
    lm, rm, order = _masks(gC, s.K)
    pos_of = {a: i for i, a in enumerate(order)}
    pairs = s.captured_pairs_by_level()
    for l in range(1, s.K + 1):
        for a, b in pairs[l - 1]:
            if a not in pos_of or b not in pos_of:
                continue
            i, j = pos_of[a], pos_of[b]
            if l in P0:
                if lm[i] & rm[j] != (1 << (2 * l)):
                    out.append(
                        Violation(
                            "todorcevic-P0",
                            f"L^C_{a} ∩ R^C_{b} != {{{2 * l}}} for pair captured at {l}",
                            l,
                        )
                    )
            elif l in P1:
                if (lm[i] & ~lm[j]) or (rm[i] & ~rm[j]):
                    out.append(
                        Violation(
                            "todorcevic-P1",
                            f"rows of pair ({a},{b}) captured at {l} not increasing",
                            l,
                        )
                    )
    return out


def is_biorthogonal(g: Pregap) -> bool:
    """Every cross pair meets: Kunen's obstruction to separation."""
    if not g.is_normal():
        raise NotNormal("biorthogonality is defined for normal pregaps")
    order = list(g.index)
    for i, a in enumerate(order):
        for b in order[i + 1 :]:
            if not ((g.left[a] & g.right[b]) or (g.left[b] & g.right[a])):
                return False
    return True


def validate_separating(g: Pregap, s: SeparatingFunction) -> bool:
    """L_a ∩ R_b ⊆ max(s(L,a), s(R,b)) over all index pairs."""
    try:
        for a in g.index:
            for b in g.index:
                bound = max(s.threshold(LEFT, a), s.threshold(RIGHT, b))
                if any(x >= bound for x in g.left[a] & g.right[b]):
                    return False
    except KeyError:
        return False
    return True


def set_from_separating(g: Pregap, s: SeparatingFunction) -> FinSet:
    """The separating set C = union of L_a above threshold.

    Asserts the defining properties: every left tail lands in C and
    every right tail misses it.  Raises InvalidSeparating when s does
    not separate g.
    """
    if not validate_separating(g, s):
        raise InvalidSeparating("function does not separate the pregap")
    C: set[int] = set()
    for a in g.index:
        C.update(x for x in g.left[a] if x > s.threshold(LEFT, a))
    for a in g.index:
        tail = {x for x in g.right[a] if x > s.threshold(RIGHT, a)}
        assert not (tail & C), f"right tail of {a} meets the separating set"
    return FinSet(C)


def gap_table_csv(g: Pregap) -> str:
    lines = ["alpha,L,R"]
    for a in g.index:
        ls = " ".join(str(x) for x in sorted(g.left[a]))
        rs = " ".join(str(x) for x in sorted(g.right[a]))
        lines.append(f"{a},{ls},{rs}")
    return "\n".join(lines) + "\n"


def corrupt_pregap(g: Pregap) -> Pregap:
    """Test fixture: inject one point of L into the matching R row."""
    a = g.index[0]
    bad = dict(g.right)
    extra = min(g.left[a]) if g.left[a] else 0
    bad[a] = g.right[a] | {extra}
    return replace(g, right=bad)
