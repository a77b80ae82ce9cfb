"""Delta-system recognition, captured systems, projections and brackets.

A family <D_0,..,D_{n-1}> of equal-size sets is captured at level l
when (1) it is a root-tail-tail Delta-system with root R of size r,
(2) Xi_{D_i(a)}(l) is -1 on root positions a < r and exactly i on tail
positions a >= r, and (3) rho = l = Delta coordinatewise across tails.
Root positions are a < r and tails a >= r; the positional layout of a
root of size r admits no other reading.  A set D of ordinals is
captured when the family of its singletons is.

Capture levels are required to be >= 1 (the Xi pattern at level 0 is
degenerate).  Single-member families are accepted with the empty-root
convention; nothing downstream relies on them.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations, islice

from . import scheme as sch
from .errors import EqualArguments, NotDeltaSystem, OutOfDomain
from .finset import FinSet, set_below


@dataclass(frozen=True)
class DeltaSystemWitness:
    root: FinSet
    members: tuple[FinSet, ...]


@dataclass(frozen=True)
class CaptureCertificate:
    level: int
    members: tuple[FinSet, ...]
    root: FinSet

    @property
    def root_size(self) -> int:
        return len(self.root)

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "members": [list(m) for m in self.members],
            "root": list(self.root),
        }


@dataclass(frozen=True)
class CaptureSearch:
    """Result of a capture search; mode 'sampled' signals the cap was hit."""

    certificates: tuple[CaptureCertificate, ...]
    mode: str  # "exhaustive" | "sampled"
    seed: int | None
    examined: int
    total_candidates: int
    sample_preview: tuple[tuple[int, ...], ...] = ()

    @property
    def sampled(self) -> bool:
        return self.mode == "sampled"


def delta_system_root(family) -> FinSet | None:
    """Common pairwise intersection, or None when the pairs disagree."""
    members = [FinSet(x) for x in family]
    if len(members) < 2:
        raise ValueError("a Delta-system needs at least two members")
    distinct = sorted(set(members))
    if len(distinct) < 2:
        return None
    root = distinct[0].intersect(distinct[1])
    for i in range(len(distinct)):
        for j in range(i + 1, len(distinct)):
            if distinct[i].intersect(distinct[j]) != root:
                return None
    return root


def is_root_tail_tail(family) -> bool:
    """Delta-system whose root precedes all tails, tails ordered as listed."""
    members = [FinSet(x) for x in family]
    if len(members) < 2 or len(set(members)) != len(members):
        return False
    root = delta_system_root(members)
    if root is None:
        return False
    tails = [m.difference(root) for m in members]
    if not all(set_below(root, tail) for tail in tails):
        return False
    return all(set_below(tails[i], tails[i + 1]) for i in range(len(tails) - 1))


def _rtt_shape(family) -> tuple[FinSet, tuple[FinSet, ...]] | None:
    """Root and members when family is an equal-size RTT system (n=1 allowed)."""
    members = tuple(FinSet(x) for x in family)
    if not members or len({len(m) for m in members}) != 1 or len(members[0]) == 0:
        return None
    if len(members) == 1:
        return FinSet(), members
    if not is_root_tail_tail(members):
        return None
    return delta_system_root(members), members


def certify_capture(s: sch.Scheme, family, l: int) -> CaptureCertificate | None:
    """Certificate when the family is captured at level l, else None.

    Raises NotDeltaSystem when the family is not an equal-size
    root-tail-tail Delta-system at all.
    """
    shape = _rtt_shape(family)
    if shape is None:
        raise NotDeltaSystem("family is not an equal-size root-tail-tail Delta-system")
    root, members = shape
    for m in members:
        for x in m:
            s._check_ordinal(x)
    if not (1 <= l <= s.K):
        return None
    r = len(root)
    xi_t = s._xi_table()
    for i, D in enumerate(members):
        for a, x in enumerate(D):
            want = -1 if a < r else i
            if xi_t[x, l] != want:
                return None
    rho_m = s._rho_matrix()
    delta_m = s._delta_matrix()
    n = len(members)
    m_size = len(members[0])
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(r, m_size):
                x, y = members[i][a], members[j][a]
                if rho_m[x, y] != l or delta_m[x, y] != l:
                    return None
    return CaptureCertificate(level=l, members=members, root=root)


def is_captured(s: sch.Scheme, family, l: int) -> bool:
    return certify_capture(s, family, l) is not None


def is_fully_captured(s: sch.Scheme, family, l: int) -> bool:
    """Captured with exactly n_l members."""
    cert = certify_capture(s, family, l)
    return cert is not None and len(cert.members) == s.type.n(l)


def captured_set_levels(s: sch.Scheme, D) -> tuple[int, ...]:
    """Levels at which the set D (family of singletons) is captured."""
    D = FinSet(D)
    if not D:
        return ()
    for x in D:
        s._check_ordinal(x)
    xi_t = s._xi_table()
    if len(D) == 1:
        return tuple(l for l in range(1, s.K + 1) if xi_t[D[0], l] == 0)
    rho_m = s._rho_matrix()
    delta_m = s._delta_matrix()
    l = int(rho_m[D[0], D[1]])
    if l < 1:
        return ()
    for i, x in enumerate(D):
        if xi_t[x, l] != i:
            return ()
    for i in range(len(D)):
        for j in range(i + 1, len(D)):
            if rho_m[D[i], D[j]] != l or delta_m[D[i], D[j]] != l:
                return ()
    return (l,)


def _unrank_combination(rank: int, n: int, k: int) -> tuple[int, ...]:
    """rank-th k-combination of range(n) in lexicographic order."""
    out = []
    x = 0
    for slot in range(k, 0, -1):
        while True:
            c = math.comb(n - x - 1, slot - 1)
            if rank < c:
                break
            rank -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def find_captured_tuples(
    s: sch.Scheme,
    S,
    n: int,
    levels=None,
    cap: int = 10**6,
    seed: int = 0,
    threads: int = 1,
) -> CaptureSearch:
    """Search [S]^n for captured tuples at the requested levels.

    Exhaustive over all n-subsets when C(|S|, n) <= cap; otherwise a
    seeded uniform sample of cap candidates is drawn (mode 'sampled').
    Certificates come back in a stable (level, members) order and each
    one is re-verified through certify_capture.
    """
    S = FinSet(S)
    for x in S:
        s._check_ordinal(x)
    wanted = set(range(1, s.K + 1)) if levels is None else set(levels)
    total = math.comb(len(S), n) if n <= len(S) else 0
    preview: tuple[tuple[int, ...], ...] = ()
    if n == 0 or total == 0:
        return CaptureSearch((), "exhaustive", None, 0, total)
    if total <= cap:
        mode, used_seed = "exhaustive", None
        candidates = list(combinations(S, n))
    else:
        mode, used_seed = "sampled", seed
        rng = random.Random(seed)
        ranks = []
        seen = set()
        while len(ranks) < cap:
            r = rng.randrange(total)
            if r not in seen:
                seen.add(r)
                ranks.append(r)
        candidates = [S.image(_unrank_combination(r, len(S), n)) for r in ranks]
        preview = tuple(tuple(c) for c in islice(candidates, 32))

    def scan(block):
        found = []
        for D in block:
            for l in captured_set_levels(s, D):
                if l in wanted:
                    cert = certify_capture(s, [FinSet([x]) for x in D], l)
                    assert cert is not None
                    found.append(cert)
        return found

    if threads > 1 and len(candidates) > 1024:
        chunk = (len(candidates) + threads - 1) // threads
        blocks = [candidates[i : i + chunk] for i in range(0, len(candidates), chunk)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, blocks))
        certs = [c for block in results for c in block]
    else:
        certs = scan(candidates)
    certs.sort(key=lambda c: (c.level, c.members))
    return CaptureSearch(
        certificates=tuple(certs),
        mode=mode,
        seed=used_seed,
        examined=len(candidates),
        total_candidates=total,
        sample_preview=preview,
    )


def project(s: sch.Scheme, S, n: int) -> frozenset[int]:
    """pi_n(S): the levels carrying a captured n-subset of S.  Monotone in S."""
    S = FinSet(S)
    out = set()
    for D in combinations(S, n):
        out.update(captured_set_levels(s, D))
    return frozenset(out)


def sq_bracket(s: sch.Scheme, alpha: int, beta: int) -> int:
    """min of (beta)_{rho(alpha,beta)-1} at or above alpha, for a pair."""
    s._check_ordinal(alpha)
    s._check_ordinal(beta)
    if alpha == beta:
        raise EqualArguments("square bracket needs two distinct ordinals")
    alpha, beta = min(alpha, beta), max(alpha, beta)
    l = int(s._rho_matrix()[alpha, beta])
    trace = sch.closure(s, beta, l - 1)
    return min(x for x in trace if x >= alpha)


def sq_bracket_set(s: sch.Scheme, S) -> FinSet:
    """Brackets over the captured pairs from S."""
    S = FinSet(S)
    out = []
    for a, b in combinations(S, 2):
        if captured_set_levels(s, (a, b)):
            out.append(sq_bracket(s, a, b))
    return FinSet(out)


def h_ideal_generator(s: sch.Scheme, alpha: int, n: int) -> FinSet:
    """H_n(alpha): xi < alpha whose Xi values never exceed alpha's above n.

    The paper-side quantifier 'for all m > n' is truncated at the prefix
    height K.
    """
    s._check_ordinal(alpha)
    if not (0 <= n <= s.K):
        raise OutOfDomain(f"level {n} outside 0..{s.K}")
    xi_t = s._xi_table()
    out = []
    for x in range(alpha):
        ok = True
        for m in range(n + 1, s.K + 1):
            if xi_t[alpha, m] != -1 and xi_t[x, m] > xi_t[alpha, m]:
                ok = False
                break
        if ok:
            out.append(x)
    return FinSet(out)
