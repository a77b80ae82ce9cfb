"""The finite-condition forcing posets as executable objects.

Five kinds share one engine.  SEP conditions are finite partial maps
index -> natural whose thresholds dominate the cross intersections;
CHI0 / CHI1 / BIORTH / DN conditions are finite index sets.  CHI1 and
the biorthogonality poset differ only in labelling, so they share a
predicate.  In every kind a condition extends another by superset /
map extension, hence compatibility is "the union is again a condition"
(with agreement on shared indices for maps).

check_capture_compatibility_law asserts the finite combinatorial core
of the ccc arguments: unions of conditions whose index blocks form a
captured pair are again conditions.  The uncountable refinement steps
of those arguments become explicit eligibility hypotheses here; the
law is only asserted when they hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import networkx as nx

from . import scheme as sch
from .capture import DeltaSystemWitness, captured_set_levels, certify_capture
from .errors import IncompleteFilter, NotDeltaSystem, OutOfUniverse
from .finset import FinSet, set_below
from .gaps import Pregap, SeparatingFunction
from .scheme import Scheme, Violation

SEP = "SEP"
CHI0 = "CHI0"
CHI1 = "CHI1"
DN = "DN"
BIORTH = "BIORTH"

SET_KINDS = (CHI0, CHI1, DN, BIORTH)


@dataclass(frozen=True, eq=False)
class PosetView:
    kind: str
    universe: FinSet
    pregap: Pregap | None = None
    scheme: Scheme | None = None
    n: int | None = None
    levels_a: frozenset[int] | None = None


def sep_view(pregap: Pregap, universe=None) -> PosetView:
    return PosetView(SEP, FinSet(universe if universe is not None else pregap.index), pregap=pregap)


def chi0_view(pregap: Pregap, universe=None) -> PosetView:
    return PosetView(CHI0, FinSet(universe if universe is not None else pregap.index), pregap=pregap)


def chi1_view(pregap: Pregap, universe=None) -> PosetView:
    return PosetView(CHI1, FinSet(universe if universe is not None else pregap.index), pregap=pregap)


def biorth_view(pregap: Pregap, universe=None) -> PosetView:
    return PosetView(BIORTH, FinSet(universe if universe is not None else pregap.index), pregap=pregap)


def dn_view(s: Scheme, n: int, levels_a, universe=None) -> PosetView:
    return PosetView(
        DN,
        FinSet(universe if universe is not None else s.domain),
        scheme=s,
        n=n,
        levels_a=frozenset(levels_a),
    )


def _as_condition(v: PosetView, c):
    """Normalize and universe-check a raw condition."""
    if v.kind == SEP:
        cond = {int(a): int(x) for a, x in dict(c).items()}
        outside = set(cond) - set(v.universe)
        if outside:
            raise OutOfUniverse(f"indices {sorted(outside)} outside the universe")
        if any(x < 0 for x in cond.values()):
            raise OutOfUniverse("SEP values must be naturals")
        return cond
    cond = FinSet(c)
    outside = set(cond) - set(v.universe)
    if outside:
        raise OutOfUniverse(f"indices {sorted(outside)} outside the universe")
    return cond


def is_condition(v: PosetView, c) -> bool:
    """Exact evaluation of the kind's defining clause."""
    c = _as_condition(v, c)
    g = v.pregap
    if v.kind == SEP:
        for a, xa in c.items():
            for b, xb in c.items():
                bound = max(xa, xb)
                if any(x >= bound for x in g.left[a] & g.right[b]):
                    return False
        return True
    if v.kind == CHI0:
        ls = frozenset(x for a in c for x in g.left[a])
        rs = frozenset(x for a in c for x in g.right[a])
        return not (ls & rs)
    if v.kind in (CHI1, BIORTH):
        for a, b in combinations(c, 2):
            if not ((g.left[a] & g.right[b]) or (g.left[b] & g.right[a])):
                return False
        return True
    if v.kind == DN:
        for D in combinations(c, v.n):
            levels = captured_set_levels(v.scheme, D)
            if any(l in v.levels_a for l in levels):
                return False
        return True
    raise ValueError(f"unknown poset kind {v.kind}")


def compatible(v: PosetView, p, q) -> bool:
    """Maps: agree on shared indices and the union is a condition;
    set kinds: the union is a condition."""
    p = _as_condition(v, p)
    q = _as_condition(v, q)
    if v.kind == SEP:
        if any(p[a] != q[a] for a in set(p) & set(q)):
            return False
        return is_condition(v, {**p, **q})
    return is_condition(v, p.union(q))


@dataclass(frozen=True)
class DenseTarget:
    """The dense set M_beta = {p : beta in dom(p)}."""

    beta: int

    def meets(self, v: PosetView, c) -> bool:
        return self.beta in (c.keys() if v.kind == SEP else set(c))


def dense_meet_targets(v: PosetView, betas) -> list[DenseTarget]:
    betas = FinSet(betas)
    outside = set(betas) - set(v.universe)
    if outside:
        raise OutOfUniverse(f"indices {sorted(outside)} outside the universe")
    return [DenseTarget(b) for b in betas]


@dataclass(frozen=True, eq=False)
class GreedyFilterResult:
    """A finite Rasiowa-Sikorski sweep: chain of conditions, one per met target."""

    conditions: tuple
    met: tuple[DenseTarget, ...]
    failed: DenseTarget | None = None

    @property
    def ok(self) -> bool:
        return self.failed is None

    @property
    def last(self):
        return self.conditions[-1]


def _smallest_extension(v: PosetView, cond, beta: int, value_cap: int = 1 << 20):
    if v.kind == SEP:
        bound = 8
        while bound <= value_cap:
            for val in range(bound):
                cand = {**cond, beta: val}
                if is_condition(v, cand):
                    return cand
            bound *= 2
        return None
    cand = cond.union((beta,))
    return cand if is_condition(v, cand) else None


def greedy_filter(v: PosetView, targets, seed) -> GreedyFilterResult:
    """Extend `seed` to meet each target in order by smallest extensions.

    The returned conditions form a chain, hence are pairwise
    compatible.  Failure is data: the first unmeetable target is named.
    """
    cur = _as_condition(v, seed)
    if not is_condition(v, cur):
        raise ValueError("seed is not a condition")
    chain = [cur]
    met = []
    for tgt in targets:
        if tgt.meets(v, cur):
            met.append(tgt)
            continue
        nxt = _smallest_extension(v, cur, tgt.beta)
        if nxt is None:
            return GreedyFilterResult(tuple(chain), tuple(met), failed=tgt)
        cur = nxt
        chain.append(cur)
        met.append(tgt)
    return GreedyFilterResult(tuple(chain), tuple(met))


def extract_separating(v: PosetView, filt) -> SeparatingFunction:
    """Read the separating function off a filter meeting every M_beta."""
    if v.kind != SEP:
        raise ValueError("separating functions come from the SEP poset")
    conditions = filt.conditions if isinstance(filt, GreedyFilterResult) else tuple(filt)
    merged: dict[int, int] = {}
    for cond in conditions:
        for a, x in cond.items():
            if merged.get(a, x) != x:
                raise ValueError(f"not a filter: conditions disagree at index {a}")
            merged[a] = x
    missing = set(v.universe) - set(merged)
    if missing:
        raise IncompleteFilter(f"filter undecided at indices {sorted(missing)}")
    return SeparatingFunction.symmetric(merged)


# -- capture-compatibility laws ---------------------------------------------


def _rtt_pair(a: FinSet, b: FinSet):
    """Root of the two-member root-tail-tail system [a, b], or None."""
    root = a.intersect(b)
    ta, tb = a.difference(root), b.difference(root)
    if not (set_below(root, ta) and set_below(root, tb)):
        return None
    if not ta or not tb or not set_below(ta, tb):
        return None
    return root


def _family_capture_level(s: Scheme, members) -> int | None:
    for l in range(1, s.K + 1):
        try:
            if certify_capture(s, members, l) is not None:
                return l
        except NotDeltaSystem:
            return None
    return None


def sep_law_eligibility(v: PosetView, s: Scheme, p, q) -> int | None:
    """Capture level making (p, q) an instance of the SEP union law.

    Mirrors the refinement hypotheses: order-isomorphic value-matching
    conditions whose index domains form a root-tail-tail pair with
    regular successor blocks, and whose consumed index blocks Z_p, Z_q
    are captured above every value in play.
    """
    g = v.pregap
    if g is None or g.tag != "difference" or g.base is None:
        return None
    p = _as_condition(v, p)
    q = _as_condition(v, q)
    if not (is_condition(v, p) and is_condition(v, q)):
        return None
    if len(p) != len(q) or not p:
        return None
    dom_p, dom_q = FinSet(p), FinSet(q)
    if dom_p > dom_q:
        dom_p, dom_q = dom_q, dom_p
        p, q = q, p
    if dom_p == dom_q:
        return None
    root = _rtt_pair(dom_p, dom_q)
    if root is None:
        return None
    if any(p[dom_p[i]] != q[dom_q[i]] for i in range(len(dom_p))):
        return None
    tails = dom_p.difference(root).union(dom_q.difference(root))
    if root and max(root) + 1 >= min(tails):
        return None
    if dom_p[-1] + 1 in set(dom_q) or dom_q[-1] + 1 in set(dom_p):
        return None
    blocks_p = {x for a in dom_p.difference(root) for x in (a, a + 1)}
    blocks_q = {x for b in dom_q.difference(root) for x in (b, b + 1)}
    if blocks_p & blocks_q:
        return None
    base = g.base
    z_p = FinSet(x for a in dom_p for x in (base[a], base[a + 1]))
    z_q = FinSet(x for b in dom_q for x in (base[b], base[b + 1]))
    if len(z_p) != len(z_q):
        return None
    pair = [z_p, z_q] if set_below(z_p.difference(z_q), z_q.difference(z_p)) else [z_q, z_p]
    l = _family_capture_level(s, pair)
    if l is None:
        return None
    if l <= max(list(p.values()) + list(q.values())):
        return None
    return l


def dn_law_eligibility(v: PosetView, s: Scheme, p1, p2, q1, q2) -> int | None:
    """Capture level making (p1,p2,q1,q2) an instance of the DN union law.

    Four equal-size conditions in one root-tail-tail system, blocks
    ordered as listed, with {p1 ∪ p2, q1 ∪ q2} captured."""
    conds = [_as_condition(v, c) for c in (p1, p2, q1, q2)]
    if any(not is_condition(v, c) for c in conds):
        return None
    if len({len(c) for c in conds}) != 1 or not conds[0]:
        return None
    root = conds[0].intersect(conds[1])
    for a, b in combinations(conds, 2):
        if a.intersect(b) != root:
            return None
    tails = [c.difference(root) for c in conds]
    if not all(set_below(root, t) and t for t in tails):
        return None
    if not all(set_below(tails[i], tails[i + 1]) for i in range(3)):
        return None
    b1 = conds[0].union(conds[1])
    b2 = conds[2].union(conds[3])
    if len(b1) != len(b2):
        return None
    return _family_capture_level(s, [b1, b2])


def check_capture_compatibility_law(v: PosetView, s: Scheme, pairs) -> list[Violation]:
    """Assert the union law on every eligible supplied instance.

    SEP: pairs of conditions; DN: 4-tuples (p1, p2, q1, q2) whose outer
    members must union to a condition.  Ineligible entries are skipped.
    """
    out: list[Violation] = []
    for entry in pairs:
        if v.kind == SEP:
            p, q = entry
            if _as_condition(v, p) == _as_condition(v, q):
                if not is_condition(v, p):
                    out.append(Violation("sep-capture-law", f"trivial pair invalid: {p}"))
                continue
            l = sep_law_eligibility(v, s, p, q)
            if l is None:
                continue
            if not compatible(v, p, q):
                out.append(
                    Violation(
                        "sep-capture-law",
                        f"captured-at-{l} pair {p} / {q} has invalid union",
                        l,
                    )
                )
        elif v.kind == DN:
            p1, p2, q1, q2 = entry
            l = dn_law_eligibility(v, s, p1, p2, q1, q2)
            if l is None:
                continue
            union = _as_condition(v, p1).union(_as_condition(v, q2))
            if not is_condition(v, union):
                out.append(
                    Violation(
                        "dn-capture-law",
                        f"captured-at-{l} blocks {tuple(p1)}|{tuple(q2)} union invalid",
                        l,
                    )
                )
        else:
            raise ValueError("the capture law applies to SEP and DN views")
    return out


# -- antichain search and sunflower refinement -------------------------------


@dataclass(frozen=True, eq=False)
class AntichainResult:
    members: tuple
    exact: bool
    budget_exceeded: bool
    examined: int


def _enumerate_conditions(v: PosetView, universe: FinSet, max_size: int, value_bound: int):
    for size in range(1, max_size + 1):
        for dom in combinations(universe, size):
            if v.kind == SEP:
                def assign(i, cur):
                    if i == len(dom):
                        yield dict(cur)
                        return
                    for val in range(value_bound):
                        cur[dom[i]] = val
                        yield from assign(i + 1, cur)
                    del cur[dom[i]]

                for cand in assign(0, {}):
                    if is_condition(v, cand):
                        yield cand
            else:
                cand = FinSet(dom)
                if is_condition(v, cand):
                    yield cand


def exhaustive_antichain(
    v: PosetView,
    universe=None,
    max_size: int | None = None,
    budget: int = 5000,
    value_bound: int = 2,
) -> AntichainResult:
    """Largest pairwise-incompatible family over bounded-size conditions.

    Exact (maximum clique of the incompatibility graph) within budget;
    beyond it a deterministic greedy sweep runs and the result is
    flagged budget_exceeded.
    """
    universe = FinSet(universe if universe is not None else v.universe)
    if max_size is None:
        max_size = len(universe)
    candidates = []
    over = False
    for cand in _enumerate_conditions(v, universe, max_size, value_bound):
        if len(candidates) >= budget:
            over = True
            break
        candidates.append(cand)
    if over or budget == 0:
        chosen = []
        for cand in candidates:
            if all(not compatible(v, cand, other) for other in chosen):
                chosen.append(cand)
        return AntichainResult(tuple(chosen), exact=False, budget_exceeded=True,
                               examined=len(candidates))
    graph = nx.Graph()
    graph.add_nodes_from(range(len(candidates)))
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            if not compatible(v, candidates[i], candidates[j]):
                graph.add_edge(i, j)
    if not candidates:
        return AntichainResult((), exact=True, budget_exceeded=False, examined=0)
    clique, _ = nx.max_weight_clique(graph, weight=None)
    members = tuple(candidates[i] for i in sorted(clique))
    return AntichainResult(members, exact=True, budget_exceeded=False,
                           examined=len(candidates))


def delta_system_refine(family) -> DeltaSystemWitness | None:
    """Extract a maximum root-tail-tail Delta-subsystem of common size.

    Exact despite the greedy core: for each candidate root (a pairwise
    intersection) the admissible members have pairwise-disjoint ordered
    tails, so a sweep by tail maximum is optimal interval scheduling.
    Ties break lexicographically.
    """
    members = sorted(set(FinSet(x) for x in family))
    if len(members) < 2:
        return None
    by_size: dict[int, list[FinSet]] = {}
    for m in members:
        by_size.setdefault(len(m), []).append(m)
    best: tuple[int, tuple, FinSet] | None = None
    for size, group in sorted(by_size.items()):
        if len(group) < 2:
            continue
        roots = sorted({a.intersect(b) for a, b in combinations(group, 2)})
        for root in roots:
            cands = [
                m for m in group
                if root.is_initial_segment_of(m) and set_below(root, m.difference(root))
            ]
            cands.sort(key=lambda m: max(m.difference(root)))
            chosen: list[FinSet] = []
            last = max(root) if root else -1
            for m in cands:
                tail = m.difference(root)
                if tail and tail[0] > last:
                    chosen.append(m)
                    last = tail[-1]
            if len(chosen) >= 2:
                key = (len(chosen), tuple(chosen), root)
                if best is None or len(chosen) > best[0] or (
                    len(chosen) == best[0] and tuple(chosen) < best[1]
                ):
                    best = (len(chosen), tuple(chosen), root)
    if best is None:
        return None
    return DeltaSystemWitness(root=best[2], members=best[1])


def condition_to_json(v: PosetView, c):
    c = _as_condition(v, c)
    if v.kind == SEP:
        return {str(a): x for a, x in sorted(c.items())}
    return list(c)
