"""Exhaustive checkers for the canonical-function laws of a scheme.

Each checker quantifies over the whole finite domain and returns a
list of violations (expected empty).  Pair-quantified laws run on any
domain; the triple- and quadruple-quantified ones (the ordinal-metric
triangle inequality, the Delta coherence law and the increasing-
bijection chain) are meant for domains up to a few hundred ordinals.
"""

from __future__ import annotations

import numpy as np

from .scheme import Scheme, Violation, closure


def _matrices(s: Scheme):
    return s._rho_matrix(), s._delta_matrix(), s._norm_table(), s._xi_table()


def check_ordinal_metric(s: Scheme, triples: bool = True) -> list[Violation]:
    """om1-om4: zero law, symmetry, triangle inequality, closure traces."""
    out: list[Violation] = []
    rho_m, _, _, _ = _matrices(s)
    m = s.domain_size
    eye = np.eye(m, dtype=bool)
    if ((rho_m == 0) != eye).any():
        out.append(Violation("om1", "rho(a,b) = 0 iff a = b fails"))
    if (rho_m != rho_m.T).any():
        out.append(Violation("om2", "rho is not symmetric"))
    if triples:
        idx = np.arange(m)
        mask = (idx[:, None, None] <= idx[None, :, None]) & (
            idx[:, None, None] <= idx[None, None, :]
        )
        lhs = rho_m[:, :, None]
        bound = np.maximum(rho_m[:, None, :], rho_m[None, :, :])
        bad = mask & (lhs > bound)
        for a, b, c in np.argwhere(bad):
            out.append(Violation("om3", f"triangle fails at ({a},{b},{c})"))
            if len(out) > 20:
                return out
    # om4 at finite scale: every closure equals the trace of every member
    for k, lev in enumerate(s.levels):
        for F in lev:
            fs = list(F)
            for i, alpha in enumerate(fs):
                if closure(s, alpha, k) != F[: i + 1]:
                    out.append(
                        Violation(
                            "om4",
                            f"({alpha})_{k} differs from trace of {tuple(F)}",
                            k,
                        )
                    )
    return out


def check_delta_laws(s: Scheme, triples: bool = True) -> list[Violation]:
    """dp1 and dp2 relating norms, rho and Delta."""
    out: list[Violation] = []
    rho_m, delta_m, norms, _ = _matrices(s)
    m = s.domain_size
    idx = np.arange(m)
    lower = idx[:, None] < idx[None, :]
    for k in range(s.K + 1):
        bad = lower & (rho_m <= k) & (norms[:, None, k] >= norms[None, :, k])
        for a, b in np.argwhere(bad):
            out.append(Violation("dp1", f"norms not increasing at ({a},{b}) level {k}", k))
            if len(out) > 20:
                return out
    if (np.where(~np.eye(m, dtype=bool), delta_m > rho_m, False)).any():
        out.append(Violation("dp1", "Delta exceeds rho on a distinct pair"))
    if triples:
        dab = delta_m[:, :, None]
        dbd = delta_m[None, :, :]
        dad = delta_m[:, None, :]
        bad = (dab < dbd) & (dab != dad)
        for a, b, d in np.argwhere(bad):
            out.append(Violation("dp2", f"Delta coherence fails at ({a},{b},{d})"))
            if len(out) > 20:
                return out
    return out


def check_xi_lemma(s: Scheme) -> list[Violation]:
    """The four case relations between k, Delta, rho and Xi for a < b."""
    out: list[Violation] = []
    rho_m, delta_m, _, xi_t = _matrices(s)
    m = s.domain_size
    idx = np.arange(m)
    lower = idx[:, None] < idx[None, :]
    for k in range(1, s.K + 1):
        xa, xb = xi_t[:, None, k], xi_t[None, :, k]
        cases = [
            ("xi-a", lower & (delta_m > k) & (xa != xb)),
            ("xi-b", lower & (rho_m == k) & ~((xa >= 0) & (xa < xb))),
            ("xi-c", lower & (rho_m < k) & (xa != -1) & (xa != xb)),
            ("xi-d", lower & (delta_m == k) & ~((xa >= 0) & (xb >= 0) & (xa != xb))),
        ]
        for name, bad in cases:
            for a, b in np.argwhere(bad):
                out.append(Violation(name, f"lemma case fails at ({a},{b}) level {k}", k))
                if len(out) > 20:
                    return out
    return out


def check_chain_lemma(s: Scheme) -> list[Violation]:
    """The increasing-bijection chain between closures below Delta.

    For a != b and k < Delta(a,b), with h the increasing bijection
    (a)_k -> (b)_k: the fixed points of h form an initial segment, and
    along moved positions rho(g, h(g)) is non-decreasing, Delta is
    non-increasing, and both stay within [Delta(a,b), rho(a,b)].
    """
    out: list[Violation] = []
    rho_m, delta_m, _, _ = _matrices(s)
    rho_l = rho_m.tolist()
    delta_l = delta_m.tolist()
    chains = s._chains()
    m = s.domain_size
    big = s.K + 2
    for a in range(m):
        ra, da, cha = rho_l[a], delta_l[a], chains[a]
        for b in range(a + 1, m):
            d = da[b]
            rho_ab = ra[b]
            chb = chains[b]
            for k in range(0, min(d, s.K + 1)):
                ca, cb = cha[k], chb[k]
                if len(ca) != len(cb):
                    out.append(
                        Violation("chain", f"closure sizes differ at ({a},{b}) level {k}", k)
                    )
                    continue
                seen_moved = False
                prev_rho, prev_delta = -1, big
                for x, y in zip(ca, cb):
                    if x == y:
                        if seen_moved:
                            out.append(
                                Violation(
                                    "chain-a",
                                    f"fixed points not initial at ({a},{b}) k={k}",
                                    k,
                                )
                            )
                        continue
                    seen_moved = True
                    r_, d_ = rho_l[x][y], delta_l[x][y]
                    if not (prev_rho <= r_ <= rho_ab and d <= d_ <= prev_delta and d_ <= r_):
                        out.append(
                            Violation(
                                "chain-b", f"chain inequality fails at ({a},{b}) k={k}", k
                            )
                        )
                        break
                    prev_rho, prev_delta = r_, d_
                if len(out) > 20:
                    return out
    return out


def check_canonical_laws(s: Scheme, triple_domain_cap: int = 128) -> list[Violation]:
    """All canonical-function laws; laws over >2 ordinals only below the cap."""
    triples = s.domain_size <= triple_domain_cap
    out = check_ordinal_metric(s, triples=triples)
    out += check_delta_laws(s, triples=triples)
    out += check_xi_lemma(s)
    if triples:
        out += check_chain_lemma(s)
    return out
