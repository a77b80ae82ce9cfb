"""Definition-literal recomputation of the canonical functions.

Everything here expands the definitions directly over the stored
levels: rho scans levels ascending for a member containing both
ordinals, norms come from an arbitrary containing member's trace,
Delta compares full norm sequences positionally, and the captured
predicate is evaluated clause by clause.  No memo table of the scheme
module is touched and no function values are cached; duplication is
the point.  SchemeOracle only pre-wraps the raw level data in
frozensets so membership tests are not quadratic.
"""

from __future__ import annotations

from .finset import FinSet
from .scheme import TOP, Scheme


class SchemeOracle:
    """Frozen view of a scheme's raw levels for definition expansion."""

    def __init__(self, s: Scheme):
        self.type = s.type
        self.K = s.type.K
        self.m = s.type.m
        self.levels = [[(F, frozenset(F)) for F in lev] for lev in s.levels]

    def rho(self, alpha: int, beta: int) -> int:
        for k, lev in enumerate(self.levels):
            for _, fs in lev:
                if alpha in fs and beta in fs:
                    return k
        raise AssertionError("cofinality failed: no member contains both")

    def member_containing(self, alpha: int, k: int) -> FinSet:
        for F, fs in self.levels[k]:
            if alpha in fs:
                return F
        raise AssertionError(f"no level-{k} member contains {alpha}")

    def norm(self, alpha: int, k: int) -> int:
        F = self.member_containing(alpha, k)
        return sum(1 for x in F if x < alpha)

    def norm_sequence(self, alpha: int) -> list[int]:
        return [self.norm(alpha, k) for k in range(self.K + 1)]

    def delta(self, alpha: int, beta: int):
        fa, fb = self.norm_sequence(alpha), self.norm_sequence(beta)
        for k in range(self.K + 1):
            if fa[k] != fb[k]:
                return k
        return TOP

    def xi(self, alpha: int, k: int) -> int:
        if k == 0:
            return 0
        F = self.member_containing(alpha, k)
        r = self.type.r(k)
        blk = self.m[k - 1] - r
        pos = F.index(alpha)
        if pos < r:
            return -1
        return (pos - r) // blk

    def captured(self, family, l: int) -> bool:
        """Clause-by-clause expansion of the captured-system definition.

        Returns False for anything that is not a root-tail-tail
        Delta-system of equal-size members, and for l = 0.
        """
        family = [FinSet(D) for D in family]
        if len(family) < 1 or len(set(family)) != len(family):
            return False
        n = len(family)
        m = len(family[0])
        if any(len(D) != m for D in family) or m == 0:
            return False
        if n >= 2:
            root = set(family[0]) & set(family[1])
            for i in range(n):
                for j in range(i + 1, n):
                    if set(family[i]) & set(family[j]) != root:
                        return False
        else:
            root = set()
        r = len(root)
        root_fs = FinSet(root)
        if FinSet(family[0][:r]) != root_fs:
            return False
        for D in family:
            tail = [x for x in D if x not in root]
            if root and tail and max(root) >= min(tail):
                return False
        for i in range(n - 1):
            ti = [x for x in family[i] if x not in root]
            tj = [x for x in family[i + 1] if x not in root]
            if not ti or not tj or max(ti) >= min(tj):
                return False
        if l < 1 or l > self.K:
            return False
        for i, D in enumerate(family):
            for a in range(m):
                want = -1 if a < r else i
                if self.xi(D[a], l) != want:
                    return False
        for i in range(n):
            for j in range(i + 1, n):
                for a in range(r, m):
                    x, y = family[i][a], family[j][a]
                    if self.rho(x, y) != l or self.delta(x, y) != l:
                        return False
        return True

    def hausdorff(self) -> tuple[dict, dict]:
        """Left/right gap sets recomputed from a fresh Xi expansion."""
        left, right = {}, {}
        for alpha in range(self.m[-1]):
            xs = {k: self.xi(alpha, k) for k in range(1, self.K + 1)}
            left[alpha] = frozenset(2 * k + v for k, v in xs.items() if v >= 0)
            right[alpha] = frozenset(2 * k + (1 - v) for k, v in xs.items() if v >= 0)
        return left, right


def rho_naive(s: Scheme, alpha: int, beta: int) -> int:
    return SchemeOracle(s).rho(alpha, beta)


def delta_naive(s: Scheme, alpha: int, beta: int):
    return SchemeOracle(s).delta(alpha, beta)


def norm_naive(s: Scheme, alpha: int, k: int) -> int:
    return SchemeOracle(s).norm(alpha, k)


def xi_naive(s: Scheme, alpha: int, k: int) -> int:
    return SchemeOracle(s).xi(alpha, k)


def captured_naive(s: Scheme, family, l: int) -> bool:
    return SchemeOracle(s).captured(family, l)


def hausdorff_naive(s: Scheme) -> tuple[dict, dict]:
    return SchemeOracle(s).hausdorff()
