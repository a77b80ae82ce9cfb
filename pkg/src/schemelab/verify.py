"""Verification suites and the prefix grids they run over.

The same grids drive the acceptance tests and the `verify` CLI
command.  Suite output is plain counts, never timings, so a run is
byte-for-byte reproducible from (config, seed).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace as dc_replace

from . import capture, gaps, laws, posets
from .oracle import SchemeOracle
from .finset import FinSet
from .scheme import Scheme, build_scheme, verify_axioms
from .typeseq import TypeSequence, enumerate_type_prefixes, make_type_prefix, random_type_prefix

K2_PREFIX = ((1, 2, 0), (2, 2, 1))
K3_PREFIX = ((1, 2, 0), (2, 2, 1), (3, 2, 0))


def grid_prefixes(max_K: int = 4, max_n: int = 3, max_m: int = 200) -> list[TypeSequence]:
    return list(enumerate_type_prefixes(max_K, max_n, max_m))


def random_prefixes(
    seed: int, count: int = 50, max_K: int = 8, max_n: int = 4, max_m: int = 512
) -> list[TypeSequence]:
    rng = random.Random(seed)
    return [
        random_type_prefix(rng, rng.randint(1, max_K), max_n=max_n, max_m=max_m)
        for _ in range(count)
    ]


def random_binary_prefixes(
    seed: int, count: int = 50, max_K: int = 9, max_m: int = 512
) -> list[TypeSequence]:
    rng = random.Random(seed)
    return [
        random_type_prefix(rng, rng.randint(1, max_K), max_m=max_m, binary=True)
        for _ in range(count)
    ]


@dataclass(frozen=True)
class VerifyConfig:
    grid: str = "smoke"  # "smoke" | "full"
    seed: int = 0
    threads: int = 1
    corrupt: bool = False


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name} ({self.detail})"


def _suite_prefixes(cfg: VerifyConfig) -> list[TypeSequence]:
    if cfg.grid == "full":
        return grid_prefixes() + random_prefixes(cfg.seed)
    return grid_prefixes(3, 3, 40) + random_prefixes(cfg.seed, count=5, max_m=64)


def _suite_binary_prefixes(cfg: VerifyConfig) -> list[TypeSequence]:
    if cfg.grid == "full":
        pres = [p for p in grid_prefixes() if p.is_binary]
        return pres + random_binary_prefixes(cfg.seed)
    pres = [p for p in grid_prefixes(3, 2, 40)]
    return pres + random_binary_prefixes(cfg.seed, count=5, max_m=64)


def _corrupt_scheme(s: Scheme) -> Scheme:
    # bump the first element of the last level-1 member, e.g. {0,2} -> {1,2}
    lev1 = list(s.levels[1])
    lev1[-1] = FinSet([lev1[-1][0] + 1, *lev1[-1][1:]])
    levels = list(s.levels)
    levels[1] = tuple(sorted(set(lev1)))
    return dc_replace(s, levels=tuple(levels))


def suite_typeseq(cfg: VerifyConfig) -> SuiteResult:
    rng = random.Random(cfg.seed)
    count = 200 if cfg.grid == "full" else 40
    bad = 0
    for _ in range(count):
        t = random_type_prefix(rng, rng.randint(1, 8))
        try:
            make_type_prefix(t.triples)
        except Exception:
            bad += 1
    return SuiteResult("typeseq", bad == 0, f"prefixes={count}, rejected={bad}")


def suite_axioms(cfg: VerifyConfig) -> SuiteResult:
    prefixes = _suite_prefixes(cfg)
    violations = 0
    for t in prefixes:
        s = build_scheme(t)
        if cfg.corrupt and t.triples == K2_PREFIX:
            s = _corrupt_scheme(s)
        violations += len(verify_axioms(s))
    return SuiteResult(
        "axioms", violations == 0, f"prefixes={len(prefixes)}, violations={violations}"
    )


def suite_canonical(cfg: VerifyConfig) -> SuiteResult:
    prefixes = _suite_prefixes(cfg)
    violations = 0
    for t in prefixes:
        violations += len(laws.check_canonical_laws(build_scheme(t)))
    return SuiteResult(
        "canonical", violations == 0, f"prefixes={len(prefixes)}, violations={violations}"
    )


def suite_oracle(cfg: VerifyConfig) -> SuiteResult:
    sample = [K2_PREFIX, K3_PREFIX, ((1, 2, 0), (2, 2, 0), (4, 2, 1), (7, 2, 0)), ((1, 3, 0), (3, 3, 1))]
    disagreements = 0
    pairs = 0
    for triples in sample:
        s = build_scheme(make_type_prefix(triples))
        o = SchemeOracle(s)
        from . import scheme as sch

        for a in range(s.domain_size):
            for b in range(s.domain_size):
                pairs += 1
                if sch.rho(s, a, b) != o.rho(a, b) or sch.delta(s, a, b) != o.delta(a, b):
                    disagreements += 1
            for k in range(s.K + 1):
                if sch.norm(s, a, k) != o.norm(a, k) or sch.xi(s, a, k) != o.xi(a, k):
                    disagreements += 1
    return SuiteResult(
        "oracle", disagreements == 0, f"pairs={pairs}, disagreements={disagreements}"
    )


def suite_capture(cfg: VerifyConfig) -> SuiteResult:
    s = build_scheme(make_type_prefix(K3_PREFIX))
    res = capture.find_captured_tuples(s, s.domain, 2, threads=cfg.threads)
    expect = {1: 4, 2: 2, 3: 3}
    counts: dict[int, int] = {}
    for cert in res.certificates:
        counts[cert.level] = counts.get(cert.level, 0) + 1
    ok = counts == expect and res.mode == "exhaustive"
    sampled = capture.find_captured_tuples(s, s.domain, 2, cap=5, seed=cfg.seed)
    ok = ok and sampled.mode == "sampled"
    return SuiteResult(
        "capture", ok, f"certificates={len(res.certificates)}, sampled_examined={sampled.examined}"
    )


def suite_gaps(cfg: VerifyConfig) -> SuiteResult:
    prefixes = _suite_binary_prefixes(cfg)
    violations = 0
    for t in prefixes:
        s = build_scheme(t)
        g = gaps.hausdorff_gap(s)
        if cfg.corrupt and t.triples == K2_PREFIX:
            g = gaps.corrupt_pregap(g)
        violations += len(gaps.check_interhausdorff(s, g))
        violations += len(gaps.check_hausdorff_condition(s, g))
        violations += len(gaps.check_levelwise_even_odd(s, g))
        for bits in range(1 << s.K if s.K <= 4 else 16):
            p0 = frozenset(k for k in range(1, s.K + 1) if bits & (1 << (k - 1)))
            p1 = frozenset(range(1, s.K + 1)) - p0
            gc = gaps.todorcevic_restrict(s, g, p0)
            violations += len(gaps.check_todorcevic_capture_laws(s, gc, p0, p1))
    return SuiteResult(
        "gaps", violations == 0, f"prefixes={len(prefixes)}, violations={violations}"
    )


def suite_posets(cfg: VerifyConfig) -> SuiteResult:
    s = build_scheme(make_type_prefix(K3_PREFIX))
    g = gaps.hausdorff_gap(s)
    diff = gaps.levelwise_diff(g, range(len(g.index)))
    problems = 0
    views = [
        posets.sep_view(diff),
        posets.chi0_view(diff),
        posets.chi1_view(diff),
        posets.biorth_view(diff),
        posets.dn_view(s, 2, {s.K}),
    ]
    for v in views:
        empty = {} if v.kind == posets.SEP else ()
        if not posets.is_condition(v, empty):
            problems += 1
    sep = views[0]
    filt = posets.greedy_filter(sep, posets.dense_meet_targets(sep, sep.universe), {})
    if not filt.ok:
        problems += 1
    else:
        sf = posets.extract_separating(sep, filt)
        if not gaps.validate_separating(diff, sf):
            problems += 1
    return SuiteResult("posets", problems == 0, f"views={len(views)}, problems={problems}")


SUITES = {
    "typeseq": suite_typeseq,
    "axioms": suite_axioms,
    "canonical": suite_canonical,
    "oracle": suite_oracle,
    "capture": suite_capture,
    "gaps": suite_gaps,
    "posets": suite_posets,
}


def run_suites(cfg: VerifyConfig, names=None) -> tuple[list[SuiteResult], bool]:
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    results = [SUITES[n](cfg) for n in names]
    return results, all(r.passed for r in results)
