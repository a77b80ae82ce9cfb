"""Batch front-end: build schemes, query functions, search captures,
emit gap tables, drive poset experiments and run verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage or validation
error.  Output is byte-identical for identical arguments and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import capture, gaps, posets, scheme as sch, verify
from .errors import SchemeLabError
from .finset import FinSet
from .scheme import TOP, Scheme, build_scheme
from .typeseq import make_type_prefix


@dataclass(frozen=True)
class RunConfig:
    type_triples: tuple | None
    fmt: str
    cap: int
    seed: int
    threads: int
    out: str | None
    dump: bool


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--type", help="type prefix as JSON [[m,n,r],...]")
    p.add_argument("--type-file", help="file containing the JSON type prefix")
    p.add_argument("--format", default="text", choices=["json", "csv", "text"])
    p.add_argument("--cap", type=int, default=10**6, help="exhaustive-search cap")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("SCHEMELAB_THREADS", "1")),
    )
    p.add_argument("--dump", action="store_true", help="emit the full JSON dump")
    p.add_argument("--out", help="write output to FILE instead of stdout")


def _config(args) -> RunConfig:
    triples = None
    if args.type and args.type_file:
        raise SchemeLabError("give --type or --type-file, not both")
    if args.type:
        triples = tuple(tuple(t) for t in json.loads(args.type))
    elif args.type_file:
        with open(args.type_file) as fh:
            triples = tuple(tuple(t) for t in json.load(fh))
    if args.threads < 1:
        raise SchemeLabError("--threads must be at least 1")
    return RunConfig(
        type_triples=triples,
        fmt=args.format,
        cap=args.cap,
        seed=args.seed,
        threads=args.threads,
        out=args.out,
        dump=args.dump,
    )


def _scheme(cfg: RunConfig) -> Scheme:
    if cfg.type_triples is None:
        raise SchemeLabError("this command needs --type or --type-file")
    return build_scheme(make_type_prefix(cfg.type_triples))


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_ordinals(raw: str) -> FinSet:
    return FinSet(int(x) for x in raw.replace(",", " ").split())


def cmd_build(cfg: RunConfig) -> int:
    s = _scheme(cfg)
    if cfg.dump:
        _emit(cfg, sch.scheme_to_json(s) + "\n")
        return 0
    counts = "/".join(str(len(s.levels[k])) for k in range(s.K, -1, -1))
    _emit(cfg, f"type: K={s.K}, m={list(s.type.m)}; levels: {counts} members\n")
    return 0


def cmd_query(cfg: RunConfig, fn: str, args: list[int]) -> int:
    s = _scheme(cfg)
    if fn == "rho":
        val = sch.rho(s, args[0], args[1])
    elif fn == "delta":
        d = sch.delta(s, args[0], args[1])
        val = "TOP" if d == TOP else int(d)
    elif fn == "xi":
        val = sch.xi(s, args[0], args[1])
    elif fn == "norm":
        val = sch.norm(s, args[0], args[1])
    elif fn == "closure":
        val = " ".join(str(x) for x in sch.closure(s, args[0], args[1]))
    elif fn == "bracket":
        val = capture.sq_bracket(s, args[0], args[1])
    else:
        raise SchemeLabError(f"unknown query function {fn}")
    _emit(cfg, f"{val}\n")
    return 0


def cmd_capture(cfg: RunConfig, raw_set: str | None, n: int, levels: str | None) -> int:
    s = _scheme(cfg)
    S = _parse_ordinals(raw_set) if raw_set else s.domain
    lv = set(_parse_ordinals(levels)) if levels else None
    res = capture.find_captured_tuples(
        s, S, n, levels=lv, cap=cfg.cap, seed=cfg.seed, threads=cfg.threads
    )
    if cfg.fmt == "json":
        _emit(cfg, json.dumps({
            "mode": res.mode,
            "seed": res.seed,
            "certificates": [c.to_json() for c in res.certificates],
        }) + "\n")
        return 0
    lines = []
    if res.sampled:
        lines.append(f"SAMPLED(seed={res.seed}) examined {res.examined} of {res.total_candidates}")
    lines.append("level,tuple,bracket")
    for c in res.certificates:
        flat = FinSet(x for m in c.members for x in m)
        bracket = ""
        if len(c.members) >= 2 and len(c.members[0]) == 1:
            bracket = str(capture.sq_bracket(s, c.members[0][0], c.members[1][0]))
        lines.append(f"{c.level},{' '.join(str(x) for x in flat)},{bracket}")
    _emit(cfg, "\n".join(lines) + "\n")
    return 0


def cmd_gap(cfg: RunConfig, variant: str, p0: str | None) -> int:
    s = _scheme(cfg)
    g = gaps.hausdorff_gap(s)
    if variant == "todorcevic":
        levels = set(_parse_ordinals(p0)) if p0 else set()
        g = gaps.todorcevic_restrict(s, g, levels)
    _emit(cfg, gaps.gap_table_csv(g))
    return 0


def _poset_view(cfg: RunConfig, s: Scheme, kind: str, n: int, a_levels: str | None):
    kind = kind.upper()
    if kind == posets.DN:
        A = set(_parse_ordinals(a_levels)) if a_levels else {s.K}
        return posets.dn_view(s, n, A)
    g = gaps.hausdorff_gap(s)
    diff = gaps.levelwise_diff(g, range(len(g.index)))
    maker = {
        posets.SEP: posets.sep_view,
        posets.CHI0: posets.chi0_view,
        posets.CHI1: posets.chi1_view,
        posets.BIORTH: posets.biorth_view,
    }[kind]
    return maker(diff)


def cmd_poset(cfg: RunConfig, kind: str, action: str, condition: str | None,
              n: int, a_levels: str | None, max_size: int | None, budget: int) -> int:
    s = _scheme(cfg)
    v = _poset_view(cfg, s, kind, n, a_levels)
    if action == "check":
        raw = json.loads(condition) if condition else ([] if v.kind != posets.SEP else {})
        if v.kind == posets.SEP and isinstance(raw, dict):
            raw = {int(k): int(val) for k, val in raw.items()}
        ok = posets.is_condition(v, raw)
        _emit(cfg, json.dumps({"condition": posets.condition_to_json(v, raw), "valid": ok}) + "\n")
        return 0
    if action == "filter":
        if v.kind != posets.SEP:
            raise SchemeLabError("filter extraction is a SEP action")
        targets = posets.dense_meet_targets(v, v.universe)
        filt = posets.greedy_filter(v, targets, {})
        if not filt.ok:
            _emit(cfg, json.dumps({"ok": False, "failed_at": filt.failed.beta}) + "\n")
            return 1
        sf = posets.extract_separating(v, filt)
        payload = {
            "ok": True,
            "separating": {str(a): sf.threshold(gaps.LEFT, a) for a in v.universe},
            "conditions": [posets.condition_to_json(v, c) for c in filt.conditions],
        }
        _emit(cfg, json.dumps(payload) + "\n")
        return 0
    if action == "antichain":
        res = posets.exhaustive_antichain(v, max_size=max_size, budget=budget)
        payload = {
            "antichain": [posets.condition_to_json(v, c) for c in res.members],
            "exact": res.exact,
            "budget_exceeded": res.budget_exceeded,
            "examined": res.examined,
        }
        _emit(cfg, json.dumps(payload) + "\n")
        return 0
    raise SchemeLabError(f"unknown poset action {action}")


def cmd_verify(cfg: RunConfig, suites: list[str] | None, grid: str, corrupt: bool) -> int:
    vcfg = verify.VerifyConfig(grid=grid, seed=cfg.seed, threads=cfg.threads, corrupt=corrupt)
    try:
        results, ok = verify.run_suites(vcfg, suites)
    except KeyError as exc:
        raise SchemeLabError(str(exc)) from exc
    text = "\n".join(r.line() for r in results) + "\n"
    _emit(cfg, text)
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="schemelab",
        description="finite construction-scheme laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a scheme and summarize it")
    _add_common(p)

    p = sub.add_parser("query", help="evaluate a canonical function")
    _add_common(p)
    p.add_argument("fn", choices=["rho", "delta", "xi", "norm", "closure", "bracket"])
    p.add_argument("args", type=int, nargs=2)

    p = sub.add_parser("capture", help="search for captured tuples")
    _add_common(p)
    p.add_argument("--set", dest="raw_set", help="ordinals, e.g. '0 1 2 3'")
    p.add_argument("-n", type=int, default=2)
    p.add_argument("--levels", help="capture levels to search")

    p = sub.add_parser("gap", help="emit a gap table as CSV")
    _add_common(p)
    p.add_argument("variant", choices=["hausdorff", "todorcevic"])
    p.add_argument("--p0", help="levels forming P0 (todorcevic)")

    p = sub.add_parser("poset", help="poset experiments")
    _add_common(p)
    p.add_argument("kind", choices=["sep", "chi0", "chi1", "dn", "biorth"])
    p.add_argument("action", choices=["check", "filter", "antichain"])
    p.add_argument("--condition", help="condition as JSON")
    p.add_argument("-n", type=int, default=2, help="tuple size for DN")
    p.add_argument("--a-levels", help="level set A for DN")
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--budget", type=int, default=5000)

    p = sub.add_parser("verify", help="run verification suites")
    _add_common(p)
    p.add_argument("--suites", nargs="*", default=None)
    p.add_argument("--grid", default="smoke", choices=["smoke", "full"])
    p.add_argument(
        "--corrupt",
        action="store_true",
        help="inject corrupted fixtures (axioms and gaps suites must then fail)",
    )

    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "query":
            return cmd_query(cfg, args.fn, args.args)
        if args.command == "capture":
            return cmd_capture(cfg, args.raw_set, args.n, args.levels)
        if args.command == "gap":
            return cmd_gap(cfg, args.variant, args.p0)
        if args.command == "poset":
            return cmd_poset(cfg, args.kind, args.action, args.condition,
                             args.n, args.a_levels, args.max_size, args.budget)
        if args.command == "verify":
            return cmd_verify(cfg, args.suites, args.grid, args.corrupt)
        raise SchemeLabError(f"unknown command {args.command}")
    except SchemeLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
