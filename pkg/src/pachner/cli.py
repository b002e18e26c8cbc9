"""pachner: verify the 3-3 relation, run the self-test, probe divisor orders.

Exit codes: 0 pass, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import divisor_lab as dl
from .cochain import (
    DEFAULT_DELTA,
    CocycleFormatError,
    DegenerateCocycleError,
    load_cocycle,
    random_generic_cocycle,
)
from .verifier import CHECKS, MUTATIONS, TOL_RATIO, run_probe, selftest, verify_relation

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_seeds(spec: str) -> list[int]:
    """'1..100', '3', or '1,4,9' (ranges may be mixed: '1..3,10')."""
    seeds: list[int] = []
    for part in spec.split(","):
        part = part.strip()
        m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", part)
        if m:
            lo, hi = int(m[1]), int(m[2])
            if hi < lo:
                raise UsageError(f"empty seed range {part!r}")
            seeds.extend(range(lo, hi + 1))
        elif re.fullmatch(r"-?\d+", part):
            seeds.append(int(part))
        else:
            raise UsageError(f"bad seed spec {part!r}")
    if not seeds:
        raise UsageError("seed list is empty")
    return seeds


def positive_float(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not val > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return val


def workers() -> int:
    raw = os.environ.get("PACHNER_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"PACHNER_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _verify_seed(args: tuple) -> dict:
    seed, delta, tol, mutations = args
    try:
        c = random_generic_cocycle(seed, delta=delta)
    except DegenerateCocycleError as exc:
        return {"seed": seed, "passed": False, "error": str(exc)}
    return verify_relation(c.q, tol_ratio=tol, mutations=mutations, seed=seed).to_json()


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from None


def cmd_verify(ns) -> int:
    mutations = tuple(ns.break_sign or ())
    if ns.cocycle:
        try:
            c = load_cocycle(ns.cocycle)
        except (OSError, CocycleFormatError) as exc:
            raise UsageError(str(exc)) from None
        reports = [verify_relation(c.q, tol_ratio=ns.tol, mutations=mutations, seed=c.seed).to_json()]
    else:
        seeds = parse_seeds(ns.seeds) if ns.seeds else [ns.seed]
        jobs = [(s, ns.delta, ns.tol, mutations) for s in seeds]
        n = workers()
        if n > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=n) as pool:
                reports = list(pool.map(_verify_seed, jobs))  # map keeps seed order
        else:
            reports = [_verify_seed(j) for j in jobs]
    ok = all(r["passed"] for r in reports)
    if ns.json or ns.out:
        text = json.dumps(reports if len(reports) > 1 or not ns.cocycle else reports[0], indent=2) + "\n"
        _emit(text, ns.out)
    if not ns.json:
        for r in reports:
            if "error" in r:
                print(f"seed {r['seed']}: FAIL {r['error']}")
                continue
            print(f"seed {r['seed']}: {'PASS' if r['passed'] else 'FAIL'} "
                  f"spread={r['ratio_spread']:.2e} coeff_sq={r['coeff_sq_residual']:.2e} "
                  f"eps={r['epsilon_sign']:+d}")
        print(f"{sum(r['passed'] for r in reports)}/{len(reports)} passed")
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_selftest(ns) -> int:
    only = None
    if ns.only:
        only = [n for item in ns.only for n in item.split(",") if n]
        unknown = [n for n in only if n not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s) {unknown}; choose from {list(CHECKS)}")
    results = selftest(seed=ns.seed, only=only, mutations=ns.break_sign or ())
    ok = all(r.passed for r in results)
    if ns.json or ns.out:
        payload = {"seed": ns.seed, "passed": ok,
                   "checks": [{"name": r.name, "passed": r.passed, "value": r.value,
                               "detail": r.detail} for r in results]}
        _emit(json.dumps(payload, indent=2) + "\n", ns.out)
    if not ns.json:
        for r in results:
            line = f"{'PASS' if r.passed else 'FAIL'} {r.name:<20} {r.value:.3e}"
            print(line + (f"  {r.detail}" if r.detail else ""))
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_probe(ns) -> int:
    target = ns.target
    if "@" not in target:
        raise UsageError(f"target must look like FUNC@LOCUS, got {target!r}")
    try:
        dl.parse_locus(target.split("@", 1)[1])
        rng = np.random.default_rng(ns.seed)
        res, expected = run_probe(target, rng)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(res.to_csv(), ns.out)
    ok = res.conclusive and res.order == expected
    print(f"# {target}: order {res.order:+d} (slope {res.slope:.4f}, residual {res.residual:.3g}); "
          f"predicted {expected:+d} -> {'PASS' if ok else 'FAIL'}")
    return EXIT_PASS if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pachner", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed_default):
        sp.add_argument("--seed", type=int, default=seed_default)
        sp.add_argument("--out", metavar="PATH")
        sp.add_argument("--json", action="store_true", help="machine-readable output on stdout")

    v = sub.add_parser("verify", help="check both sides of the 3-3 relation")
    common(v, 1)
    v.add_argument("--seeds", help="e.g. 1..100 or 1,2,5")
    v.add_argument("--tol", type=positive_float, default=TOL_RATIO, help="ratio spread tolerance")
    v.add_argument("--delta", type=positive_float, default=DEFAULT_DELTA, help="genericity margin")
    v.add_argument("--cocycle", metavar="PATH", help="JSON cocycle file")
    v.add_argument("--break-sign", action="append", choices=MUTATIONS, help="mutation hook")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="run the identity checks")
    common(s, 42)
    s.add_argument("--only", action="append", metavar="NAME")
    s.add_argument("--break-sign", action="append", choices=MUTATIONS, help="mutation hook")
    s.set_defaults(func=cmd_selftest)

    pr = sub.add_parser("probe", help="estimate a vanishing order near a divisor")
    common(pr, 0)
    pr.add_argument("--target", required=True, help="FUNC@LOCUS, e.g. phi@Du, F12@Dt+2345")
    pr.set_defaults(func=cmd_probe)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return ns.func(ns)
    except UsageError as exc:
        print(f"pachner: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
