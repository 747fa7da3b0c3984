"""Command-line front end.

Exit codes: 0 pass/found, 1 fail/absent, 2 usage or format error,
3 budget exhausted (unknown).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import constructions as cons
from . import linear_core as lc
from .certificates import WitnessCertificate, linear_certificate, lmp_certificate, verify_certificate
from .errors import (
    BudgetExceeded,
    CertificateFormatError,
    ConstructionUnavailable,
    InvalidCarrier,
    InvalidModulus,
    InvalidTower,
    MatchingToolkitError,
)
from .fields import make_tower, parse_tower_spec
from .group_core import encode_element, parse_group_spec
from .matching_core import Status, matching_property_upto
from .suites import MAX_P_CEILING, SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3

WITNESS_KINDS = ("qr", "cycle", "window", "pairing", "failure", "linear", "transcendental")
SEARCH_TARGETS = ("fails-at-order", "matching-property", "lmp-counterexample")


class UsageError(Exception):
    pass


def _err(msg: str):
    print(msg, file=sys.stderr)


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _tower(args):
    if args.tower:
        return parse_tower_spec(args.tower)
    _require(args, "p", "n")
    return make_tower(args.p, args.n)


def _window_elements(carrier, window):
    if carrier.is_finite:
        return None
    if window is None:
        raise UsageError(f"{carrier.spec} is infinite; pass --window W to search integers in [-W, W]")
    return [carrier.element(i) for i in range(-window, window + 1)]


# -- commands --------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.max_p > MAX_P_CEILING:
        raise UsageError(f"--max-p must not exceed {MAX_P_CEILING}")
    report = run_suite(args.suite, args.max_p, args.seed)
    for c in report.checks:
        print(f"[{c.status.upper():4}] {c.check_id} ({c.elapsed:.2f}s) {c.counters}", file=sys.stderr)
    print(f"overall: {report.overall}", file=sys.stderr)
    _write(report.to_json(timings=args.timings), args.out)
    return EXIT_OK if report.overall == "pass" else EXIT_FAIL


def _build_witness(args) -> WitnessCertificate:
    kind = args.kind
    if kind == "qr":
        _require(args, "p")
        return cons.qr_witness(args.p)
    if kind == "cycle":
        _require(args, "p", "k")
        return cons.cycle_witness(args.p, args.k)
    if kind == "pairing":
        _require(args, "p")
        return cons.pairing_witness(args.p, args.k)
    if kind == "window":
        _require(args, "variant")
        return cons.window_witness(args.variant, args.window or 40)
    if kind == "failure":
        _require(args, "group", "order")
        carrier = parse_group_spec(args.group)
        cert = cons.failure_witness(carrier, args.order, args.budget, _window_elements(carrier, args.window))
        if cert is None:
            raise ConstructionUnavailable(f"{carrier} has no failure witness at order {args.order}")
        return cert
    if kind == "linear":
        _require(args, "m")
        return linear_certificate(lc.linear_witness(_tower(args), args.m))
    if kind == "transcendental":
        _require(args, "m")
        return linear_certificate(lc.transcendental_witness(args.m))
    raise UsageError(f"unknown witness kind {kind!r}")


def cmd_witness(args) -> int:
    try:
        cert = _build_witness(args)
    except (InvalidCarrier, InvalidTower, InvalidModulus) as exc:
        raise UsageError(str(exc)) from exc
    except BudgetExceeded as exc:
        _err(f"budget exhausted: {exc}")
        return EXIT_UNKNOWN
    except MatchingToolkitError as exc:
        _err(f"{exc.code}: {exc}")
        return EXIT_FAIL
    ok, _ = verify_certificate(cert)
    if not ok:
        _err("certificate failed self-validation")
        return EXIT_FAIL
    _write(cert.to_json(), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    try:
        text = Path(args.cert).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.cert}: {exc}") from exc
    try:
        cert = WitnessCertificate.from_json(text)
    except CertificateFormatError as exc:
        _err(str(exc))
        return EXIT_USAGE
    ok, claims = verify_certificate(cert)
    for k, v in sorted(claims.items()):
        recorded = cert.claims.get(k)
        mark = "ok " if v == recorded else "MISMATCH"
        print(f"{mark} {k}: recomputed={v} recorded={recorded}")
    print("valid" if ok else "INVALID")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args) -> int:
    target = args.target
    try:
        if target == "fails-at-order":
            _require(args, "group", "order")
            carrier = parse_group_spec(args.group)
            elements = _window_elements(carrier, args.window)
            try:
                cert = cons.failure_witness(carrier, args.order, args.budget, elements)
            except BudgetExceeded as exc:
                _err(f"unknown: {exc}")
                return EXIT_UNKNOWN
            if cert is None:
                _err(f"{carrier}: no failure witness at order {args.order} (exhaustive)")
                return EXIT_FAIL
            _write(cert.to_json(), args.out)
            return EXIT_OK
        if target == "matching-property":
            _require(args, "group", "order")
            carrier = parse_group_spec(args.group)
            if not carrier.is_finite:
                raise UsageError("matching-property search needs a finite group")
            res = matching_property_upto(carrier, args.order)
            if res.passed:
                _err(f"{carrier}: every pair up to size {args.order} admits a matching")
                return EXIT_FAIL
            A, B = res.counterexample
            enc = lambda xs: "{" + ", ".join(encode_element(carrier, x) for x in xs) + "}"  # noqa: E731
            _write(f"counterexample A={enc(A)} B={enc(B)}\n", args.out)
            return EXIT_OK
        if target == "lmp-counterexample":
            tower = _tower(args)
            res = lc.lmp_counterexample_search(tower, args.budget)
            if res.status is Status.UNKNOWN:
                _err(f"unknown after {res.nodes} nodes")
                return EXIT_UNKNOWN
            if res.status is Status.ABSENT:
                _err(f"{tower}: no counterexample (exhaustive)")
                return EXIT_FAIL
            cert = lmp_certificate(tower, res.value)
            _write(cert.to_json(), args.out)
            return EXIT_OK
    except (InvalidCarrier, InvalidTower, InvalidModulus) as exc:
        raise UsageError(str(exc)) from exc
    raise UsageError(f"unknown search target {target!r}")


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acyclic-matching",
        description="Witnesses and exhaustive checks for acyclic matchings in groups and field extensions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite and write a report")
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--max-p", type=int, default=MAX_P_CEILING)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--timings", action="store_true", help="include wall-clock times in the report")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("witness", help="construct a witness certificate")
    w.add_argument("kind", choices=WITNESS_KINDS)
    for name in ("--p", "--k", "--m", "--n", "--order", "--window", "--budget", "--seed"):
        w.add_argument(name, type=int)
    w.add_argument("--group")
    w.add_argument("--tower")
    w.add_argument("--variant", choices=cons.WINDOW_VARIANTS)
    w.add_argument("--out")
    w.set_defaults(func=cmd_witness)

    c = sub.add_parser("check", help="re-validate a certificate file")
    c.add_argument("cert")
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("search", help="search for failure witnesses or counterexamples")
    s.add_argument("target", choices=SEARCH_TARGETS)
    for name in ("--p", "--n", "--order", "--window", "--budget", "--seed"):
        s.add_argument(name, type=int)
    s.add_argument("--group")
    s.add_argument("--tower")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"usage error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
