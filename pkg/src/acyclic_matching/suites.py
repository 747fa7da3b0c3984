"""Desk-scale verification suites run by ``acyclic-matching verify``.

Each check returns a :class:`CheckRecord`. Exhaustive checks are capped by
``max_p``; constructive checks always run at their full ranges. Seeds only
affect the sampled checks.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field

from . import constructions as cons
from . import linear_core as lc
from .certificates import verify_certificate
from .errors import BudgetExceeded, MatchingToolkitError
from .fields import make_tower, parse_tower_spec
from .group_core import INTEGERS, cyclic, is_prime, make_carrier
from .matching_core import (
    Status,
    enumerate_matchings,
    fails_at_order,
    find_acyclic_matching,
    is_acyclic,
    is_matching,
    make_matching,
    matching_property_upto,
    profile_class,
    profiles_equal,
)

MAX_P_CEILING = 13
REPORT_SCHEMA_VERSION = 1


@dataclass
class CheckRecord:
    check_id: str
    params: dict
    status: str
    counters: dict = field(default_factory=dict)
    elapsed: float = 0.0

    def to_dict(self, timings: bool = False) -> dict:
        d = asdict(self)
        if not timings:
            d.pop("elapsed")
        return d


@dataclass
class RunReport:
    suite: str
    seed: int
    max_p: int
    checks: list = field(default_factory=list)

    @property
    def overall(self) -> str:
        return "pass" if all(c.status == "pass" for c in self.checks) else "fail"

    def to_dict(self, timings: bool = False) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "max_p": self.max_p,
            "overall": self.overall,
            "checks": [c.to_dict(timings) for c in self.checks],
        }

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        rep = cls(d["suite"], d["seed"], d["max_p"])
        for c in d["checks"]:
            rep.checks.append(CheckRecord(c["check_id"], c["params"], c["status"], c.get("counters", {}), c.get("elapsed", 0.0)))
        return rep


def _timed(check_id, params, fn) -> CheckRecord:
    t0 = time.perf_counter()
    try:
        ok, counters = fn()
        status = "pass" if ok else "fail"
    except BudgetExceeded as exc:
        status, counters = "unknown", {"error": f"{exc.code}: {exc}"}
    except MatchingToolkitError as exc:
        status, counters = "fail", {"error": f"{exc.code}: {exc}"}
    return CheckRecord(check_id, params, status, counters, time.perf_counter() - t0)


def primes_between(lo: int, hi: int) -> list[int]:
    return [p for p in range(lo, hi + 1) if is_prime(p)]


# -- group checks ----------------------------------------------------------

def check_qr(primes) -> tuple[bool, dict]:
    bad = []
    for p in primes:
        cert = cons.qr_witness(p)
        ok, _ = verify_certificate(cert)
        if not (ok and len(cert.A) == (p - 1) // 2):
            bad.append(p)
    return not bad, {"primes": len(primes), "failed": bad}


def check_cycles(primes) -> tuple[bool, dict]:
    bad, n = [], 0
    for p in primes:
        for k in range(3, p - 2):
            n += 1
            cert = cons.cycle_witness(p, k)
            ok, _ = verify_certificate(cert)
            if not ok or len(cert.A) != k or cert.generator["fallback"]:
                bad.append([p, k])
    return not bad, {"witnesses": n, "failed": bad}


def check_involutions(primes) -> tuple[bool, dict]:
    total, bad = 0, []
    for p in primes:
        rep = cons.involution_check(p)
        total += rep.matchings_checked
        if not rep.passed or rep.subsets_checked != p - 1:
            bad.append(p)
    return not bad, {"matchings_checked": total, "failed": bad}


def check_unique(primes) -> tuple[bool, dict]:
    bad = [p for p in primes if not cons.unique_matching_check(p).passed]
    return not bad, {"primes": len(primes), "failed": bad}


FAILING_GROUPS = ([4], [6], [8], [9], [2, 2])
PASSING_PRIMES = (2, 3, 5, 7)


def check_matching_property(max_p) -> tuple[bool, dict]:
    bad = []
    n_fail = n_pass = 0
    for factors in FAILING_GROUPS:
        G = make_carrier("finite", factors)
        if G.size > max_p:
            continue
        n_fail += 1
        res = matching_property_upto(G, 3)
        if res.passed or len(res.counterexample[0]) > 3:
            bad.append(G.spec)
    for p in PASSING_PRIMES:
        if p > max_p:
            continue
        n_pass += 1
        G = cyclic(p)
        if not matching_property_upto(G, p).passed:
            bad.append(G.spec)
    return not bad, {"counterexample_groups": n_fail, "passing_groups": n_pass, "failed": bad}


def check_exclusion() -> tuple[bool, dict]:
    bad = []
    for p in (2, 3, 5):
        for m in range(1, p + 1):
            if fails_at_order(cyclic(p), m).status is not Status.ABSENT:
                bad.append([p, m])
    for m in (3, 4):
        if not fails_at_order(cyclic(7), m).found:
            bad.append([7, m])
    return not bad, {"failed": bad}


def random_integer_pairs(seed: int, count: int = 200, lo: int = -50, hi: int = 50, max_size: int = 6):
    rng = random.Random(seed)
    universe = list(range(lo, hi + 1))
    nonzero = [x for x in universe if x != 0]
    for _ in range(count):
        s = rng.randint(1, max_size)
        yield sorted(rng.sample(universe, s)), sorted(rng.sample(nonzero, s))


def check_acyclic_integers(seed: int) -> tuple[bool, dict]:
    bad = 0
    n = 0
    for A, B in random_integer_pairs(seed):
        n += 1
        res = find_acyclic_matching(INTEGERS, A, B)
        if not res.found or is_acyclic(res.value) is not True:
            bad += 1
    return bad == 0, {"pairs": n, "failed": bad}


def check_windows(window: int = 200) -> tuple[bool, dict]:
    counters = {}
    ok = True
    for variant in cons.WINDOW_VARIANTS:
        rep = cons.check_window(variant, window)
        counters[variant] = {"interior": len(rep.interior), "violations": len(rep.violations) + len(rep.matching_violations)}
        cert = cons.window_witness(variant, window)
        ok = ok and rep.passed and verify_certificate(cert)[0]
    return ok, counters


def random_matching(rng: random.Random, carrier, A, B):
    """Uniform pick among all matchings ``A -> B`` (None if there are none)."""
    all_maps = list(enumerate_matchings(carrier, A, B))
    return rng.choice(all_maps) if all_maps else None


def pairing_round_trips(seed: int, count: int = 500, primes=(11, 13)):
    """Yield ``(f, g)`` with ``g`` drawn from ``f``'s profile class."""
    rng = random.Random(seed)
    made = 0
    while made < count:
        p = primes[made % len(primes)]
        G = cyclic(p)
        s = rng.randint(2, 6)
        A = sorted(rng.sample(range(p), s))
        B = A if rng.random() < 0.5 else sorted(rng.sample(range(p), s))
        f = random_matching(rng, G, A, B)
        if f is None:
            continue
        g = rng.choice(profile_class(f))
        made += 1
        yield f, g


def converse_triples(seed: int, count: int = 500, primes=(11, 13)):
    """Random ``(f, phi)``; ``g`` solved from the pairing identity when it is a matching."""
    rng = random.Random(seed + 1)
    tried = 0
    while tried < count:
        p = primes[tried % len(primes)]
        G = cyclic(p)
        s = rng.randint(2, 6)
        A = sorted(rng.sample(range(p), s))
        B = A if rng.random() < 0.5 else sorted(rng.sample(range(p), s))
        f = random_matching(rng, G, A, B)
        if f is None:
            continue
        tried += 1
        image = list(A)
        rng.shuffle(image)
        phi = dict(zip(A, image))
        gmap = {phi[a]: (a + f(a) - phi[a]) % p for a in A}
        if is_matching(G, A, B, gmap).ok:
            yield f, make_matching(G, A, B, gmap), phi


def check_pairings(seed: int) -> tuple[bool, dict]:
    forward_bad = 0
    n = 0
    for f, g in pairing_round_trips(seed):
        n += 1
        phi = cons.build_pairing(f, g)
        if phi is None or not cons.verify_pairing(f, g, phi):
            forward_bad += 1
    conv = conv_bad = 0
    for f, g, phi in converse_triples(seed):
        conv += 1
        if not (cons.verify_pairing(f, g, phi) and profiles_equal(f, g)):
            conv_bad += 1
    return forward_bad == 0 and conv_bad == 0, {
        "round_trips": n,
        "round_trip_failures": forward_bad,
        "converse_triples": conv,
        "converse_failures": conv_bad,
    }


# -- linear checks ---------------------------------------------------------

def check_strong_criterion(seed: int, towers=("gf:2^3", "gf:3^2")) -> tuple[bool, dict]:
    rng = random.Random(seed)
    pairs = disagree = sample_fail = 0
    for spec in towers:
        t = parse_tower_spec(spec)
        gl = {k: [M for M, _ in lc._gl_with_inverses(t.base, k)] for k in (1, 2)}
        for k in (1, 2):
            subs = list(lc.enumerate_subspaces(t, k))
            for A in subs:
                for B in subs:
                    pairs += 1
                    crit = lc.strong_matching_exists(A, B)
                    oracle = any(lc.is_strong_matching(lc.LinearMap(A, B, M), "exhaustive") for M in gl[k])
                    if crit != oracle:
                        disagree += 1
                    if crit:
                        for _ in range(20):
                            M = rng.choice(gl[k])
                            if not lc.is_strong_matching(lc.LinearMap(A, B, M), "exhaustive"):
                                sample_fail += 1
    return disagree == 0 and sample_fail == 0, {"pairs": pairs, "disagreements": disagree, "sample_failures": sample_fail}


LINEAR_CASES = ((5, 3, 1), (7, 3, 1), (5, 7, 1), (5, 7, 2))


def check_linear_witnesses() -> tuple[bool, dict]:
    bad = []
    for p, n, m in LINEAR_CASES:
        w = lc.linear_witness(make_tower(p, n), m)
        if not (w.valid and w.claims.get("equivalent_pointwise") is True):
            bad.append([p, n, m])
    return not bad, {"cases": len(LINEAR_CASES), "failed": bad}


def check_transcendental() -> tuple[bool, dict]:
    bad = [m for m in (1, 2, 3) if not lc.transcendental_witness(m).valid]
    return not bad, {"failed": bad}


def check_lmp(budget: int = 2_000_000) -> tuple[bool, dict]:
    out = {}
    ok = True
    for spec in ("gf:2^4", "gf:3^4"):
        t = parse_tower_spec(spec)
        res = lc.lmp_counterexample_search(t, budget)
        valid = False
        if res.found:
            from .certificates import lmp_certificate

            valid = verify_certificate(lmp_certificate(t, res.value))[0]
        out[spec] = {"status": res.status.value, "nodes": res.nodes, "validated": valid}
        ok = ok and valid
    return ok, out


# -- suites ----------------------------------------------------------------

SUITES = ("group", "linear", "all")


def run_suite(suite: str, max_p: int = MAX_P_CEILING, seed: int = 0) -> RunReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    if max_p > MAX_P_CEILING or max_p < 2:
        raise ValueError(f"max_p must lie in [2, {MAX_P_CEILING}]")
    report = RunReport(suite, seed, max_p)
    add = report.checks.append
    if suite in ("group", "all"):
        qr_primes = primes_between(7, 101)
        add(_timed("qr-witness", {"primes": [7, 101]}, lambda: check_qr(qr_primes)))
        add(_timed("cycle-witness", {"primes": [7, 11, 13, 17]}, lambda: check_cycles([7, 11, 13, 17])))
        inv = [p for p in (5, 7, 11) if p <= max_p]
        add(_timed("involution", {"primes": inv}, lambda: check_involutions(inv)))
        uniq = [p for p in (3, 5, 7, 11, 13) if p <= max_p]
        add(_timed("unique-matching", {"primes": uniq}, lambda: check_unique(uniq)))
        add(_timed("matching-property", {"max_order": max_p}, lambda: check_matching_property(max_p)))
        add(_timed("small-prime-exclusion", {"groups": ["z:2", "z:3", "z:5", "z:7"]}, check_exclusion))
        add(_timed("acyclic-integers", {"pairs": 200, "seed": seed}, lambda: check_acyclic_integers(seed)))
        add(_timed("window", {"window": 200}, lambda: check_windows(200)))
        add(_timed("pairing", {"pairs": 500, "seed": seed}, lambda: check_pairings(seed)))
    if suite in ("linear", "all"):
        add(_timed("strong-criterion", {"towers": ["gf:2^3", "gf:3^2"], "seed": seed}, lambda: check_strong_criterion(seed)))
        add(_timed("linear-witness", {"cases": [list(c) for c in LINEAR_CASES]}, check_linear_witnesses))
        add(_timed("transcendental", {"m": [1, 2, 3]}, check_transcendental))
        add(_timed("lmp-counterexample", {"towers": ["gf:2^4", "gf:3^4"]}, check_lmp))
    return report
