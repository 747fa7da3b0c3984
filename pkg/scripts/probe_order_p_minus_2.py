"""Does Z_p fail at order p - 2 when the two sets differ?

For A = B every matching at this size is an involution and the property
holds. This scans all pairs A != B of (p-2)-subsets and reports any pair
carrying two distinct matchings with the same multiplicity profile.
"""

from __future__ import annotations

import argparse
import json
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from itertools import combinations

from acyclic_matching.group_core import cyclic, encode_element, is_prime
from acyclic_matching.matching_core import enumerate_matchings, profile


@dataclass
class ProbeConfig:
    primes: list[int] = field(default_factory=lambda: [5, 7, 11])
    include_equal: bool = False
    stop_at_first: bool = True


@dataclass
class ProbeResult:
    p: int
    pairs_scanned: int
    witness: dict | None
    seconds: float


def probe(p: int, cfg: ProbeConfig) -> ProbeResult:
    G = cyclic(p)
    subsets = list(combinations(range(p), p - 2))
    t0 = time.perf_counter()
    scanned = 0
    for A in subsets:
        for B in subsets:
            if A == B and not cfg.include_equal:
                continue
            scanned += 1
            classes = defaultdict(list)
            for f in enumerate_matchings(G, A, B, bound=p):
                classes[profile(f).key()].append(f)
            for fs in classes.values():
                if len(fs) > 1:
                    f, g = fs[0], fs[1]
                    w = {
                        "A": [encode_element(G, a) for a in A],
                        "B": [encode_element(G, b) for b in B],
                        "f": {str(a): f(a) for a in A},
                        "g": {str(a): g(a) for a in A},
                    }
                    if cfg.stop_at_first:
                        return ProbeResult(p, scanned, w, time.perf_counter() - t0)
    return ProbeResult(p, scanned, None, time.perf_counter() - t0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[5, 7, 11])
    ap.add_argument("--include-equal", action="store_true")
    args = ap.parse_args(argv)
    cfg = ProbeConfig(primes=args.primes, include_equal=args.include_equal)
    for p in cfg.primes:
        if not is_prime(p) or p < 5:
            ap.error(f"{p} is not a prime >= 5")
        res = probe(p, cfg)
        verdict = "fails" if res.witness else "no failure found"
        print(f"Z_{p}, order {p - 2}: {verdict} ({res.pairs_scanned} pairs, {res.seconds:.2f}s)")
        if res.witness:
            print(json.dumps(asdict(res)["witness"]))


if __name__ == "__main__":
    main()
