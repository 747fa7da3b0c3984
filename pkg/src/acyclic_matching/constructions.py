"""Explicit witnesses: distinct matchings with equal multiplicity profiles.

Every generator validates its output with the oracles in
:mod:`acyclic_matching.matching_core` before returning a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .certificates import WitnessCertificate, group_claims
from .errors import (
    Budget,
    BudgetExceeded,
    ConstructionUnavailable,
    InvalidArgument,
    InvalidOrder,
    InvalidPair,
    InvalidWindow,
)
from .group_core import DYADICS, INTEGERS, RATIONALS, cyclic, is_prime, legendre, quadratic_residues
from .matching_core import (
    Matching,
    _backtrack,
    _unchecked,
    fails_at_order,
    invert,
    is_involution,
    is_matching,
    make_matching,
    orbits,
    profile,
    restrict,
)


def _require_prime_above_5(p: int):
    if not is_prime(p) or p <= 5:
        raise ConstructionUnavailable(f"p = {p} must be a prime greater than 5")


def _failure_certificate(kind, f, g, generator, extra_claims=None) -> WitnessCertificate:
    phi = build_pairing(f, g)
    claims = group_claims(f.carrier, f.domain, f.codomain, f.pairs, g.pairs, phi)
    if extra_claims:
        claims.update(extra_claims)
    cert = WitnessCertificate(
        kind=kind,
        carrier=f.carrier,
        A=f.domain,
        B=f.codomain,
        f=f.pairs,
        g=g.pairs,
        phi=tuple(sorted(phi.items())) if phi is not None else None,
        claims=claims,
        generator=generator,
    )
    if not cert.all_claims_hold():
        raise ConstructionUnavailable(f"{kind} witness failed self-validation: {claims}")
    return cert


# -- quadratic residues ----------------------------------------------------

def qr_multipliers(p: int) -> tuple[int, int]:
    """Smallest ``a < b`` that are residues with ``a + 1`` and ``b + 1`` non-residues."""
    good = [a for a in range(1, p) if legendre(a, p) == 1 and legendre(a + 1, p) == -1]
    if len(good) < 2:
        raise ConstructionUnavailable(f"no residue pair for p = {p}")
    return good[0], good[1]


def qr_witness(p: int) -> WitnessCertificate:
    """Multiplications by two residues on the nonzero squares of Z_p."""
    _require_prime_above_5(p)
    a, b = qr_multipliers(p)
    Zp = cyclic(p)
    A = quadratic_residues(p)
    f = make_matching(Zp, A, A, {s: a * s % p for s in A})
    g = make_matching(Zp, A, A, {s: b * s % p for s in A})
    return _failure_certificate("qr", f, g, {"p": p, "a": a, "b": b})


# -- cycle products --------------------------------------------------------

def _perm_from_cycles(cycles) -> dict:
    out = {}
    for cyc in cycles:
        for i, x in enumerate(cyc):
            out[x] = cyc[(i + 1) % len(cyc)]
    return out


def cycle_family(p: int, k: int) -> tuple[list[tuple], list[tuple], set]:
    """Cycles of the full family permutation, the transpositions to drop, and the excluded sums.

    Even ``k`` comes from the order ``p - 3`` family, odd ``k >= 5`` from the
    order ``p - 4`` family, ``k = 3`` from ``(1 2 4)``. Surplus
    transpositions ``(j, p - j)`` are dropped in increasing ``j``.
    """
    if k == 3:
        return [(1, 2, 4)], [], {3, 5, 6}
    half = (p - 1) // 2
    if k % 2 == 0:
        base = (3, p - 3, 2, p - 2)
        swaps = [(j, p - j) for j in range(4, half + 1)]
        excluded = {0, 1, p - 1}
    else:
        base = (3, p - 3, 2, p - 2, 1)
        swaps = [(j, p - j) for j in range(5, half + 1)]
        excluded = {0, 4, p - 4, p - 1}
    drop = (len(base) + 2 * len(swaps) - k) // 2
    if drop < 0 or drop > len(swaps):
        raise InvalidOrder(f"k = {k} is not reachable by the cycle family for p = {p}")
    return swaps + [base], swaps[:drop], excluded


def cycle_witness(p: int, k: int) -> WitnessCertificate:
    """Permutation witness at order ``k`` paired with its inverse."""
    _require_prime_above_5(p)
    if not 2 < k < p - 2:
        raise InvalidOrder(f"need 2 < k < p - 2, got k = {k}, p = {p}")
    Zp = cyclic(p)
    cycles, dropped, excluded = cycle_family(p, k)
    perm = _perm_from_cycles(cycles)
    support = [x for cyc in cycles for x in cyc]
    f = None
    if len(set(support)) == len(support) and not set(support) & excluded:
        if is_matching(Zp, support, support, perm).ok:
            f = make_matching(Zp, support, support, perm)
            if dropped:
                f = restrict(f, [x for sw in dropped for x in sw])
    fallback = f is None or f.size != k
    if fallback:
        # closed form degenerated; search instead
        res = fails_at_order(Zp, k)
        if not res.found:
            raise ConstructionUnavailable(f"no order-{k} witness in Z_{p}")
        f, g = res.value.f, res.value.g
    else:
        g = invert(f)
        if not all(s in excluded for s in f.sums().values()) or orbits(f).max_length() <= 2:
            raise ConstructionUnavailable("cycle witness escaped its excluded sums")
    kept = [list(c) for c in cycles if c not in dropped]
    return _failure_certificate(
        "cycle", f, g, {"p": p, "k": k, "cycles": kept, "fallback": fallback}
    )


# -- exhaustive checks on Z_p ----------------------------------------------

@dataclass
class ExhaustiveReport:
    p: int
    passed: bool
    subsets_checked: int = 0
    matchings_checked: int = 0
    counterexample: Matching | None = None


def involution_check(p: int, budget=None) -> ExhaustiveReport:
    """Every matching ``f: A -> A`` with ``A`` in Z_p \\ {0}, ``|A| = p - 2``, is an involution."""
    if not is_prime(p) or p < 5:
        raise InvalidArgument(f"p = {p} must be a prime >= 5")
    budget = Budget.coerce(budget)
    Zp = cyclic(p)
    report = ExhaustiveReport(p, True)
    for missing in range(1, p):
        A = [x for x in range(1, p) if x != missing]
        report.subsets_checked += 1
        for fmap in _backtrack(Zp, A, A, budget):
            report.matchings_checked += 1
            f = _unchecked(Zp, A, A, fmap)
            if not is_involution(f):
                report.passed = False
                report.counterexample = f
                return report
    return report


def unique_matching_check(p: int, budget=None) -> ExhaustiveReport:
    """Z_p \\ {0} carries exactly one matching onto itself, namely ``a -> -a``."""
    if not is_prime(p) or p < 3:
        raise InvalidArgument(f"p = {p} must be an odd prime")
    budget = Budget.coerce(budget)
    Zp = cyclic(p)
    A = list(range(1, p))
    found = [_unchecked(Zp, A, A, fmap) for fmap in _backtrack(Zp, A, A, budget)]
    negation = {a: -a % p for a in A}
    passed = len(found) == 1 and found[0].mapping == negation
    return ExhaustiveReport(
        p,
        passed,
        subsets_checked=1,
        matchings_checked=len(found),
        counterexample=None if passed else (found[0] if found else None),
    )


# -- torsion-free windows --------------------------------------------------

WINDOW_VARIANTS = ("dyadic", "integer", "rational")


@dataclass(frozen=True)
class WindowModel:
    """Closed-form maps on a torsion-free carrier.

    ``in_domain`` is membership in the full (infinite) domain subgroup, used
    for the matching condition; the window only limits which points are
    listed.
    """

    variant: str
    carrier: object
    f_shift: object
    g_shift: object
    phi_shift: object
    step: object

    def in_domain(self, x) -> bool:
        q = Fraction(x) / self.step
        if self.carrier is DYADICS:
            d = q.denominator
            return d & (d - 1) == 0
        return q.denominator == 1


def window_model(variant: str) -> WindowModel:
    if variant == "integer":
        # G = Z, x = 1: 2G -> 2G + x, f = +x, g = -3x, phi = +2x
        return WindowModel(variant, INTEGERS, 1, -3, 2, 2)
    if variant == "rational":
        # even integers inside Q: f = +1, g = +5, phi = -2
        return WindowModel(variant, RATIONALS, Fraction(1), Fraction(5), Fraction(-2), Fraction(2))
    if variant == "dyadic":
        # G = Z[1/2], n = 3, x = 1: 6G -> 6G + 1, f = +1, g = +7, phi = -3
        return WindowModel(variant, DYADICS, Fraction(1), Fraction(7), Fraction(-3), Fraction(6))
    raise InvalidArgument(f"unknown window variant {variant!r}; expected one of {WINDOW_VARIANTS}")


# dyadic domain points are listed on the grid 6 * (1/2^DYADIC_DEPTH) Z
DYADIC_DEPTH = 2


def window_domain(model: WindowModel, window: int) -> list:
    grid = model.step
    if model.carrier is DYADICS:
        grid = model.step / 2**DYADIC_DEPTH
    lo = -(Fraction(window) // Fraction(grid))
    hi = Fraction(window) // Fraction(grid)
    pts = [grid * i for i in range(int(lo), int(hi) + 1)]
    if model.carrier is INTEGERS:
        return [int(x) for x in pts]
    return [Fraction(x) for x in pts]


@dataclass
class WindowReport:
    variant: str
    window: int
    domain: list
    interior: list
    violations: list
    matching_violations: list

    @property
    def passed(self) -> bool:
        return not self.violations and not self.matching_violations and bool(self.interior)


def check_window(variant: str, window: int) -> WindowReport:
    if window < 8:
        raise InvalidWindow(f"window {window} too small (need >= 8)")
    model = window_model(variant)
    dom = window_domain(model, window)
    dom_set = set(dom)
    f = {a: a + model.f_shift for a in dom}
    g = {a: a + model.g_shift for a in dom}
    interior = [a for a in dom if a + model.phi_shift in dom_set]
    if not interior:
        raise InvalidWindow("window has an empty interior")
    violations = []
    for a in interior:
        b = a + model.phi_shift
        if a + f[a] != b + g[b]:
            violations.append(a)
    matching_violations = [
        a for a in dom if model.in_domain(a + f[a]) or model.in_domain(a + g[a])
    ]
    return WindowReport(variant, window, dom, interior, violations, matching_violations)


def window_witness(variant: str, window: int) -> WitnessCertificate:
    report = check_window(variant, window)
    model = window_model(variant)
    carrier = model.carrier
    dom = report.domain
    f = tuple((a, a + model.f_shift) for a in dom)
    g = tuple((a, a + model.g_shift) for a in dom)
    phi = tuple((a, a + model.phi_shift) for a in report.interior)
    from .certificates import window_claims

    claims = window_claims(carrier, dom, f, g, phi)
    claims["full_domain_matching"] = not report.matching_violations
    cert = WitnessCertificate(
        kind="window",
        carrier=carrier,
        A=tuple(dom),
        B=tuple(b for _, b in f),
        f=f,
        g=g,
        phi=phi,
        claims=claims,
        generator={"variant": variant, "window": window},
    )
    if not (report.passed and cert.all_claims_hold()):
        raise ConstructionUnavailable(f"window witness {variant} failed validation")
    return cert


# -- pairings --------------------------------------------------------------

def build_pairing(f: Matching, g: Matching) -> dict | None:
    """Bijection ``phi`` on ``A`` with ``a + f(a) = phi(a) + g(phi(a))``, or ``None``.

    Fibers of equal sum are aligned in canonical order.
    """
    if f.domain != g.domain or f.codomain != g.codomain:
        raise InvalidPair("f and g must share A and B")
    pf, pg = profile(f), profile(g)
    if not pf.same_counts(pg):
        return None
    phi = {}
    for x, fiber in pf.fibers.items():
        for a, b in zip(fiber, pg.fibers[x]):
            phi[a] = b
    return phi


def verify_pairing(f: Matching, g: Matching, phi) -> bool:
    if f.domain != g.domain:
        raise InvalidPair("f and g must share A")
    phi = dict(phi)
    A = set(f.domain)
    if set(phi) != A or set(phi.values()) != A:
        return False
    add = f.carrier.add
    ok = all(add(a, f(a)) == add(phi[a], g(phi[a])) for a in f.domain)
    if ok:
        # converse direction: the identity forces equal profiles
        assert profile(f).same_counts(profile(g))
    return ok


def pairing_witness(p: int, k: int | None = None) -> WitnessCertificate:
    """The qr witness (or the cycle witness at order ``k``) with its pairing attached."""
    cert = qr_witness(p) if k is None else cycle_witness(p, k)
    cert.kind = "pairing"
    cert.generator = dict(cert.generator, source="qr" if k is None else "cycle")
    return cert


def failure_witness(carrier, m: int, budget=None, elements=None) -> WitnessCertificate | None:
    res = fails_at_order(carrier, m, budget, elements)
    if res.status.value == "unknown":
        raise BudgetExceeded(f"budget exhausted after {res.nodes} nodes")
    if not res.found:
        return None
    w = res.value
    return _failure_certificate("failure", w.f, w.g, {"order": m, "nodes": res.nodes})


__all__ = [
    "qr_witness",
    "cycle_witness",
    "cycle_family",
    "involution_check",
    "unique_matching_check",
    "window_witness",
    "check_window",
    "build_pairing",
    "verify_pairing",
    "pairing_witness",
    "failure_witness",
    "restrict",
]
