"""Matchings between finite subsets of an Abelian group.

A matching is a bijection ``f: A -> B`` with ``a + f(a) not in A`` for every
``a``. This module checks that condition, computes multiplicity profiles,
finds and enumerates matchings, and decides acyclicity by exhaustive search.

All searches are deterministic: sets are processed in the carrier's canonical
order, and enumeration yields maps in lexicographic order of
``(f(a_1), f(a_2), ...)`` with ``a_1 < a_2 < ...``.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import (
    Budget,
    BudgetExceeded,
    InvalidPair,
    InvalidRestriction,
    MalformedMap,
    MatchingToolkitError,
    NotInvertibleInPlace,
)
from .group_core import GroupCarrier

# Largest |A| the backtracking enumerator accepts before giving up.
ENUMERATION_BOUND = 16


class NotAMatching(MatchingToolkitError):
    code = "not-a-matching"


class Status(str, enum.Enum):
    FOUND = "found"
    ABSENT = "absent"
    UNKNOWN = "unknown"


@dataclass
class SearchResult:
    status: Status
    value: object = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


class MatchCheck(NamedTuple):
    ok: bool
    violation: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _canonical_set(carrier: GroupCarrier, xs: Iterable) -> tuple:
    out = tuple(sorted({carrier.element(x) for x in xs}))
    return out


def _as_pairs(mapping) -> list[tuple]:
    if isinstance(mapping, Mapping):
        return list(mapping.items())
    return [tuple(p) for p in mapping]


@dataclass(frozen=True)
class Matching:
    carrier: GroupCarrier
    domain: tuple
    codomain: tuple
    pairs: tuple
    _map: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_map", dict(self.pairs))

    def __call__(self, a):
        return self._map[a]

    @property
    def mapping(self) -> dict:
        return dict(self._map)

    @property
    def size(self) -> int:
        return len(self.domain)

    def sums(self) -> dict:
        add = self.carrier.add
        return {a: add(a, b) for a, b in self.pairs}

    def __repr__(self):
        body = ", ".join(f"{a}->{b}" for a, b in self.pairs)
        return f"Matching({self.carrier}: {body})"


def is_matching(carrier: GroupCarrier, A, B, mapping) -> MatchCheck:
    """Check that ``mapping`` is a bijection ``A -> B`` satisfying ``a + f(a) not in A``.

    Raises :class:`MalformedMap` if ``mapping`` is not a function defined on
    exactly ``A``. Otherwise the first violation in canonical order is reported.
    """
    A = _canonical_set(carrier, A)
    B = _canonical_set(carrier, B)
    pairs = [(carrier.element(a), carrier.element(b)) for a, b in _as_pairs(mapping)]
    keys = [a for a, _ in pairs]
    if len(set(keys)) != len(keys):
        raise MalformedMap("map assigns more than one image to some element")
    if set(keys) != set(A):
        raise MalformedMap("map is not defined on exactly A")
    fmap = dict(pairs)
    if len(A) != len(B):
        return MatchCheck(False, None, "size")
    Aset = set(A)
    Bset = set(B)
    seen = set()
    for a in A:
        b = fmap[a]
        if b not in Bset:
            return MatchCheck(False, (a, b), "image-outside-B")
        if b in seen:
            return MatchCheck(False, (a, b), "not-injective")
        seen.add(b)
        if carrier.add(a, b) in Aset:
            return MatchCheck(False, (a, b), "sum-in-A")
    return MatchCheck(True)


def make_matching(carrier: GroupCarrier, A, B, mapping) -> Matching:
    A = _canonical_set(carrier, A)
    B = _canonical_set(carrier, B)
    check = is_matching(carrier, A, B, mapping)
    if not check.ok:
        raise NotAMatching(f"not a matching ({check.reason} at {check.violation})")
    pairs = tuple(sorted((carrier.element(a), carrier.element(b)) for a, b in _as_pairs(mapping)))
    return Matching(carrier, A, B, pairs)


def _unchecked(carrier, A, B, fmap) -> Matching:
    return Matching(carrier, tuple(A), tuple(B), tuple(sorted(fmap.items())))


# -- multiplicity profiles -------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Fibers ``x -> {a : a + f(a) = x}``; elements not listed have count 0."""

    fibers: dict

    @property
    def counts(self) -> dict:
        return {x: len(s) for x, s in self.fibers.items()}

    def key(self) -> tuple:
        return tuple(sorted(self.counts.items()))

    def same_counts(self, other: "Profile") -> bool:
        return self.counts == other.counts

    def total(self) -> int:
        return sum(len(s) for s in self.fibers.values())


def profile(f: Matching) -> Profile:
    fibers: dict = {}
    for a, x in f.sums().items():
        fibers.setdefault(x, []).append(a)
    return Profile({x: tuple(sorted(v)) for x, v in sorted(fibers.items())})


def profiles_equal(f: Matching, g: Matching) -> bool:
    return profile(f).same_counts(profile(g))


def invert(f: Matching) -> Matching:
    if set(f.domain) != set(f.codomain):
        raise NotInvertibleInPlace("inverse is only defined here for A = B")
    pairs = tuple(sorted((b, a) for a, b in f.pairs))
    return Matching(f.carrier, f.domain, f.codomain, pairs)


# -- existence and enumeration ---------------------------------------------

def _prepare(carrier: GroupCarrier, A, B):
    A = _canonical_set(carrier, A)
    B = _canonical_set(carrier, B)
    if len(A) != len(B):
        raise InvalidPair(f"|A| = {len(A)} differs from |B| = {len(B)}")
    return A, B


def find_matching(carrier: GroupCarrier, A, B) -> Matching | None:
    """Augmenting-path bipartite matching on edges ``(a, b)`` with ``a + b not in A``."""
    A, B = _prepare(carrier, A, B)
    Aset = set(A)
    adj = [[j for j, b in enumerate(B) if carrier.add(a, b) not in Aset] for a in A]
    match_b = [-1] * len(B)

    def augment(i, seen):
        for j in adj[i]:
            if seen[j]:
                continue
            seen[j] = True
            if match_b[j] == -1 or augment(match_b[j], seen):
                match_b[j] = i
                return True
        return False

    for i in range(len(A)):
        if not augment(i, [False] * len(B)):
            return None
    fmap = {A[match_b[j]]: B[j] for j in range(len(B))}
    return _unchecked(carrier, A, B, fmap)


def _backtrack(carrier, A, B, budget: Budget, target: dict | None = None, bound: int = ENUMERATION_BOUND) -> Iterator[dict]:
    """Yield every matching ``A -> B`` as a dict, in lexicographic order.

    With ``target`` (a count mapping), only matchings whose multiplicity
    profile equals ``target`` are produced; partial assignments exceeding a
    target count are pruned.
    """
    n = len(A)
    if n > bound:
        raise BudgetExceeded(f"|A| = {n} exceeds the enumeration bound {bound}")
    Aset = set(A)
    sums = [[carrier.add(a, b) for b in B] for a in A]
    allowed = []
    for i in range(n):
        js = [j for j in range(n) if sums[i][j] not in Aset]
        if target is not None:
            js = [j for j in js if sums[i][j] in target]
        allowed.append(js)
    masks = [sum(1 << j for j in js) for js in allowed]
    if any(m == 0 for m in masks):
        return
    remaining = dict(target) if target is not None else None
    assign = [0] * n

    def rec(i, used):
        if i == n:
            yield {A[k]: B[assign[k]] for k in range(n)}
            return
        for j in allowed[i]:
            if used >> j & 1:
                continue
            budget.tick()
            if remaining is not None:
                x = sums[i][j]
                if remaining[x] == 0:
                    continue
            new_used = used | (1 << j)
            # forward check: every later row keeps at least one free column
            if any(masks[k] & ~new_used == 0 for k in range(i + 1, n)):
                continue
            assign[i] = j
            if remaining is not None:
                remaining[x] -= 1
                yield from rec(i + 1, new_used)
                remaining[x] += 1
            else:
                yield from rec(i + 1, new_used)

    yield from rec(0, 0)


def enumerate_matchings(carrier: GroupCarrier, A, B, budget=None, bound: int = ENUMERATION_BOUND) -> Iterator[Matching]:
    A, B = _prepare(carrier, A, B)
    budget = Budget.coerce(budget)
    for fmap in _backtrack(carrier, A, B, budget, bound=bound):
        yield _unchecked(carrier, A, B, fmap)


def profile_class(f: Matching, budget=None) -> list[Matching]:
    """All matchings ``A -> B`` whose profile counts equal those of ``f``."""
    budget = Budget.coerce(budget)
    target = profile(f).counts
    return [
        _unchecked(f.carrier, f.domain, f.codomain, fmap)
        for fmap in _backtrack(f.carrier, f.domain, f.codomain, budget, target)
    ]


def is_acyclic(f: Matching, budget=None) -> bool | None:
    """True iff no other matching on ``(A, B)`` has the same profile counts.

    Returns ``None`` (unknown) when the node budget runs out.
    """
    budget = Budget.coerce(budget)
    target = profile(f).counts
    try:
        for fmap in _backtrack(f.carrier, f.domain, f.codomain, budget, target):
            if fmap != f._map:
                return False
    except BudgetExceeded:
        return None
    return True


# -- orbit structure -------------------------------------------------------

class Orbits(NamedTuple):
    cycles: tuple
    order: dict

    def max_length(self) -> int:
        return max((len(c) for c in self.cycles), default=0)


def orbits(f: Matching) -> Orbits:
    """Cycle decomposition of ``f: A -> A``; each cycle starts at its least element."""
    if set(f.domain) != set(f.codomain):
        raise NotInvertibleInPlace("orbits need A = B")
    seen = set()
    cycles = []
    order = {}
    for a in f.domain:
        if a in seen:
            continue
        cyc = [a]
        seen.add(a)
        b = f(a)
        while b != a:
            cyc.append(b)
            seen.add(b)
            b = f(b)
        cycles.append(tuple(cyc))
        for x in cyc:
            order[x] = len(cyc)
    return Orbits(tuple(cycles), order)


def is_involution(f: Matching) -> bool:
    return all(f(f(a)) == a for a in f.domain)


def restrict(f: Matching, S) -> Matching:
    """Restriction of ``f: A -> A`` to ``A \\ S`` where ``S`` is a union of cycles."""
    if set(f.domain) != set(f.codomain):
        raise NotInvertibleInPlace("restriction needs A = B")
    S = set(f.carrier.element(s) for s in S)
    if not S <= set(f.domain):
        raise InvalidRestriction("S is not contained in A")
    if S == set(f.domain):
        raise InvalidRestriction("S must be a proper subset of A")
    if {f(s) for s in S} != S:
        raise InvalidRestriction("S is not closed under f")
    rest = tuple(a for a in f.domain if a not in S)
    g = Matching(f.carrier, rest, rest, tuple((a, b) for a, b in f.pairs if a not in S))
    check = is_matching(g.carrier, g.domain, g.codomain, g.pairs)
    assert check.ok, check
    return g


# -- searches --------------------------------------------------------------

@dataclass(frozen=True)
class FailureWitness:
    f: Matching
    g: Matching

    @property
    def order(self) -> int:
        return self.f.size


def _witness_in_pair(carrier, A, B, budget) -> FailureWitness | None:
    first_by_profile: dict = {}
    for fmap in _backtrack(carrier, A, B, budget):
        key = tuple(sorted(Counter(carrier.add(a, b) for a, b in fmap.items()).items()))
        if key in first_by_profile:
            f = _unchecked(carrier, A, B, first_by_profile[key])
            g = _unchecked(carrier, A, B, fmap)
            return FailureWitness(f, g)
        first_by_profile[key] = fmap
    return None


def fails_at_order(carrier: GroupCarrier, m: int, budget=None, elements: Sequence | None = None) -> SearchResult:
    """Search pairs ``(A, B)`` of size ``m`` for distinct matchings with equal profiles.

    ``elements`` restricts the search to a finite window (required for
    infinite carriers). Pairs are visited in lexicographic order of
    ``(A, B)``; the first witness found is returned.
    """
    budget = Budget.coerce(budget)
    if elements is None:
        elements = carrier.elements()
    elements = _canonical_set(carrier, elements)
    if m < 1:
        raise InvalidPair("order must be at least 1")
    if m == 1 or m > len(elements):
        return SearchResult(Status.ABSENT, None, budget.used)
    try:
        for A in itertools.combinations(elements, m):
            for B in itertools.combinations(elements, m):
                w = _witness_in_pair(carrier, A, B, budget)
                if w is not None:
                    return SearchResult(Status.FOUND, w, budget.used)
    except BudgetExceeded:
        return SearchResult(Status.UNKNOWN, None, budget.used)
    return SearchResult(Status.ABSENT, None, budget.used)


@dataclass
class PropertyCheck:
    passed: bool
    counterexample: tuple | None
    pairs_checked: int


def matching_property_upto(carrier: GroupCarrier, k: int) -> PropertyCheck:
    """Check that every pair ``|A| = |B| <= k`` with ``0 not in B`` admits a matching."""
    elements = carrier.elements()
    zero = carrier.zero()
    nonzero = [x for x in elements if x != zero]
    checked = 0
    for size in range(1, k + 1):
        for A in itertools.combinations(elements, size):
            for B in itertools.combinations(nonzero, size):
                checked += 1
                if find_matching(carrier, A, B) is None:
                    return PropertyCheck(False, (A, B), checked)
    return PropertyCheck(True, None, checked)


def find_acyclic_matching(carrier: GroupCarrier, A, B, budget=None) -> SearchResult:
    """First matching (lexicographically) whose profile class is a singleton."""
    A, B = _prepare(carrier, A, B)
    if carrier.zero() in B:
        raise InvalidPair("0 must not lie in B")
    budget = Budget.coerce(budget)
    classes: dict = {}
    try:
        for fmap in _backtrack(carrier, A, B, budget):
            key = tuple(sorted(Counter(carrier.add(a, b) for a, b in fmap.items()).items()))
            classes.setdefault(key, []).append(fmap)
    except BudgetExceeded:
        return SearchResult(Status.UNKNOWN, None, budget.used)
    singles = [maps[0] for maps in classes.values() if len(maps) == 1]
    if not singles:
        return SearchResult(Status.ABSENT, None, budget.used)
    best = min(singles, key=lambda d: [d[a] for a in A])
    return SearchResult(Status.FOUND, _unchecked(carrier, A, B, best), budget.used)
