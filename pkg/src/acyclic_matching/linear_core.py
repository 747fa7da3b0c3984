"""Linear matchings between ``K``-subspaces of a field extension ``L``.

Subspaces are stored as RREF row bases over ``K``; the RREF rows double as
the canonical basis in which linear maps are written. A map ``f: A -> B``
has matrix ``M`` with ``f(alpha_i) = sum_j M[i][j] beta_j`` where
``alpha_i``, ``beta_j`` are the RREF rows of ``A`` and ``B``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from . import linalg as la
from .errors import (
    Budget,
    BudgetExceeded,
    InvalidBasis,
    InvalidOrder,
    InvalidPair,
    InvalidTower,
    UnsupportedField,
)
from .fields import FieldTower, PrimeField, divisors, ratfun_tower
from .matching_core import SearchResult, Status

# Exhaustive basis enumeration is used below this many unordered bases.
EXHAUSTIVE_BASIS_LIMIT = 5000


# -- subspaces -------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    tower: FieldTower
    rows: tuple
    pivots: tuple

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def F(self):
        return self.tower.base

    def is_zero(self) -> bool:
        return not self.rows

    def coords(self, v) -> tuple:
        """Coordinates of ``v`` (assumed in the subspace) in the RREF basis."""
        return tuple(v[c] for c in self.pivots)

    def vector(self, x) -> tuple:
        F = self.F
        out = self.tower.zero()
        for c, row in zip(x, self.rows):
            if c != F.zero:
                out = self.tower.add(out, self.tower.scale(c, row))
        return out

    def contains(self, v) -> bool:
        return la.is_zero(self.F, la.reduce_vector(self.F, v, self.rows, self.pivots))

    def residual(self, v) -> tuple:
        return la.reduce_vector(self.F, v, self.rows, self.pivots)

    def encode(self) -> list:
        return [[self.F.encode(c) for c in row] for row in self.rows]

    def __repr__(self):
        return f"Subspace({self.tower}, dim={self.dim}, rows={list(self.rows)})"


def span(tower: FieldTower, vectors) -> Subspace:
    vecs = [tuple(tower.base.coerce(c) for c in v) for v in vectors]
    rows, pivots = la.rref(tower.base, vecs)
    return Subspace(tower, rows, pivots)


def zero_subspace(tower: FieldTower) -> Subspace:
    return Subspace(tower, (), ())


def intersect(A: Subspace, B: Subspace) -> Subspace:
    _same_tower(A, B)
    return span(A.tower, la.intersect_rowspaces(A.F, A.rows, B.rows))


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    _same_tower(A, B)
    return span(A.tower, A.rows + B.rows)


def product(A: Subspace, B: Subspace) -> Subspace:
    """Span of all products ``a * b``."""
    _same_tower(A, B)
    mul = A.tower.mul
    return span(A.tower, [mul(a, b) for a in A.rows for b in B.rows])


def contains(A: Subspace, v) -> bool:
    return A.contains(v)


def _same_tower(A, B):
    if A.tower != B.tower:
        raise InvalidPair("subspaces live in different towers")


def enumerate_subspaces(tower: FieldTower, k: int):
    """All ``k``-dimensional subspaces of a finite ``L``, by pivot set then free entries."""
    F = tower.base
    n = tower.dim
    elems = list(F.elements())
    for pivots in itertools.combinations(range(n), k):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for vals in itertools.product(elems, repeat=len(free)):
            rows = [[F.zero] * n for _ in range(k)]
            for r, p in enumerate(pivots):
                rows[r][p] = F.one
            for (r, c), v in zip(free, vals):
                rows[r][c] = v
            yield Subspace(tower, tuple(tuple(r) for r in rows), pivots)


# -- linear maps -----------------------------------------------------------

@dataclass(frozen=True)
class LinearMap:
    domain: Subspace
    codomain: Subspace
    matrix: tuple

    @property
    def F(self):
        return self.domain.F

    def __call__(self, v):
        x = self.domain.coords(v)
        return self.codomain.vector(la.vecmat(self.F, x, self.matrix))

    def is_invertible(self) -> bool:
        return self.domain.dim == self.codomain.dim and la.is_invertible(self.F, self.matrix)

    def inverse(self) -> "LinearMap":
        inv = la.inverse(self.F, self.matrix)
        if inv is None:
            raise InvalidPair("map is not invertible")
        return LinearMap(self.codomain, self.domain, inv)

    def scaled(self, c) -> "LinearMap":
        return LinearMap(self.domain, self.codomain, la.mat_scale(self.F, self.F.coerce(c), self.matrix))

    def then(self, other: "LinearMap") -> "LinearMap":
        """``other o self``."""
        return LinearMap(self.domain, other.codomain, la.matmul(self.F, self.matrix, other.matrix))

    def encode(self) -> list:
        return [[self.F.encode(c) for c in row] for row in self.matrix]


def identity_map(A: Subspace) -> LinearMap:
    return LinearMap(A, A, la.identity(A.F, A.dim))


def scalar_map(A: Subspace, c) -> LinearMap:
    return LinearMap(A, A, la.scalar_matrix(A.F, A.F.coerce(c), A.dim))


def scalar_multiple_of(g: LinearMap, f: LinearMap):
    """``c`` with ``g = c f``, or ``None``."""
    F = f.F
    c = None
    for rf, rg in zip(f.matrix, g.matrix):
        for x, y in zip(rf, rg):
            if x == F.zero:
                if y != F.zero:
                    return None
                continue
            ratio = F.mul(y, F.inv(x))
            if c is None:
                c = ratio
            elif c != ratio:
                return None
    return c


# -- strong matchings ------------------------------------------------------

def strong_matching_exists(A: Subspace, B: Subspace) -> bool:
    """Criterion ``AB & A = {0}``."""
    if A.dim != B.dim or A.dim < 1:
        raise InvalidPair("need dim A = dim B >= 1")
    return intersect(product(A, B), A).is_zero()


def _kernel_coords(A: Subspace, B: Subspace, a) -> list:
    """``{b in B : a b in A}`` as a kernel basis in ``B``'s RREF coordinates."""
    residuals = [A.residual(A.tower.mul(a, beta)) for beta in B.rows]
    return la.left_kernel(A.F, residuals)


def _condition_holds(F, kernels, Q_inv) -> bool:
    """Each kernel ``S_i`` lies in the hyperplane spanned by ``b_j``, ``j != i``.

    ``Q_inv`` inverts the matrix whose rows are the ``b_j`` in ``B``-coordinates,
    so ``s @ Q_inv`` are the coordinates of ``s`` in the basis ``(b_j)``.
    """
    m = len(Q_inv)
    for i, S in enumerate(kernels):
        col = [Q_inv[r][i] for r in range(m)]
        for s in S:
            acc = F.zero
            for x, y in zip(s, col):
                if x != F.zero and y != F.zero:
                    acc = F.add(acc, F.mul(x, y))
            if acc != F.zero:
                return False
    return True


def _validate_basis(S: Subspace, basis) -> tuple:
    basis = [tuple(S.F.coerce(c) for c in v) for v in basis]
    if len(basis) != S.dim or any(not S.contains(v) for v in basis):
        raise InvalidBasis("vectors do not lie in the subspace or have the wrong count")
    if la.rank(S.F, basis) != S.dim:
        raise InvalidBasis("vectors are linearly dependent")
    return tuple(basis)


def is_matched_basis(A: Subspace, basis_a, B: Subspace, basis_b) -> bool:
    """``a_i b in A`` forces ``b`` into the span of ``basis_b`` without ``b_i``."""
    if A.dim != B.dim:
        raise InvalidPair("dimension mismatch")
    basis_a = _validate_basis(A, basis_a)
    basis_b = _validate_basis(B, basis_b)
    kernels = [_kernel_coords(A, B, a) for a in basis_a]
    Q = [B.coords(b) for b in basis_b]
    return _condition_holds(A.F, kernels, la.inverse(A.F, Q))


class Sampled(NamedTuple):
    k: int
    seed: int = 0


@lru_cache(maxsize=None)
def _gl_with_inverses(F: PrimeField, m: int) -> tuple:
    return tuple((M, la.inverse(F, M)) for M in la.general_linear_group(F, m))


def _unordered_bases(F, m: int):
    """One ordered representative (coordinate rows) per unordered basis of ``K^m``."""
    nonzero = [v for v in la.all_vectors(F, m) if any(x != F.zero for x in v)]
    for combo in itertools.combinations(nonzero, m):
        if la.rank(F, combo) == m:
            yield combo


def _count_unordered_bases(q: int, m: int) -> int:
    return la.gl_order(q, m) // _factorial(m)


def _factorial(m):
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


def _random_invertible(F, m: int, rng: random.Random):
    while True:
        if isinstance(F, PrimeField):
            M = tuple(tuple(rng.randrange(F.p) for _ in range(m)) for _ in range(m))
        else:
            M = tuple(tuple(F.coerce(rng.randint(-3, 3)) for _ in range(m)) for _ in range(m))
        if la.is_invertible(F, M):
            return M


def _basis_coords(A: Subspace, mode, rng_seed_offset=0):
    F = A.F
    if mode == "exhaustive":
        if not isinstance(F, PrimeField):
            raise UnsupportedField("exhaustive basis enumeration needs a finite base field")
        yield from _unordered_bases(F, A.dim)
        return
    rng = random.Random(mode.seed + rng_seed_offset)
    for _ in range(mode.k):
        yield _random_invertible(F, A.dim, rng)


def _pick_mode(A: Subspace, mode):
    if mode == "auto":
        F = A.F
        if isinstance(F, PrimeField) and _count_unordered_bases(F.p, A.dim) <= EXHAUSTIVE_BASIS_LIMIT:
            return "exhaustive"
        return Sampled(20, 0)
    return mode


@dataclass
class MatchedResult:
    status: bool | None
    failing_basis: tuple | None = None
    bases_checked: int = 0

    def __bool__(self):
        return bool(self.status)


def is_matched_subspace(A: Subspace, B: Subspace, mode="exhaustive", budget=None) -> MatchedResult:
    """Every basis of ``A`` (all, or a sample) is matched to some basis of ``B``.

    The search over bases of ``B`` is always exhaustive, so a finite base
    field is required.
    """
    if A.dim != B.dim:
        raise InvalidPair("dimension mismatch")
    F = A.F
    if not isinstance(F, PrimeField):
        raise UnsupportedField("matched-subspace search needs a finite base field")
    budget = Budget.coerce(budget)
    mode = _pick_mode(A, mode)
    gl = _gl_with_inverses(F, A.dim)
    kernel_cache: dict = {}
    checked = 0
    try:
        for P in _basis_coords(A, mode):
            checked += 1
            kernels = []
            for x in P:
                if x not in kernel_cache:
                    kernel_cache[x] = _kernel_coords(A, B, A.vector(x))
                kernels.append(kernel_cache[x])
            found = False
            for _, Q_inv in gl:
                budget.tick()
                if _condition_holds(F, kernels, Q_inv):
                    found = True
                    break
            if not found:
                return MatchedResult(False, tuple(A.vector(x) for x in P), checked)
    except BudgetExceeded:
        return MatchedResult(None, None, checked)
    return MatchedResult(True, None, checked)


def is_strong_matching(phi: LinearMap, mode="auto", budget=None) -> bool | None:
    """Every basis of the domain is matched to its image basis."""
    A, B = phi.domain, phi.codomain
    if not phi.is_invertible():
        raise InvalidPair("a strong matching must be an isomorphism")
    F = A.F
    budget = Budget.coerce(budget)
    mode = _pick_mode(A, mode)
    kernel_cache: dict = {}
    try:
        for P in _basis_coords(A, mode):
            budget.tick()
            kernels = []
            for x in P:
                if x not in kernel_cache:
                    kernel_cache[x] = _kernel_coords(A, B, A.vector(x))
                kernels.append(kernel_cache[x])
            Q = la.matmul(F, P, phi.matrix)
            if not _condition_holds(F, kernels, la.inverse(F, Q)):
                return False
    except BudgetExceeded:
        return None
    return True


# -- quadratic maps a -> a f(a) --------------------------------------------

def _product_table(A: Subspace, B: Subspace):
    mul = A.tower.mul
    return [[mul(a, b) for b in B.rows] for a in A.rows]


def _quadratic_coefficients(tower, P, M, N):
    """Coefficients of ``x -> (x M . alpha) * (x N . beta)`` as a polynomial in ``x``.

    ``P[i][k] = alpha_i * beta_k``. Returns the coefficient of ``x_s x_t``
    for ``s <= t`` in a fixed order.
    """
    F = tower.base
    m = len(M)
    U = [[None] * m for _ in range(len(P))]
    for i in range(len(P)):
        for t in range(m):
            acc = tower.zero()
            for k, c in enumerate(N[t]):
                if c != F.zero:
                    acc = tower.add(acc, tower.scale(c, P[i][k]))
            U[i][t] = acc
    T = [[None] * m for _ in range(m)]
    for s in range(m):
        for t in range(m):
            acc = tower.zero()
            for i, c in enumerate(M[s]):
                if c != F.zero:
                    acc = tower.add(acc, tower.scale(c, U[i][t]))
            T[s][t] = acc
    out = []
    for s in range(m):
        out.append(T[s][s])
        for t in range(s + 1, m):
            out.append(tower.add(T[s][t], T[t][s]))
    return tuple(out)


def _form_values(A: Subspace, B: Subspace, M, N):
    """Value table of ``x -> (x M)_A * (x N)_B`` over all of ``K^m``."""
    F = A.F
    mul = A.tower.mul
    return tuple(
        mul(A.vector(la.vecmat(F, x, M)), B.vector(la.vecmat(F, x, N)))
        for x in la.all_vectors(F, len(M))
    )


def _form_key(A: Subspace, B: Subspace, P, M, N):
    # coefficients pin down a quadratic form as a function once |K| >= 3
    if isinstance(A.F, PrimeField) and A.F.p == 2:
        return _form_values(A, B, M, N)
    return _quadratic_coefficients(A.tower, P, M, N)


def _check_quad_shapes(f, phi, h):
    A = f.domain
    if not (phi.domain == A and phi.codomain == A and h.domain == A and h.codomain == f.codomain):
        raise InvalidPair("need f, h: A -> B and phi: A -> A")


def quad_map_equal(f: LinearMap, phi: LinearMap, h: LinearMap) -> bool:
    """Decide ``a f(a) = phi(a) h(phi(a))`` for all ``a`` by comparing coefficients.

    Exact because both sides have degree 2 in each coordinate, and a
    polynomial of degree < |K| per variable is determined by its values.
    Over GF(2) the value tables are compared instead.
    """
    _check_quad_shapes(f, phi, h)
    F = f.F
    A, B = f.domain, f.codomain
    P = _product_table(A, B)
    ident = la.identity(F, A.dim)
    lhs = _form_key(A, B, P, ident, f.matrix)
    rhs = _form_key(A, B, P, phi.matrix, la.matmul(F, phi.matrix, h.matrix))
    return lhs == rhs


def quad_map_equal_pointwise(f: LinearMap, phi: LinearMap, h: LinearMap, limit: int = 5**4) -> bool:
    _check_quad_shapes(f, phi, h)
    A = f.domain
    F = A.F
    if not isinstance(F, PrimeField):
        raise UnsupportedField("pointwise comparison needs a finite base field")
    if F.p**A.dim > limit:
        raise UnsupportedField(f"|A| = {F.p ** A.dim} exceeds the pointwise limit {limit}")
    mul = A.tower.mul
    for x in la.all_vectors(F, A.dim):
        a = A.vector(x)
        b = phi(a)
        if mul(a, f(a)) != mul(b, h(b)):
            return False
    return True


def is_linear_acyclic(f: LinearMap, budget=None) -> bool | None:
    """Every strong ``g ~ f`` is a scalar multiple of ``f``.

    ``f ~ g`` iff the quadratic form of ``g`` equals that of ``f`` composed
    with some invertible ``psi``; the set of such forms is tabulated once,
    then every strong isomorphism ``g`` is looked up.
    """
    A, B = f.domain, f.codomain
    F = A.F
    if not isinstance(F, PrimeField):
        raise UnsupportedField("enumeration needs a finite base field")
    budget = Budget.coerce(budget)
    P = _product_table(A, B)
    try:
        reachable = set()
        for psi, _ in _gl_with_inverses(F, A.dim):
            budget.tick()
            reachable.add(_form_key(A, B, P, psi, la.matmul(F, psi, f.matrix)))
        all_strong = strong_matching_exists(A, B)
        ident = la.identity(F, A.dim)
        for G, _ in _gl_with_inverses(F, A.dim):
            budget.tick()
            g = LinearMap(A, B, G)
            if _form_key(A, B, P, ident, G) not in reachable:
                continue
            if scalar_multiple_of(g, f) is not None:
                continue
            if all_strong or is_strong_matching(g, "exhaustive", budget):
                return False
    except BudgetExceeded:
        return None
    return True


# -- subfields -------------------------------------------------------------

def intermediate_fields(tower: FieldTower) -> list[int]:
    if not tower.is_finite:
        raise InvalidTower("intermediate fields are computed for finite towers only")
    return [d for d in divisors(tower.n) if 1 < d < tower.n]


def subfield(tower: FieldTower, d: int) -> Subspace:
    """``GF(p^d)`` inside ``L`` as the fixed space of ``x -> x^(p^d)``."""
    F = tower.base
    rows = []
    for i in range(tower.n):
        e = [0] * tower.n
        e[i] = 1
        e = tuple(e)
        rows.append(tower.sub(tower.pow(e, tower.p**d), e))
    S = span(tower, la.left_kernel(F, rows))
    return S


# -- witnesses -------------------------------------------------------------

@dataclass
class LinearWitness:
    tower: FieldTower
    m: int
    A: Subspace
    f: LinearMap
    h: LinearMap
    phi: LinearMap
    c: object
    branch: str
    claims: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(self.claims[k] for k in REQUIRED_LINEAR_CLAIMS)


REQUIRED_LINEAR_CLAIMS = ("trivial_intersection", "strong_f", "strong_g_or_h", "equivalent", "distinct")


def odd_power_subspace(tower: FieldTower, a, m: int) -> Subspace:
    """``<a, a^3, ..., a^(2m-1)>``."""
    gens = [tower.pow(a, 2 * i - 1) for i in range(1, m + 1)]
    return span(tower, gens)


def _strong_claim(phi: LinearMap) -> bool:
    crit = strong_matching_exists(phi.domain, phi.codomain)
    direct = is_strong_matching(phi, "auto")
    return bool(crit and direct)


def linear_claims(f: LinearMap, h: LinearMap, phi: LinearMap, pointwise: bool = True) -> dict:
    A = f.domain
    claims = {
        "trivial_intersection": intersect(A, product(A, A)).is_zero(),
        "strong_f": _strong_claim(f),
        "strong_g_or_h": _strong_claim(h),
        "equivalent": quad_map_equal(f, phi, h),
        "distinct": f.matrix != h.matrix,
        "scalar_multiple": scalar_multiple_of(h, f) is not None,
    }
    if pointwise and A.tower.is_finite and A.tower.p**A.dim <= 5**4:
        claims["equivalent_pointwise"] = quad_map_equal_pointwise(f, phi, h)
    return claims


def _smallest_c(F) -> object:
    """Least base-field element with ``c^2`` outside ``{0, 1}``."""
    if isinstance(F, PrimeField):
        for c in range(2, F.p):
            if c * c % F.p not in (0, 1):
                return c
        raise UnsupportedField(f"GF({F.p}) has no c with c^2 not in {{0, 1}}")
    return F.coerce(2)


def _equivalence_data(A: Subspace):
    """f = identity (an involution), h = c^-2 f, phi = c id."""
    F = A.F
    f = identity_map(A)
    c = _smallest_c(F)
    h = f.scaled(F.inv(F.mul(c, c)))
    phi = f.scaled(c)
    return f, h, phi, c, "scaled-inverse"


def linear_witness(tower: FieldTower, m: int) -> LinearWitness:
    if not tower.is_finite:
        raise InvalidTower("linear_witness needs a finite tower; use transcendental_witness")
    if intermediate_fields(tower):
        raise InvalidTower(f"{tower} has intermediate fields {intermediate_fields(tower)}")
    if tower.p < 5:
        raise UnsupportedField("base field needs at least 5 elements")
    if not 1 <= m or 4 * m > tower.n + 1:
        raise InvalidOrder(f"need 1 <= m <= (n+1)/4, got m = {m}, n = {tower.n}")
    A = odd_power_subspace(tower, tower.gen(), m)
    assert A.dim == m
    f, h, phi, c, branch = _equivalence_data(A)
    w = LinearWitness(tower, m, A, f, h, phi, c, branch, linear_claims(f, h, phi))
    return w


def transcendental_witness(m: int, degree_cap: int | None = None) -> LinearWitness:
    if m < 1:
        raise InvalidOrder("m must be positive")
    tower = ratfun_tower() if degree_cap is None else ratfun_tower(degree_cap)
    A = odd_power_subspace(tower, tower.gen(), m)
    assert A.dim == m
    f, h, phi, c, branch = _equivalence_data(A)
    return LinearWitness(tower, m, A, f, h, phi, c, branch, linear_claims(f, h, phi, pointwise=False))


# -- linear matching property counterexamples -------------------------------

@dataclass(frozen=True)
class LmpCounterexample:
    A: Subspace
    B: Subspace
    basis: tuple


def _b_candidates(tower, A):
    one = tower.one()
    cands = [B for B in enumerate_subspaces(tower, A.dim) if not B.contains(one)]
    cands.sort(key=lambda B: -intersect(A, B).dim)
    return cands


def lmp_counterexample_search(tower: FieldTower, budget=None) -> SearchResult:
    """Find ``A, B`` with ``1 not in B`` and a basis of ``A`` matched to no basis of ``B``.

    Candidate ``A`` are the intermediate fields and their subspaces of
    dimension >= 2; for prime degree every subspace is scanned instead.
    """
    if not tower.is_finite:
        raise InvalidTower("search needs a finite tower")
    budget = Budget.coerce(budget)
    seeds: list[Subspace] = []
    for d in intermediate_fields(tower):
        H = subfield(tower, d)
        seeds.append(H)
        for k in range(H.dim - 1, 1, -1):
            for S in enumerate_subspaces(tower, k):
                if intersect(S, H).dim == k:
                    seeds.append(S)
    if not seeds:
        seeds = [S for k in range(1, tower.n) for S in enumerate_subspaces(tower, k)]
    try:
        for A in seeds:
            for B in _b_candidates(tower, A):
                res = is_matched_subspace(A, B, "exhaustive", budget)
                if res.status is None:
                    raise BudgetExceeded("budget exhausted")
                if res.status is False:
                    return SearchResult(Status.FOUND, LmpCounterexample(A, B, res.failing_basis), budget.used)
    except BudgetExceeded:
        return SearchResult(Status.UNKNOWN, None, budget.used)
    return SearchResult(Status.ABSENT, None, budget.used)


def basis_matched_somewhere(A: Subspace, basis, B: Subspace) -> bool:
    """Does ``basis`` (of ``A``) match some ordered basis of ``B``? Exhaustive."""
    F = A.F
    basis = _validate_basis(A, basis)
    kernels = [_kernel_coords(A, B, a) for a in basis]
    return any(_condition_holds(F, kernels, Q_inv) for _, Q_inv in _gl_with_inverses(F, A.dim))
