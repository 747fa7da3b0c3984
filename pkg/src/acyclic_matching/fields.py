"""Base fields and field towers ``K <= L``.

Two towers are supported:

* ``finite``: ``GF(p) <= GF(p^n) = GF(p)[x]/(modulus)``. Elements of ``L``
  are coefficient tuples of length ``n``, least degree first.
* ``rational-function``: ``Q <= Q(t)``. General elements are handled with
  sympy's rational function field; subspaces live in the polynomial part, so
  their coordinates are coefficient tuples of length ``degree_cap + 1``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import InvalidArgument, InvalidModulus, InvalidTower, MatchingToolkitError
from .group_core import is_prime

DEFAULT_DEGREE_CAP = 64


class DivisionByZero(MatchingToolkitError, ZeroDivisionError):
    code = "division-by-zero"


class DegreeCapExceeded(MatchingToolkitError):
    code = "degree-cap-exceeded"


# -- base fields -----------------------------------------------------------

class PrimeField:
    """GF(p) on plain ints in ``[0, p)``."""

    zero = 0
    one = 1

    def __init__(self, p: int):
        self.p = p
        self.size = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero("inverse of 0 in GF(p)")
        return pow(a, -1, self.p)

    def elements(self):
        return range(self.p)

    def encode(self, a):
        return a

    def decode(self, v):
        return self.coerce(v)


class RationalField:
    """Q on :class:`fractions.Fraction`."""

    zero = Fraction(0)
    one = Fraction(1)
    size = float("inf")

    def __repr__(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in Q")
        return 1 / Fraction(a)

    def elements(self):
        raise InvalidArgument("Q is not enumerable")

    def encode(self, a):
        a = Fraction(a)
        return f"{a.numerator}/{a.denominator}"

    def decode(self, v):
        return Fraction(v)


QQ = RationalField()


# -- polynomials over GF(p), least degree first ----------------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_divmod(a, b, p):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = (r[shift + i] - c * y) % p
        r = _trim(r)
    return _trim(q), r


def poly_mod(a, m, p):
    return poly_divmod(a, m, p)[1]


def poly_gcd(a, b, p):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def poly_powmod(a, e, m, p):
    result = [1]
    base = poly_mod(a, m, p)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), m, p)
        base = poly_mod(poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _has_root(poly, p: int) -> bool:
    for r in range(p):
        acc = 0
        for c in reversed(poly):
            acc = (acc * r + c) % p
        if acc == 0:
            return True
    return False


def is_irreducible(modulus, p: int) -> bool:
    """``x^(p^n) = x`` mod ``modulus`` and ``gcd(x^(p^d) - x, modulus) = 1`` for proper ``d | n``."""
    m = _trim([c % p for c in modulus])
    n = len(m) - 1
    if n < 1:
        return False
    x = [0, 1]
    if poly_powmod(x, p**n, m, p) != poly_mod(x, m, p):
        return False
    for d in divisors(n):
        if d == n:
            continue
        xd = poly_powmod(x, p**d, m, p)
        diff = _trim([(u - v) % p for u, v in itertools.zip_longest(xd, x, fillvalue=0)])
        if len(poly_gcd(diff, m, p)) > 1:
            return False
    return True


def smallest_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Monic irreducible of degree ``n``; lexicographically least coefficient list (least degree first)."""
    for low in itertools.product(range(p), repeat=n):
        cand = list(low) + [1]
        if low[0] == 0 or _has_root(cand, p):
            continue
        if is_irreducible(cand, p):
            return tuple(cand)
    raise InvalidModulus(f"no irreducible polynomial of degree {n} over GF({p})")


# -- towers ----------------------------------------------------------------

@dataclass(frozen=True)
class FieldTower:
    kind: str
    p: int | None = None
    n: int | None = None
    modulus: tuple | None = None
    degree_cap: int = DEFAULT_DEGREE_CAP

    @cached_property
    def base(self):
        return PrimeField(self.p) if self.kind == "finite" else QQ

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def dim(self) -> int:
        """Length of coordinate vectors for elements of ``L``."""
        return self.n if self.is_finite else self.degree_cap + 1

    @property
    def spec(self) -> str:
        if self.is_finite:
            return f"gf:{self.p}^{self.n}:" + ",".join(str(c) for c in self.modulus)
        return "ratfun"

    def __str__(self):
        if self.is_finite:
            return f"GF({self.p}^{self.n})"
        return "Q(t)"

    def descriptor(self) -> dict:
        if self.is_finite:
            return {"kind": "finite", "p": self.p, "n": self.n, "modulus": list(self.modulus)}
        return {"kind": "rational-function", "degree_cap": self.degree_cap}

    # -- vector-level arithmetic -------------------------------------------

    def zero(self) -> tuple:
        return (self.base.zero,) * self.dim

    def one(self) -> tuple:
        return self.embed(self.base.one)

    def embed(self, c) -> tuple:
        c = self.base.coerce(c)
        return (c,) + (self.base.zero,) * (self.dim - 1)

    def gen(self) -> tuple:
        """The class of ``x`` (finite) or the indeterminate ``t``."""
        v = [self.base.zero] * self.dim
        v[1] = self.base.one
        return tuple(v)

    def monomial(self, k: int) -> tuple:
        if self.is_finite:
            return self.pow(self.gen(), k)
        if k > self.degree_cap:
            raise DegreeCapExceeded(f"t^{k} exceeds degree cap {self.degree_cap}")
        v = [self.base.zero] * self.dim
        v[k] = self.base.one
        return tuple(v)

    def add(self, u, v):
        F = self.base
        return tuple(F.add(a, b) for a, b in zip(u, v))

    def sub(self, u, v):
        F = self.base
        return tuple(F.sub(a, b) for a, b in zip(u, v))

    def scale(self, c, v):
        F = self.base
        return tuple(F.mul(c, a) for a in v)

    def mul(self, u, v):
        if self.is_finite:
            prod = poly_mul(list(u), list(v), self.p)
            r = poly_mod(prod, list(self.modulus), self.p)
            return tuple(r) + (0,) * (self.n - len(r))
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        if i + j >= self.dim:
                            raise DegreeCapExceeded(f"product degree {i + j} exceeds cap {self.degree_cap}")
                        out[i + j] += a * b
        return tuple(out)

    def pow(self, u, e: int):
        if e < 0:
            return self.pow(self.inv(u), -e)
        result = self.one()
        base = u
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, u):
        if not any(u):
            raise DivisionByZero("inverse of 0")
        if not self.is_finite:
            raise DegreeCapExceeded("inverse of a polynomial is not a polynomial; use field_arith")
        return self.pow(u, self.p**self.n - 2)

    def elements(self):
        if not self.is_finite:
            raise InvalidArgument("Q(t) is not enumerable")
        return itertools.product(range(self.p), repeat=self.n)

    # -- rational function view --------------------------------------------

    @cached_property
    def ratfun_field(self):
        from sympy import QQ as sQQ
        from sympy.polys.fields import field

        F, t = field("t", sQQ)
        return F, t

    def to_ratfun(self, v):
        F, t = self.ratfun_field
        out = F(0)
        for k, c in enumerate(v):
            if c:
                out += F(Fraction(c).numerator) / Fraction(c).denominator * t**k
        return out

    def from_ratfun(self, r):
        """Coordinates of a polynomial rational function; raises for non-polynomials."""
        num, den = r.numer, r.denom
        if den.degree() > 0:
            raise DegreeCapExceeded(f"{r} is not a polynomial")
        d = Fraction(int(den.LC.numerator), int(den.LC.denominator))
        v = [Fraction(0)] * self.dim
        for (k,), c in num.terms():
            if k > self.degree_cap:
                raise DegreeCapExceeded(f"degree {k} exceeds cap {self.degree_cap}")
            v[k] = Fraction(int(c.numerator), int(c.denominator)) / d
        return tuple(v)


def make_tower(p: int, n: int, modulus=None) -> FieldTower:
    if not is_prime(p):
        raise InvalidTower(f"{p} is not prime")
    if n < 2:
        raise InvalidTower("extension degree must be at least 2")
    if modulus is None:
        modulus = smallest_irreducible(p, n)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(_trim(modulus)) != n + 1:
            raise InvalidModulus(f"modulus must have degree {n}")
        if modulus[-1] != 1:
            inv = pow(modulus[-1], -1, p)
            modulus = tuple(c * inv % p for c in modulus)
        if not is_irreducible(modulus, p):
            raise InvalidModulus(f"{list(modulus)} is reducible over GF({p})")
    return FieldTower("finite", p, n, tuple(modulus))


def ratfun_tower(degree_cap: int = DEFAULT_DEGREE_CAP) -> FieldTower:
    return FieldTower("rational-function", degree_cap=degree_cap)


def parse_tower_spec(spec: str) -> FieldTower:
    """``gf:p^n``, ``gf:p^n:c0,c1,...`` (monic modulus, least degree first) or ``ratfun``."""
    s = spec.strip().lower()
    if s == "ratfun":
        return ratfun_tower()
    m = re.fullmatch(r"gf:(\d+)\^(\d+)(?::([\d,]+))?", s)
    if not m:
        raise InvalidTower(f"cannot parse tower spec {spec!r}")
    p, n = int(m.group(1)), int(m.group(2))
    modulus = [int(c) for c in m.group(3).split(",")] if m.group(3) else None
    return make_tower(p, n, modulus)


def tower_from_descriptor(desc: dict) -> FieldTower:
    if desc["kind"] == "finite":
        return make_tower(desc["p"], desc["n"], desc["modulus"])
    if desc["kind"] == "rational-function":
        return ratfun_tower(desc.get("degree_cap", DEFAULT_DEGREE_CAP))
    raise InvalidTower(f"unknown tower kind {desc['kind']!r}")


def field_arith(tower: FieldTower, op: str, *args):
    """Arithmetic in ``L``: ``add``, ``mul``, ``inv``, ``pow`` or ``embed_base``.

    Finite towers take and return coordinate tuples; the rational-function
    tower takes and returns sympy rational functions (coordinate tuples are
    converted on entry).
    """
    if tower.is_finite:
        if op == "add":
            return tower.add(*args)
        if op == "mul":
            return tower.mul(*args)
        if op == "inv":
            return tower.inv(*args)
        if op == "pow":
            return tower.pow(*args)
        if op == "embed_base":
            return tower.embed(*args)
        raise InvalidArgument(f"unknown field operation {op!r}")
    F, _ = tower.ratfun_field
    vals = [tower.to_ratfun(a) if isinstance(a, tuple) else a for a in args]
    if op == "add":
        return vals[0] + vals[1]
    if op == "mul":
        return vals[0] * vals[1]
    if op == "inv":
        if vals[0] == 0:
            raise DivisionByZero("inverse of 0")
        return 1 / vals[0]
    if op == "pow":
        if vals[0] == 0 and args[1] < 0:
            raise DivisionByZero("negative power of 0")
        return vals[0] ** args[1]
    if op == "embed_base":
        c = Fraction(args[0])
        return F(c.numerator) / c.denominator
    raise InvalidArgument(f"unknown field operation {op!r}")
