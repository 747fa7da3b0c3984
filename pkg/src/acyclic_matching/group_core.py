"""Exact arithmetic for the Abelian groups used by the toolkit.

Four carrier kinds are supported:

* ``finite``   -- Z_n1 x ... x Z_nk given by invariant factors. A cyclic
  carrier (one factor) uses plain ``int`` residues, a product uses tuples.
* ``integer``  -- Z, elements are ``int``.
* ``dyadic``   -- Z[1/2], elements are :class:`fractions.Fraction` whose
  denominator is a power of two.
* ``rational`` -- Q, elements are :class:`fractions.Fraction`.

Elements are plain immutable Python values in canonical form, so they hash,
compare and sort without wrappers. Python's ordering on these values is the
canonical total order (lexicographic on residue vectors, numeric otherwise).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import CarrierMismatch, InvalidArgument, InvalidCarrier, NotEnumerable

KINDS = ("finite", "integer", "dyadic", "rational")
INFINITE = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class GroupCarrier:
    kind: str
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidCarrier(f"unknown carrier kind {self.kind!r}")
        if self.kind == "finite":
            if not self.invariant_factors:
                raise InvalidCarrier("finite carrier needs at least one invariant factor")
            if any(int(q) < 2 for q in self.invariant_factors):
                raise InvalidCarrier(f"invariant factors must be >= 2: {self.invariant_factors}")
        elif self.invariant_factors:
            raise InvalidCarrier(f"{self.kind} carrier takes no invariant factors")

    # -- descriptors -------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_cyclic(self) -> bool:
        return self.kind == "finite" and len(self.invariant_factors) == 1

    @property
    def size(self) -> int | float:
        if not self.is_finite:
            return INFINITE
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int | float:
        if not self.is_finite:
            return INFINITE
        return math.lcm(*self.invariant_factors)

    @property
    def spec(self) -> str:
        """Command-line spelling: ``z:7``, ``z:2x2``, ``int``, ``dyadic``, ``rat``."""
        if self.is_finite:
            return "z:" + "x".join(str(q) for q in self.invariant_factors)
        return {"integer": "int", "dyadic": "dyadic", "rational": "rat"}[self.kind]

    def descriptor(self) -> dict:
        return {"kind": self.kind, "invariant_factors": list(self.invariant_factors)}

    def __str__(self):
        if self.is_finite:
            return " x ".join(f"Z_{q}" for q in self.invariant_factors)
        return {"integer": "Z", "dyadic": "Z[1/2]", "rational": "Q"}[self.kind]

    # -- elements ----------------------------------------------------------

    def contains(self, x) -> bool:
        if isinstance(x, bool):
            return False
        if self.is_cyclic:
            return isinstance(x, int) and 0 <= x < self.invariant_factors[0]
        if self.is_finite:
            return (
                isinstance(x, tuple)
                and len(x) == len(self.invariant_factors)
                and all(isinstance(r, int) and 0 <= r < q for r, q in zip(x, self.invariant_factors))
            )
        if self.kind == "integer":
            return isinstance(x, int)
        if self.kind == "dyadic":
            return isinstance(x, Fraction) and _is_power_of_two(x.denominator)
        return isinstance(x, Fraction)

    def element(self, value):
        """Canonicalize ``value`` (int, tuple, Fraction or text encoding) into this carrier."""
        if isinstance(value, str):
            return decode_element(self, value)
        if self.is_cyclic:
            if isinstance(value, tuple) and len(value) == 1:
                value = value[0]
            if isinstance(value, Fraction) and value.denominator == 1:
                value = value.numerator
            if not isinstance(value, int):
                raise CarrierMismatch(f"{value!r} is not an element of {self}")
            return value % self.invariant_factors[0]
        if self.is_finite:
            if not isinstance(value, (tuple, list)) or len(value) != len(self.invariant_factors):
                raise CarrierMismatch(f"{value!r} is not an element of {self}")
            return tuple(int(r) % q for r, q in zip(value, self.invariant_factors))
        if self.kind == "integer":
            if isinstance(value, Fraction):
                if value.denominator != 1:
                    raise CarrierMismatch(f"{value} is not an integer")
                value = value.numerator
            if not isinstance(value, int):
                raise CarrierMismatch(f"{value!r} is not an integer")
            return int(value)
        if not isinstance(value, (int, Fraction)):
            raise CarrierMismatch(f"{value!r} is not an element of {self}")
        value = Fraction(value)
        if self.kind == "dyadic" and not _is_power_of_two(value.denominator):
            raise CarrierMismatch(f"{value} is not dyadic")
        return value

    def _check(self, *xs):
        for x in xs:
            if not self.contains(x):
                raise CarrierMismatch(f"{x!r} does not belong to {self}")

    def zero(self):
        if self.is_cyclic:
            return 0
        if self.is_finite:
            return (0,) * len(self.invariant_factors)
        if self.kind == "integer":
            return 0
        return Fraction(0)

    # Fast paths below assume canonical inputs; validation lives in elem_arith.
    def add(self, x, y):
        if self.is_cyclic:
            return (x + y) % self.invariant_factors[0]
        if self.is_finite:
            return tuple((a + b) % q for a, b, q in zip(x, y, self.invariant_factors))
        return x + y

    def neg(self, x):
        if self.is_cyclic:
            return -x % self.invariant_factors[0]
        if self.is_finite:
            return tuple(-a % q for a, q in zip(x, self.invariant_factors))
        return -x

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def scale(self, n: int, x):
        """``n * x`` for an integer ``n``."""
        if self.is_cyclic:
            return n * x % self.invariant_factors[0]
        if self.is_finite:
            return tuple(n * a % q for a, q in zip(x, self.invariant_factors))
        return n * x

    def order(self, x) -> int | float:
        if self.is_cyclic:
            q = self.invariant_factors[0]
            return q // math.gcd(x, q)
        if self.is_finite:
            return math.lcm(*(q // math.gcd(a, q) for a, q in zip(x, self.invariant_factors)))
        return 1 if x == 0 else INFINITE

    def elements(self) -> list:
        if not self.is_finite:
            raise NotEnumerable(f"{self} is infinite")
        if self.is_cyclic:
            return list(range(self.invariant_factors[0]))
        return list(itertools.product(*(range(q) for q in self.invariant_factors)))


def make_carrier(kind: str, invariant_factors: Iterable[int] | None = None) -> GroupCarrier:
    factors = tuple(int(q) for q in invariant_factors) if invariant_factors else ()
    return GroupCarrier(kind, factors)


def cyclic(n: int) -> GroupCarrier:
    return GroupCarrier("finite", (n,))


INTEGERS = GroupCarrier("integer")
DYADICS = GroupCarrier("dyadic")
RATIONALS = GroupCarrier("rational")


def parse_group_spec(spec: str) -> GroupCarrier:
    """Parse ``z:n``, ``z:n1xn2``, ``int``, ``dyadic`` or ``rat``."""
    s = spec.strip().lower()
    if s in ("int", "integer", "z"):
        return INTEGERS
    if s == "dyadic":
        return DYADICS
    if s in ("rat", "rational", "q"):
        return RATIONALS
    m = re.fullmatch(r"z:(\d+(?:x\d+)*)", s)
    if not m:
        raise InvalidCarrier(f"cannot parse group spec {spec!r}")
    return make_carrier("finite", [int(t) for t in m.group(1).split("x")])


def carrier_from_descriptor(desc: dict) -> GroupCarrier:
    return make_carrier(desc["kind"], desc.get("invariant_factors") or None)


def elem_arith(carrier: GroupCarrier, op: str, *args):
    """Validated group operation: ``add``, ``neg``, ``sub``, ``zero`` or ``eq``."""
    if op == "zero":
        return carrier.zero()
    carrier._check(*args)
    if op == "add":
        x, y = args
        return carrier.add(x, y)
    if op == "neg":
        (x,) = args
        return carrier.neg(x)
    if op == "sub":
        x, y = args
        return carrier.sub(x, y)
    if op == "eq":
        x, y = args
        return x == y
    raise InvalidArgument(f"unknown group operation {op!r}")


def element_order(carrier: GroupCarrier, x) -> int | float:
    carrier._check(x)
    return carrier.order(x)


def enumerate_elements(carrier: GroupCarrier) -> list:
    return carrier.elements()


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) via Euler's criterion."""
    if p == 2 or not is_prime(p):
        raise InvalidArgument(f"{p} is not an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def quadratic_residues(p: int) -> list[int]:
    return sorted({n * n % p for n in range(1, p)})


# -- text encoding ---------------------------------------------------------

def encode_element(carrier: GroupCarrier, x) -> str:
    if carrier.is_cyclic or carrier.kind == "integer":
        return str(x)
    if carrier.is_finite:
        return "(" + ",".join(str(r) for r in x) + ")"
    if carrier.kind == "dyadic":
        e = x.denominator.bit_length() - 1
        return f"{x.numerator}/2^{e}"
    return f"{x.numerator}/{x.denominator}"


def decode_element(carrier: GroupCarrier, text: str):
    t = text.strip()
    try:
        if carrier.is_cyclic:
            return carrier.element(int(t))
        if carrier.is_finite:
            if not (t.startswith("(") and t.endswith(")")):
                raise ValueError(t)
            return carrier.element(tuple(int(r) for r in t[1:-1].split(",")))
        if carrier.kind == "integer":
            return int(t)
        if carrier.kind == "dyadic":
            m = re.fullmatch(r"(-?\d+)/2\^(\d+)", t)
            if not m:
                raise ValueError(t)
            return carrier.element(Fraction(int(m.group(1)), 2 ** int(m.group(2))))
        return carrier.element(Fraction(t))
    except (ValueError, ZeroDivisionError) as exc:
        raise CarrierMismatch(f"cannot decode {text!r} as an element of {carrier}") from exc
