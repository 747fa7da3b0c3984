"""Witness certificates: JSON records that any checker can re-validate.

A certificate carries its payload (sets, maps, pairing) plus a ``claims``
record. :func:`recheck` recomputes every claim from the payload alone; a
certificate is valid iff the recomputed claims equal the recorded ones and
every required claim is true.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .errors import CertificateFormatError, MalformedMap, MatchingToolkitError
from .group_core import (
    GroupCarrier,
    carrier_from_descriptor,
    decode_element,
    encode_element,
)
from .matching_core import is_matching

SCHEMA_VERSION = 1

GROUP_KINDS = ("qr", "cycle", "pairing", "failure")
LINEAR_KINDS = ("linear", "transcendental")
ALL_KINDS = GROUP_KINDS + ("window",) + LINEAR_KINDS + ("lmp",)

REQUIRED = {
    **{k: ("is_matching_f", "is_matching_g", "f_ne_g", "profiles_equal", "pairing_identity_holds") for k in GROUP_KINDS},
    "window": (
        "is_matching_f",
        "is_matching_g",
        "f_ne_g",
        "pairing_identity_holds",
        "interior_profiles_equal",
        "full_domain_matching",
    ),
    "linear": ("trivial_intersection", "strong_f", "strong_g_or_h", "equivalent", "distinct"),
    "transcendental": ("trivial_intersection", "strong_f", "strong_g_or_h", "equivalent", "distinct"),
    "lmp": ("equal_dimensions", "one_not_in_B", "basis_in_A", "basis_unmatched"),
}


@dataclass
class WitnessCertificate:
    kind: str
    carrier: object
    A: tuple
    B: tuple
    f: tuple
    g: tuple
    phi: tuple | None
    claims: dict
    generator: dict = field(default_factory=dict)

    def all_claims_hold(self) -> bool:
        return all(self.claims.get(k) is True for k in REQUIRED[self.kind])

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        if self.kind in LINEAR_KINDS or self.kind == "lmp":
            carrier = self.carrier.descriptor()
            enc = lambda rows: [[self.carrier.base.encode(c) for c in row] for row in rows]  # noqa: E731
            A, B = enc(self.A), enc(self.B)
            f = enc(self.f) if self.f is not None else None
            g = enc(self.g) if self.g is not None else None
            phi = enc(self.phi) if self.phi is not None else None
        else:
            carrier = self.carrier.descriptor()
            e = lambda x: encode_element(self.carrier, x)  # noqa: E731
            A = [e(a) for a in self.A]
            B = [e(b) for b in self.B]
            f = [[e(a), e(b)] for a, b in self.f]
            g = [[e(a), e(b)] for a, b in self.g]
            phi = [[e(a), e(b)] for a, b in self.phi] if self.phi is not None else None
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "carrier": carrier,
            "A": A,
            "B": B,
            "f": f,
            "g": g,
            "phi": phi,
            "claims": dict(self.claims),
            "generator": _jsonable(self.generator),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "WitnessCertificate":
        try:
            if d.get("schema_version") != SCHEMA_VERSION:
                raise CertificateFormatError(f"unsupported schema_version {d.get('schema_version')!r}")
            kind = d["kind"]
            if kind not in ALL_KINDS:
                raise CertificateFormatError(f"unknown certificate kind {kind!r}")
            if kind in LINEAR_KINDS or kind == "lmp":
                from .fields import tower_from_descriptor

                tower = tower_from_descriptor(d["carrier"])
                dec = lambda rows: (  # noqa: E731
                    None if rows is None else tuple(tuple(tower.base.decode(c) for c in row) for row in rows)
                )
                return cls(kind, tower, dec(d["A"]), dec(d["B"]), dec(d["f"]), dec(d["g"]), dec(d["phi"]),
                           dict(d["claims"]), dict(d.get("generator") or {}))
            carrier = carrier_from_descriptor(d["carrier"])
            x = lambda s: decode_element(carrier, s)  # noqa: E731
            pairs = lambda ps: tuple((x(a), x(b)) for a, b in ps)  # noqa: E731
            return cls(
                kind,
                carrier,
                tuple(x(a) for a in d["A"]),
                tuple(x(b) for b in d["B"]),
                pairs(d["f"]),
                pairs(d["g"]),
                pairs(d["phi"]) if d.get("phi") is not None else None,
                dict(d["claims"]),
                dict(d.get("generator") or {}),
            )
        except CertificateFormatError:
            raise
        except (KeyError, TypeError, ValueError, MatchingToolkitError) as exc:
            raise CertificateFormatError(f"malformed certificate: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "WitnessCertificate":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateFormatError(f"not valid JSON: {exc}") from exc
        if not isinstance(d, dict):
            raise CertificateFormatError("certificate must be a JSON object")
        return cls.from_dict(d)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    return str(obj)


# -- claim recomputation ---------------------------------------------------

def _matching_ok(carrier, A, B, pairs) -> bool:
    try:
        return is_matching(carrier, A, B, pairs).ok
    except MalformedMap:
        return False


def _sum_counts(carrier, pairs) -> Counter:
    return Counter(carrier.add(a, b) for a, b in pairs)


def _pairing_ok(carrier: GroupCarrier, A, f: dict, g: dict, phi) -> bool:
    if phi is None:
        return False
    phi = dict(phi)
    Aset = set(A)
    if set(phi) != Aset or set(phi.values()) != Aset:
        return False
    if set(f) != Aset or set(g) != Aset:
        return False
    add = carrier.add
    return all(add(a, f[a]) == add(phi[a], g[phi[a]]) for a in A)


def group_claims(carrier, A, B, f, g, phi) -> dict:
    fmap, gmap = dict(f), dict(g)
    return {
        "is_matching_f": _matching_ok(carrier, A, B, f),
        "is_matching_g": _matching_ok(carrier, A, B, g),
        "f_ne_g": fmap != gmap,
        "profiles_equal": _sum_counts(carrier, f) == _sum_counts(carrier, g),
        "pairing_identity_holds": _pairing_ok(carrier, A, fmap, gmap, phi),
    }


def _injective_on_window(carrier, A, pairs) -> bool:
    keys = [a for a, _ in pairs]
    if sorted(keys) != sorted(A) or len(set(keys)) != len(keys):
        return False
    images = [b for _, b in pairs]
    if len(set(images)) != len(images):
        return False
    Aset = set(A)
    return all(carrier.add(a, b) not in Aset for a, b in pairs)


def window_claims(carrier, A, f, g, phi) -> dict:
    """Claims for a windowed witness on a torsion-free carrier.

    The pairing is only defined on the window interior, so the identity and
    the sum multisets are compared over the pairs listed in ``phi``.
    """
    fmap, gmap = dict(f), dict(g)
    phi = tuple(phi or ())
    Aset = set(A)
    pmap = dict(phi)
    pairing_ok = (
        bool(phi)
        and len(pmap) == len(phi)
        and len(set(pmap.values())) == len(pmap)
        and all(a in Aset and b in Aset for a, b in phi)
        and all(carrier.add(a, fmap[a]) == carrier.add(b, gmap[b]) for a, b in phi)
    )
    interior_equal = pairing_ok and (
        Counter(carrier.add(a, fmap[a]) for a in pmap) == Counter(carrier.add(b, gmap[b]) for b in pmap.values())
    )
    return {
        "is_matching_f": _injective_on_window(carrier, A, f),
        "is_matching_g": _injective_on_window(carrier, A, g),
        "f_ne_g": fmap != gmap,
        "pairing_identity_holds": pairing_ok,
        "interior_profiles_equal": interior_equal,
    }


def _window_full_domain(cert) -> bool:
    from .constructions import window_model

    try:
        model = window_model(cert.generator.get("variant"))
    except MatchingToolkitError:
        return False
    if model.carrier != cert.carrier:
        return False
    if not all(model.in_domain(a) for a in cert.A):
        return False
    return not any(model.in_domain(cert.carrier.add(a, b)) for a, b in tuple(cert.f) + tuple(cert.g))


def _linear_recheck(cert) -> dict:
    from . import linear_core as lc

    tower = cert.carrier
    A = lc.span(tower, cert.A)
    if tuple(A.rows) != tuple(cert.A) or cert.B is None:
        return {k: False for k in REQUIRED[cert.kind]}
    B = lc.span(tower, cert.B)
    if tuple(B.rows) != tuple(cert.B) or A.dim != B.dim or A.dim == 0:
        return {k: False for k in REQUIRED[cert.kind]}
    try:
        f = lc.LinearMap(A, B, cert.f)
        h = lc.LinearMap(A, B, cert.g)
        phi = lc.LinearMap(A, A, cert.phi)
        if not (f.is_invertible() and h.is_invertible() and phi.is_invertible()):
            raise ValueError("maps must be isomorphisms")
        return lc.linear_claims(f, h, phi, pointwise="equivalent_pointwise" in cert.claims)
    except (ValueError, TypeError, MatchingToolkitError):
        return {k: False for k in REQUIRED[cert.kind]}


def _lmp_recheck(cert) -> dict:
    from . import linear_core as lc

    tower = cert.carrier
    A = lc.span(tower, cert.A)
    B = lc.span(tower, cert.B)
    basis = cert.f or ()
    in_A = len(basis) == A.dim and all(A.contains(v) for v in basis)
    try:
        unmatched = in_A and not lc.basis_matched_somewhere(A, basis, B)
    except MatchingToolkitError:
        in_A, unmatched = False, False
    return {
        "equal_dimensions": A.dim == B.dim == len(cert.A) == len(cert.B) and A.dim > 0,
        "one_not_in_B": not B.contains(tower.one()),
        "basis_in_A": in_A,
        "basis_unmatched": unmatched,
    }


def recheck(cert: WitnessCertificate) -> dict:
    """Recompute every claim from the payload."""
    if cert.kind in GROUP_KINDS:
        return group_claims(cert.carrier, cert.A, cert.B, cert.f, cert.g, cert.phi)
    if cert.kind == "window":
        claims = window_claims(cert.carrier, cert.A, cert.f, cert.g, cert.phi)
        claims["full_domain_matching"] = _window_full_domain(cert)
        return claims
    if cert.kind in LINEAR_KINDS:
        return _linear_recheck(cert)
    return _lmp_recheck(cert)


def verify_certificate(cert: WitnessCertificate) -> tuple[bool, dict]:
    claims = recheck(cert)
    consistent = all(cert.claims.get(k) == v for k, v in claims.items())
    required = all(claims.get(k) is True for k in REQUIRED[cert.kind])
    return consistent and required, claims


# -- builders for linear kinds ---------------------------------------------

def linear_certificate(w) -> WitnessCertificate:
    kind = "linear" if w.tower.is_finite else "transcendental"
    gen = {"m": w.m, "branch": w.branch, "c": w.tower.base.encode(w.c) if w.c is not None else None}
    if w.tower.is_finite:
        gen.update({"p": w.tower.p, "n": w.tower.n})
    return WitnessCertificate(
        kind=kind,
        carrier=w.tower,
        A=w.A.rows,
        B=w.f.codomain.rows,
        f=w.f.matrix,
        g=w.h.matrix,
        phi=w.phi.matrix,
        claims=dict(w.claims),
        generator=gen,
    )


def lmp_certificate(tower, ce) -> WitnessCertificate:
    cert = WitnessCertificate(
        kind="lmp",
        carrier=tower,
        A=ce.A.rows,
        B=ce.B.rows,
        f=tuple(ce.basis),
        g=None,
        phi=None,
        claims={},
        generator={"p": tower.p, "n": tower.n},
    )
    cert.claims = recheck(cert)
    return cert
