import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from acyclic_matching import constructions as cons
from acyclic_matching.certificates import verify_certificate
from acyclic_matching.errors import ConstructionUnavailable, InvalidArgument, InvalidOrder, InvalidWindow
from acyclic_matching.group_core import cyclic, is_prime
from acyclic_matching.matching_core import (
    enumerate_matchings,
    invert,
    is_matching,
    make_matching,
    orbits,
    profile,
    profiles_equal,
)

Z7 = cyclic(7)
PRIMES = [p for p in range(7, 60) if is_prime(p)]


def as_map(pairs):
    return dict(pairs)


def test_qr_small_cases():
    c = cons.qr_witness(7)
    assert c.generator["a"] == 2 and c.generator["b"] == 4
    assert as_map(c.f) == {1: 2, 2: 4, 4: 1}
    assert as_map(c.g) == {1: 4, 2: 1, 4: 2}
    c = cons.qr_witness(11)
    assert (c.generator["a"], c.generator["b"]) == (1, 5)
    assert list(c.A) == [1, 3, 4, 5, 9]
    for p in (5, 3, 9, 15):
        with pytest.raises(ConstructionUnavailable):
            cons.qr_witness(p)


@pytest.mark.parametrize("p", PRIMES)
def test_qr_witness_independent_check(p):
    c = cons.qr_witness(p)
    squares = {n * n % p for n in range(1, p)}
    assert set(c.A) == squares and len(c.A) == (p - 1) // 2
    f, g = as_map(c.f), as_map(c.g)
    assert f != g
    for m in (f, g):
        assert sorted(m.values()) == sorted(c.A)
        assert all((a + b) % p not in squares for a, b in m.items())
    # multiset of sums
    assert sorted((a + b) % p for a, b in f.items()) == sorted((a + b) % p for a, b in g.items())
    assert verify_certificate(c)[0]


def test_cycle_family_examples():
    c = cons.cycle_witness(11, 8)
    assert list(c.A) == list(range(2, 10))
    assert {(a + b) % 11 for a, b in c.f} <= {0, 1, 10}
    f = as_map(c.f)
    assert f == {4: 7, 7: 4, 5: 6, 6: 5, 3: 8, 8: 2, 2: 9, 9: 3}
    c = cons.cycle_witness(7, 4)
    assert as_map(c.f) == {3: 4, 4: 2, 2: 5, 5: 3}
    assert sorted((a + b) % 7 for a, b in c.f) == [0, 0, 1, 6]
    c = cons.cycle_witness(7, 3)
    assert as_map(c.f) == {1: 2, 2: 4, 4: 1}
    with pytest.raises(InvalidOrder):
        cons.cycle_witness(7, 5)


@pytest.mark.parametrize("p", [7, 11, 13, 17, 19])
def test_cycle_witnesses_all_k(p):
    for k in range(3, p - 2):
        c = cons.cycle_witness(p, k)
        assert len(c.A) == k
        f = make_matching(cyclic(p), c.A, c.B, as_map(c.f))
        g = make_matching(cyclic(p), c.A, c.B, as_map(c.g))
        assert g == invert(f) and f != g
        assert profiles_equal(f, g)
        assert not c.generator.get("fallback")
        assert verify_certificate(c)[0]


@pytest.mark.parametrize("p", [5, 7, 11])
def test_involution_check(p):
    rep = cons.involution_check(p)
    assert rep.passed and rep.subsets_checked == p - 1


def test_involution_oracle_p5():
    # A = {1,2,3} in Z_5 has the single matching 1->3, 2->2, 3->1
    ms = list(enumerate_matchings(cyclic(5), [1, 2, 3], [1, 2, 3]))
    assert len(ms) == 1 and ms[0].mapping == {1: 3, 2: 2, 3: 1}
    assert max(len(c) for c in orbits(ms[0]).cycles) == 2


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_unique_matching(p):
    rep = cons.unique_matching_check(p)
    assert rep.passed and rep.matchings_checked == 1


def test_window_examples():
    assert cons.WINDOW_VARIANTS == ("dyadic", "integer", "rational")
    m = cons.window_model("rational")
    a = Fraction(6)
    assert a + (a + m.f_shift) == 13
    b = a + m.phi_shift
    assert b == 4 and b + (b + m.g_shift) == 13
    m = cons.window_model("integer")
    assert -2 + (-2 + m.f_shift) == -3
    assert 0 + (0 + m.g_shift) == -3 and -2 + m.phi_shift == 0
    m = cons.window_model("dyadic")
    a = Fraction(3)
    assert m.in_domain(a) and a + (a + m.f_shift) == 7
    assert a + m.phi_shift == 0 and 0 + m.g_shift == 7
    assert m.in_domain(Fraction(3, 2))


@pytest.mark.parametrize("variant", cons.WINDOW_VARIANTS)
@pytest.mark.parametrize("window", [8, 40, 48, 200])
def test_window_witness(variant, window):
    rep = cons.check_window(variant, window)
    assert rep.passed and not rep.violations
    cert = cons.window_witness(variant, window)
    assert verify_certificate(cert)[0]


def test_window_too_small():
    with pytest.raises(InvalidWindow):
        cons.check_window("integer", 7)
    with pytest.raises(InvalidArgument):
        cons.window_model("bogus")


def test_pairing_examples():
    c = cons.qr_witness(7)
    f = make_matching(Z7, c.A, c.B, as_map(c.f))
    g = make_matching(Z7, c.A, c.B, as_map(c.g))
    phi = cons.build_pairing(f, g)
    assert phi == {1: 2, 2: 4, 4: 1}
    assert cons.verify_pairing(f, g, phi)
    ident = {a: a for a in c.A}
    assert cons.build_pairing(f, f) == ident
    assert cons.verify_pairing(f, f, ident)
    assert not cons.verify_pairing(f, g, ident)
    h = make_matching(Z7, [1, 2], [3, 4], {1: 3, 2: 4})
    k = make_matching(Z7, [1, 2], [3, 4], {1: 4, 2: 3})
    assert not profiles_equal(h, k)
    assert cons.build_pairing(h, k) is None


def _shuffled_pair(p, k, rng):
    # rejection-sample a random matching of size k
    Zp = cyclic(p)
    for _ in range(200):
        A = sorted(rng.sample(range(p), k))
        B = sorted(rng.sample(range(p), k))
        perm = B[:]
        rng.shuffle(perm)
        fmap = dict(zip(A, perm))
        if is_matching(Zp, A, B, fmap):
            return make_matching(Zp, A, B, fmap)
    return None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([11, 13]), st.integers(1, 6), st.integers(0, 10**6))
def test_pairing_identity_iff_equal_profiles(p, k, seed):
    rng = random.Random(seed)
    f = _shuffled_pair(p, k, rng)
    if f is None:
        return
    for g in enumerate_matchings(f.carrier, f.domain, f.codomain):
        phi = cons.build_pairing(f, g)
        assert (phi is not None) == profiles_equal(f, g)
        if phi is not None:
            assert cons.verify_pairing(f, g, phi)
            assert sorted(phi) == sorted(f.domain) and sorted(phi.values()) == sorted(f.domain)


def test_failure_witness():
    c = cons.failure_witness(Z7, 4)
    assert c is not None and c.kind == "failure" and verify_certificate(c)[0]
    assert cons.failure_witness(cyclic(5), 3) is None


def test_pairing_witness_kind():
    c = cons.pairing_witness(13, 5)
    assert c.kind == "pairing" and verify_certificate(c)[0]
    assert profile(make_matching(cyclic(13), c.A, c.B, as_map(c.f))).same_counts(
        profile(make_matching(cyclic(13), c.A, c.B, as_map(c.g)))
    )
