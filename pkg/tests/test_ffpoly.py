import itertools
import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from ffmv.errors import (DivisionByZero, NonPrimeP, NotMonic, ReducibleModulus, ZeroModulus,
                         ZeroPolynomial)
from ffmv.ffpoly import (FactorizationType, Field, PolyRing, count_coprime_brute,
                         parse_field_spec)

F2, F3 = PolyRing.of(2), PolyRing.of(3)
T = (0, 1)


def test_field_examples():
    assert Field(3).inv(2) == 2
    assert Field(5).add(3, 4) == 2
    f4 = Field(2, 2, (1, 1, 1))
    x = f4.from_vector((0, 1))
    assert f4.to_vector(f4.mul(x, x)) == (1, 1)


def test_field_errors():
    with pytest.raises(NonPrimeP):
        Field(6)
    with pytest.raises(ReducibleModulus):
        Field(2, 2, (1, 0, 1))     # x^2 + 1 = (x + 1)^2 over F_2
    with pytest.raises(DivisionByZero):
        Field(7).inv(0)


@pytest.mark.parametrize("spec", ["q=4", "q=8", "q=9:p=3,k=2,mod=[1,0,1]", "q=25", "7"])
def test_field_axioms_exhaustive(spec):
    F = parse_field_spec(spec)
    q = F.q
    for a, b, c in itertools.product(range(q), repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in range(1, q):
        assert F.mul(a, F.inv(a)) == 1
    # the multiplicative group is cyclic of order q - 1
    orders = []
    for a in range(1, q):
        x, k = a, 1
        while x != 1:
            x, k = F.mul(x, a), k + 1
        orders.append(k)
    assert max(orders) == q - 1


def test_field_spec_roundtrip():
    F = parse_field_spec("q=9:p=3,k=2,mod=[1,0,1]")
    assert (F.p, F.k, F.modulus) == (3, 2, (1, 0, 1))
    assert parse_field_spec(F.spec()) == F
    with pytest.raises(ValueError):
        parse_field_spec("q=8:p=3,k=2")


def test_poly_examples():
    assert F2.gcd((0, 1, 1), T) == T
    assert F3.mul((1, 1), (2, 1)) == (2, 0, 1)
    # T^3 + T + 1 = T (T^2 + 1) + 1
    assert F2.mod((1, 1, 0, 1), (1, 0, 1)) == (1,)
    assert F2.divmod((1, 1, 0, 1), (1, 0, 1)) == (T, (1,))
    with pytest.raises(DivisionByZero):
        F2.divmod((1, 1), ())
    assert F3.gcd((2, 2), ()) == (1, 1)


polys3 = st.lists(st.integers(0, 2), max_size=7).map(F3.poly)


@settings(max_examples=200, deadline=None)
@given(polys3, polys3)
def test_division_identity(f, g):
    if not g:
        return
    quo, rem = F3.divmod(f, g)
    assert F3.add(F3.mul(quo, g), rem) == f
    assert len(rem) < len(g)
    if f:
        assert F3.degree(F3.mul(f, g)) == F3.degree(f) + F3.degree(g)


@settings(max_examples=200, deadline=None)
@given(polys3, polys3)
def test_gcd_divides_and_is_monic(f, g):
    d = F3.gcd(f, g)
    if not (f or g):
        assert d == ()
        return
    assert d[-1] == 1
    assert not F3.mod(f, d) and not F3.mod(g, d)
    _, s, t = F3.ext_gcd(f, g)
    assert F3.add(F3.mul(s, f), F3.mul(t, g)) == d


def test_enumeration_examples():
    assert F2.monic_list(1) == [(0, 1), (1, 1)]
    assert len(F3.monic_list(2)) == 9
    assert F2.monic_list(0) == [(1,)]
    assert F2.irreducibles(2) == [(1, 1, 1)]
    assert len(F3.irreducibles(2)) == 3
    assert F2.irreducibles(1) == [(0, 1), (1, 1)]
    assert F2.irreducibles(3) == [(1, 0, 1, 1), (1, 1, 0, 1)]


def necklace_count(q, n):
    """|P_n| = (1/n) sum_{d | n} mu(d) q^(n/d), with mu from integer factorization."""
    def mu(d):
        out, m, p = 1, d, 2
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                out = -out
            p += 1
        return -out if m > 1 else out
    return sum(mu(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


@pytest.mark.parametrize("q,nmax", [(2, 12), (3, 8), (4, 6), (5, 5), (9, 3)])
def test_prime_counts(q, nmax):
    ring = PolyRing.of(q)
    for n in range(1, nmax + 1):
        count = len(ring.irreducibles(n))
        assert count == necklace_count(q, n)
        assert n * count <= q**n


def test_sieve_matches_trial_division():
    for q, n in [(2, 8), (3, 5), (4, 4), (9, 2)]:
        ring = PolyRing.of(q)
        assert ring.irreducibles(n) == [f for f in ring.monic_list(n) if ring.is_irreducible(f)]
        for f in ring.monic_list(n)[::3]:
            first = next((P for d in range(1, n // 2 + 1) for P in ring.irreducibles(d) if not ring.mod(f, P)), f)
            assert ring._smallest_prime_factor(f) == first


def test_factor_examples():
    assert F2.factor((0, 1, 1)) == [((0, 1), 1), ((1, 1), 1)]
    assert F2.factor((0, 0, 1, 0, 1)) == [((0, 1), 2), ((1, 1), 2)]
    assert F3.factor((1, 2, 1)) == [((1, 1), 2)]
    with pytest.raises(NotMonic):
        F3.factor((1, 2))
    with pytest.raises(ZeroPolynomial):
        F3.factor(())


def test_factorization_type_examples():
    assert F2.factorization_type((0, 1, 1)) == FactorizationType(((1, 1), (1, 1)))
    assert F2.factorization_type((1, 1, 1)) == FactorizationType(((2, 1),))
    assert F3.factorization_type((1, 2, 1)) == FactorizationType(((1, 2),))
    assert F3.factorization_type((1,)) == FactorizationType(())


@pytest.mark.parametrize("q,nmax", [(2, 8), (3, 5), (4, 4)])
def test_unique_factorization(q, nmax):
    ring = PolyRing.of(q)
    for n in range(1, nmax + 1):
        for f in ring.monic_list(n):
            g = ring.one
            primes = []
            for P, e in ring.factor(f):
                assert ring.is_irreducible(P)
                g = ring.mul(g, ring.power(P, e))
                primes.append(P)
            assert g == f and len(set(primes)) == len(primes)
            assert ring.factorization_type(f).size == n


@pytest.mark.parametrize("q,n", [(2, 10), (3, 6), (4, 4), (5, 4), (9, 3)])
def test_type_table_matches_factor(q, n):
    ring = PolyRing.of(q)
    types, ids = ring.type_table(n)
    assert [types[i] for i in ids] == [ring.factorization_type(f) for f in ring.monic_list(n)]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=4), st.lists(st.integers(0, 2), min_size=1, max_size=4))
def test_type_of_coprime_product_is_union(a, b):
    f, g = F3.poly(a + [1]), F3.poly(b + [1])
    if F3.gcd(f, g) != F3.one:
        return
    union = F3.factorization_type(f).pairs + F3.factorization_type(g).pairs
    assert F3.factorization_type(F3.mul(f, g)) == FactorizationType(union)


def test_euler_phi_examples():
    assert F3.euler_phi(T) == 2
    assert F3.euler_phi((1, 0, 1)) == 8
    assert F2.euler_phi((0, 0, 1)) == 2
    with pytest.raises(ZeroModulus):
        F2.euler_phi(())


@pytest.mark.parametrize("q,dmax", [(2, 6), (3, 4), (4, 3)])
def test_euler_phi_against_count(q, dmax):
    ring = PolyRing.of(q)
    for d in range(dmax + 1):
        for M in ring.monic_list(d):
            assert ring.euler_phi(M) == count_coprime_brute(ring, M)


def test_coprime_class_count():
    # |M_{n;M}| = q^(n - deg M) phi(M) for n >= deg M
    for ring, dmax in ((F2, 3), (F3, 2)):
        for d in range(dmax + 1):
            for M in ring.monic_list(d):
                for n in range(d, d + 3):
                    direct = sum(ring.gcd(f, M) == ring.one for f in ring.monic_list(n))
                    assert direct == ring.q ** (n - d) * ring.euler_phi(M)


def test_text_format():
    assert F3.format((1, 0, 2)) == "[1,0,2]"
    assert F3.parse("[1,0,2]") == (1, 0, 2)
    assert F3.parse("[1,0,2,0]") == (1, 0, 2)
    F9 = PolyRing.of("q=9:p=3,k=2,mod=[1,0,1]")
    f = F9.poly([F9.field.from_vector((0, 1)), 1])
    assert F9.parse(F9.format(f)) == f
    assert F3.pretty((2, 0, 1)) == "T^2 + 2"


def test_norm_and_degree():
    assert F3.norm(()) == 0
    assert F3.norm((1, 1)) == 3
    assert F3.degree(()) == -math.inf


def test_monic_array_order():
    for ring, n in ((F2, 5), (F3, 3)):
        assert np.array_equal(ring.monic_array(n), np.array(ring.monic_list(n)))
