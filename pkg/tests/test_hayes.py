import itertools
import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings

from ffmv.cyclotomic import ONE, ZERO, RootOfUnity, counts_to_complex, cyclotomic_polynomial, reduce_counts
from ffmv.errors import DegreeTooSmall, GroupTooLarge, NotMonic, ZeroModulus
from ffmv.ffpoly import PolyRing
from ffmv.hayes import (CharacterGroup, HayesClass, UnitGroup, characters, class_mul, class_of,
                        evaluate, gap_set, split_character, verify_orthogonality)

F2, F3, F4 = PolyRing.of(2), PolyRing.of(3), PolyRing.of(4)
T = (0, 1)
SMALL = [(F2, 0, T), (F2, 1, (1,)), (F2, 2, (1, 1)), (F2, 1, (1, 1, 1)), (F2, 0, (0, 0, 1, 1)),
         (F3, 0, T), (F3, 1, T), (F3, 0, (1, 0, 1)), (F3, 1, (2, 0, 1)), (F4, 1, T), (F4, 0, (1, 1, 1))]
IDS = [f"q{r.q}-l{l}-M{''.join(map(str, M))}" for r, l, M in SMALL]


def test_class_of_examples():
    assert class_of(F2, (0, 1, 1), 1, T) == HayesClass((1,), ())
    assert class_of(F3, (2, 1), 0, T).residue == (2,)
    assert class_of(F2, T, 2, (1,)).top == (0, 0)
    with pytest.raises(ZeroModulus):
        class_of(F2, T, 0, ())
    with pytest.raises(NotMonic):
        class_of(F3, (1, 2), 0, T)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=5), st.lists(st.integers(0, 2), max_size=5),
       st.integers(0, 4), st.sampled_from([(1,), T, (1, 0, 1), (2, 1, 1)]))
def test_class_of_is_multiplicative(a, b, ell, M):
    f, g = F3.poly(a + [1]), F3.poly(b + [1])
    lhs = class_of(F3, F3.mul(f, g), ell, M)
    rhs = class_mul(F3, class_of(F3, f, ell, M), class_of(F3, g, ell, M), M)
    assert lhs == rhs


def test_unit_group_examples():
    assert UnitGroup(F3, 0, T).orders == [2]
    assert UnitGroup(F2, 1, (1,)).orders == [2]
    g = UnitGroup(F3, 1, T)
    assert g.order == 6 and math.prod(g.orders) == 6
    # (T + 1)^2 = T^2 + 1 has next-to-leading coefficient 0
    assert class_of(F2, F2.mul((1, 1), (1, 1)), 1, (1,)).top == (0,)


@pytest.mark.parametrize("ring,ell,M", SMALL, ids=IDS)
def test_unit_group_decomposition(ring, ell, M):
    """Exponent vectors are a group isomorphism onto prod Z/d_i, checked on all pairs."""
    U = UnitGroup(ring, ell, M)
    classes = U.classes()
    assert len(classes) == ring.q**ell * ring.euler_phi(M) == math.prod(U.orders)
    logs = [U.dlog(c) for c in classes]
    assert len(set(logs)) == len(logs)
    for x, y in itertools.product(classes, repeat=2):
        want = tuple((a + b) % d for a, b, d in zip(U.dlog(x), U.dlog(y), U.orders))
        assert U.dlog(U.mul(x, y)) == want
    for g, d in zip(U.generators, U.orders):
        v = U.dlog(g)
        assert sum(v) == 1 and max(v) == 1 and v[U.generators.index(g)] == 1


def test_group_budget(monkeypatch):
    monkeypatch.setenv("FFMV_BUDGET", "max_group=10")
    with pytest.raises(GroupTooLarge):
        UnitGroup(F2, 4, (1,))


def test_character_examples():
    chars = characters(F3, 0, T)
    assert len(chars) == 2 and chars[0].is_trivial and chars[1].order == 2
    assert len(characters(F2, 0, (1, 1, 1))) == 3
    quad = chars[1]
    assert evaluate(quad, (2, 1)) == RootOfUnity(1, 2)
    assert complex(evaluate(quad, (2, 1))) == pytest.approx(-1)
    assert evaluate(chars[0], (1, 1)) == ONE
    assert evaluate(quad, (0, 1)) == ZERO


@pytest.mark.parametrize("ring,ell,M", SMALL, ids=IDS)
def test_characters_multiplicative_and_class_functions(ring, ell, M):
    g = CharacterGroup(ring, ell, M)
    assert len(g) == ring.q**ell * ring.euler_phi(M)
    assert g.trivial.is_trivial and all(c.order >= 2 for c in g.nontrivial())
    n = ell + g.deg_M + 1
    polys = ring.monic_list(n)
    # value depends only on the class
    by_class = {}
    for f in polys:
        by_class.setdefault(class_of(ring, f, ell, M), set()).add(tuple(str(c(f)) for c in g))
    assert all(len(v) == 1 for v in by_class.values())
    small = [f for m in range(3) for f in ring.monic_list(m)]
    for c in g.characters[:6]:
        for f, h in itertools.product(small, repeat=2):
            assert c(ring.mul(f, h)) == c(f) * c(h)
        for f in small:
            assert (c(f) == ZERO) == (ring.gcd(f, M) != ring.one)


def test_character_group_structure():
    g = CharacterGroup(F3, 1, (2, 0, 1))
    for a, b in itertools.product(g.characters[:8], repeat=2):
        prod = a * b
        for f in F3.monic_list(3)[:20]:
            assert prod(f) == a(f) * b(f)
    assert all(c * c.conj() == g.trivial for c in g)
    assert g.characters[5] ** g.characters[5].order == g.trivial


def test_gap_set_examples():
    g = CharacterGroup(F2, 0, T)
    assert gap_set(g, HayesClass((), (1,)), 2) == [(1, 0, 1), (1, 1, 1)]
    g = CharacterGroup(F2, 1, (1,))
    assert gap_set(g, HayesClass((0,), ()), 2) == [(0, 0, 1), (1, 0, 1)]
    with pytest.raises(DegreeTooSmall):
        gap_set(CharacterGroup(F2, 2, T), HayesClass((0, 0), (1,)), 2)


@pytest.mark.parametrize("ring,ell,M", SMALL, ids=IDS)
def test_gap_sets_partition(ring, ell, M):
    g = CharacterGroup(ring, ell, M)
    n = ell + g.deg_M + 1
    sets = [gap_set(g, A, n) for A in g.units.classes()]
    size = ring.q ** (n - ell - g.deg_M)
    assert all(len(s) == size for s in sets)
    union = sorted(f for s in sets for f in s)
    coprime = [f for f in ring.monic_list(n) if ring.gcd(f, M) == ring.one]
    assert union == sorted(coprime)


def test_orthogonality_examples():
    rep = verify_orthogonality(CharacterGroup(F3, 0, T), exact=True)
    assert rep.ok
    g = CharacterGroup(F2, 1, (1,))
    assert abs(sum(g.values[:, 1])) < 1e-12
    assert verify_orthogonality(g).ok


@pytest.mark.parametrize("ring,ell,M", SMALL, ids=IDS)
def test_orthogonality_exact_and_complex(ring, ell, M):
    g = CharacterGroup(ring, ell, M)
    assert verify_orthogonality(g, exact=True).ok
    rep = verify_orthogonality(g, n=ell + g.deg_M + 1)
    assert max(rep.ortho1_err, rep.ortho2_err, rep.orthouse_err) < 1e-9


@pytest.mark.parametrize("ring,ell,M", SMALL, ids=IDS)
def test_characters_split(ring, ell, M):
    g = CharacterGroup(ring, ell, M)
    si, dr = CharacterGroup(ring, ell, ring.one), CharacterGroup(ring, 0, M)
    for c in g:
        a, b = split_character(c, si, dr)
        for f in ring.monic_list(ell + g.deg_M):
            if ring.gcd(f, M) == ring.one:
                assert c(f) == a(f) * b(f)


def test_exact_counts_reduce_to_complex_sum():
    g = CharacterGroup(F3, 1, (1, 0, 1))
    idx = g.units.monic_indices(4)
    for i in range(0, len(g), 7):
        counts = g.exact_sum_counts(i, idx)
        assert counts_to_complex(counts, g.N) == pytest.approx(g.char_sums(idx)[i], abs=1e-9)


def test_cyclotomic_reduction():
    # 1 + z + z^2 = 0 for a primitive cube root z
    assert reduce_counts([1, 1, 1], 3) == (0, 0)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert RootOfUnity(2, 4) == RootOfUnity(1, 2)
    assert RootOfUnity(1, 3) * RootOfUnity(2, 3) == ONE
    assert ZERO * RootOfUnity(1, 2) == ZERO


def test_table_rows_format():
    rows = CharacterGroup(F3, 0, T).table_rows()
    assert rows[0] == ["class", "chi[0,[0,1]]#(0)", "chi[0,[0,1]]#(1)"]
    assert rows[2][1:] == ["0/1", "1/2"]
    assert np.all(CharacterGroup(F2, 0, (1,)).values == 1)
