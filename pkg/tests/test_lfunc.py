import cmath
import math

import numpy as np
import pytest

from ffmv import lfunc
from ffmv.errors import NumericalInstability
from ffmv.ffpoly import PolyRing
from ffmv.hayes import CharacterGroup

F2, F3 = PolyRing.of(2), PolyRing.of(3)
T = (0, 1)
GROUPS = [(2, 2, (1,)), (2, 1, (1, 1)), (2, 0, (1, 1, 0, 1)), (2, 3, (1,)), (2, 0, (0, 0, 1, 1)),
          (3, 1, T), (3, 0, (2, 0, 1)), (3, 2, (1,)), (4, 1, (1, 1)), (5, 0, (1, 0, 1))]


def group(q, ell, M):
    return CharacterGroup(PolyRing.of(q), ell, M)


def brute_coeffs(chi, upto):
    ring = chi.group.ring
    return [sum(complex(chi(f)) for f in ring.monic_list(m)) for m in range(upto + 1)]


def test_trivial_character_rational_form():
    g = group(3, 0, T)
    L = lfunc.l_polynomial(g.trivial)
    assert L.is_rational
    assert L.numerator == (1, -1) and L.denominator == (1, -3)
    # S(n, chi_0) = q^(n - deg M) phi(M) for n >= deg M
    ser = L.series(5)
    assert [round(ser[n].real) for n in range(1, 6)] == [3 ** (n - 1) * 2 for n in range(1, 6)]
    with pytest.raises(ValueError):
        L.degree


def test_quadratic_character_mod_T():
    g = group(3, 0, T)
    L = lfunc.l_polynomial(g[1])
    assert L.degree == 0
    assert brute_coeffs(g[1], 1) == pytest.approx([1, 0])


@pytest.mark.parametrize("q,ell,M", GROUPS)
def test_coefficients_match_enumeration(q, ell, M):
    g = group(q, ell, M)
    top = ell + g.deg_M
    for c in g.nontrivial():
        L = lfunc.l_polynomial(c)
        assert L.degree <= top - 1
        brute = brute_coeffs(c, top)
        assert np.allclose(L.series(top), brute, atol=1e-9)
        assert abs(brute[top]) < 1e-9


def test_quadratic_roots_by_formula():
    """q=2, l=2, M=1: solve 1 + a u + b u^2 = (1 - g1 u)(1 - g2 u) with the quadratic formula."""
    g = group(2, 2, (1,))
    roots = lfunc.group_inverse_roots(g)
    for c in g.nontrivial():
        a, b = brute_coeffs(c, 2)[1:]
        if abs(b) < 1e-12:
            expected = [-a] if abs(a) > 1e-12 else []
        else:
            disc = cmath.sqrt(a * a - 4 * b)
            expected = [(-a + disc) / 2, (-a - disc) / 2]
        assert sorted(np.round(roots[c.index], 9).tolist(), key=lambda z: (z.real, z.imag)) == \
            pytest.approx(sorted(np.round(expected, 9).tolist(), key=lambda z: (z.real, z.imag)), abs=1e-8)
        assert all(min(abs(abs(z) - 1), abs(abs(z) - math.sqrt(2))) < 1e-6 for z in expected)


def test_inverse_roots_examples():
    assert len(lfunc.inverse_roots([1.0]).gammas) == 0
    r = lfunc.inverse_roots([1.0, -1.0])
    assert r.gammas == pytest.approx([1.0])


def test_rh_negative_control():
    assert lfunc.verify_rh_coeffs([1.0, -1.0], 2).ok
    assert not lfunc.verify_rh_coeffs([1.0, 0.5], 2).ok
    assert lfunc.rh_check([], 3).ok


@pytest.mark.parametrize("q,ell,M", GROUPS)
def test_rh_and_reconstruction(q, ell, M):
    g = group(q, ell, M)
    for c in g.nontrivial():
        rep = lfunc.verify_rh(c)
        assert rep.ok, (c.ident, rep.moduli)
        L = lfunc.l_polynomial(c)
        assert len(lfunc.group_inverse_roots(g)[c.index]) == L.degree
        expanded = lfunc._expand(lfunc.group_inverse_roots(g)[c.index][None, :])[0]
        assert np.allclose(expanded, L.coeffs, atol=1e-8)


def test_repeated_roots_are_located():
    """Imprimitive characters mod a square give repeated inverse roots."""
    g = group(2, 0, (0, 0, 0, 0, 1))
    worst = max(max(lfunc.verify_rh(c).deviations, default=0.0) for c in g.nontrivial())
    assert worst < 1e-9


def test_residual_guard():
    coeffs = [1.0, 0.1, 0.7, 0.3, 0.25]
    assert len(lfunc.inverse_roots(coeffs).gammas) == 4
    with pytest.raises(NumericalInstability):
        lfunc.inverse_roots(coeffs, tol=0.0)


def test_prime_char_sum_examples():
    g = group(2, 0, (1,))
    assert lfunc.prime_char_sum(g.trivial, 2) == pytest.approx(1)
    g = group(3, 0, T)
    assert lfunc.prime_char_sum(g[1], 1) == pytest.approx(0)
    for c in g:
        for n in range(1, 5):
            assert abs(lfunc.prime_char_sum(c, n)) <= len(F3.irreducibles(n)) + 1e-9


def test_prime_sum_against_direct_evaluation():
    g = group(3, 1, (1, 0, 1))
    for c in g.characters[::5]:
        for n in range(1, 4):
            direct = sum(complex(c(P)) for P in F3.irreducibles(n))
            assert lfunc.prime_char_sum(c, n) == pytest.approx(direct, abs=1e-9)


def test_prime_bound_short_interval_l3():
    g = group(2, 3, (1,))
    for c in g:
        for n in range(1, 11):
            assert lfunc.verify_prime_bound(c, n)


@pytest.mark.parametrize("q,ell,M", GROUPS)
def test_von_mangoldt_trace(q, ell, M):
    """sum_{M_n} Lambda chi = -sum gamma^n; the two sides are computed independently."""
    g = group(q, ell, M)
    nmax = 6 if q <= 3 else 3
    for n in range(1, nmax + 1):
        lam = lfunc.von_mangoldt_sums(g, n)
        for c in g.nontrivial():
            assert lam[c.index] == pytest.approx(-lfunc.root_power_sums(c, n), abs=1e-6)
            deg = lfunc.l_polynomial(c).degree
            assert abs(lam[c.index]) <= deg * q ** (n / 2) + 1e-6


@pytest.mark.parametrize("q,ell,M", GROUPS[:6])
def test_euler_product_truncation(q, ell, M):
    g = group(q, ell, M)
    for c in g:
        n = 5 if q == 2 else 4
        assert np.allclose(lfunc.euler_product_series(c, n), lfunc.character_sum_series(c, n), atol=1e-9)
