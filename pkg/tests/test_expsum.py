import math

import numpy as np
import pytest

from ffmv import expsum, lfunc, meanval
from ffmv.errors import DomainError
from ffmv.ffpoly import FactorizationType, PolyRing
from ffmv.hayes import CharacterGroup

F2, F3 = PolyRing.of(2), PolyRing.of(3)


def test_z_params_and_threshold():
    for q in (2, 3, 4, 5):
        for d in range(1, 8):
            z = expsum.z_params(q, d, 1, 2)
            assert 0 < z.z1 <= z.z2 == q**d / d
    assert expsum.log_threshold(2, 4) == 4      # 2^4 = 4^2 sits on the boundary
    assert expsum.log_threshold(3, 2) == 1
    assert expsum.log_threshold(5, 2) == 0
    for t in (2, 3, 4, 7):
        for r in range(2, 40):
            val = 2 * math.log(r) / math.log(t)
            if abs(val - round(val)) > 1e-9:
                assert expsum.log_threshold(t, r) == math.floor(val)
    assert expsum.BoundConfig(2, 1, 1, 5, 2).threshold == 3


@pytest.mark.parametrize("q,n", [(2, 8), (3, 5), (4, 4)])
def test_omega_types_are_the_realized_types(q, n):
    ring = PolyRing.of(q)
    types, _ = ring.type_table(n)
    assert sorted(expsum.ring_omega_types(ring, n)) == sorted(types)


def test_s_omega_examples():
    g = CharacterGroup(F2, 0, (1,))
    assert expsum.s_omega(g.trivial, FactorizationType(((1, 1), (1, 1)))) == pytest.approx(1)
    g = CharacterGroup(F3, 1, (0, 1))
    for n in range(1, 4):
        for c in g:
            assert expsum.s_omega(c, FactorizationType(((n, 1),))) == pytest.approx(lfunc.prime_char_sum(c, n))


@pytest.mark.parametrize("q,ell,M,nmax", [(2, 1, (1,), 6), (2, 0, (1, 1, 1), 6), (3, 1, (1,), 4), (3, 0, (0, 1), 4),
                                          (4, 0, (1, 1), 3)])
def test_product_formula_matches_enumeration(q, ell, M, nmax):
    g = CharacterGroup(PolyRing.of(q), ell, M)
    for n in range(1, nmax + 1):
        assert expsum.cross_check_types(g, n) < 1e-9


def test_type_sum_by_brute_force():
    """Enumeration through factor() alone, no type table or class index."""
    g = CharacterGroup(F2, 1, (1, 1))
    n = 4
    for omega in expsum.ring_omega_types(F2, n):
        for c in g:
            brute = sum(complex(c(f)) for f in F2.monic_list(n) if F2.factorization_type(f) == omega)
            assert expsum.type_sum_product(g, omega)[c.index] == pytest.approx(brute, abs=1e-9)


def test_omega_abs_sum():
    g = CharacterGroup(F2, 2, (1,))
    for c in g.nontrivial():
        assert expsum.omega_abs_sum(c, 1) == pytest.approx(abs(lfunc.prime_char_sum(c, 1)))
    for n in range(1, 9):
        prod = expsum.omega_abs_sums(g, n)
        assert np.allclose(prod, expsum.omega_abs_sums(g, n, method="direct"), atol=1e-9)
        assert np.all(prod[1:] <= expsum.proof_rhs(2, 2, 0, n))


def test_sum_2x_examples():
    main, _ = expsum.sum_2x_bound(1, 3.0)
    assert (main.lhs, main.rhs, main.ok) == (6.0, 24.0, True)
    main, parts = expsum.sum_2x_bound(6, 2.0)
    assert main.lhs == 320 and main.rhs == 512 and main.ok
    assert set(parts) == {2, 3, 6} and all(p.ok for p in parts.values())
    assert expsum.sum_2x_bound(12, math.e)[0].ok
    with pytest.raises(DomainError):
        expsum.sum_2x_bound(3, 1.5)


def test_sum_2x_variant_examples():
    assert expsum.sum_2x_variant(1, 2.0).lhs == 0
    c = expsum.sum_2x_variant(4, 2.0)
    assert (c.lhs, c.rhs, c.ok) == (48.0, 112.0, True)
    assert expsum.sum_2x_variant(9, math.sqrt(3)).ok
    with pytest.raises(DomainError):
        expsum.sum_2x_variant(4, 2.5)


def test_finite_sum_grids():
    for n in range(1, 41):
        for x in (2.0, 2.5, math.e, 3.0, 5.0, 10.0):
            main, parts = expsum.sum_2x_bound(n, x)
            assert main.ok and all(p.ok for p in parts.values())
        for x in expsum.VARIANT_XS:
            assert expsum.sum_2x_variant(n, x).ok
    for n in range(1, 61):
        assert expsum.binom3_bound(n).ok


def test_binom3_examples():
    c = expsum.binom3_bound(1)
    assert c.lhs == 2 and c.rhs == pytest.approx(9.8)
    c = expsum.binom3_bound(9)
    assert c.lhs == 130 and c.ok


def exp_by_powers(a, n):
    """exp of a power series with zero constant term as sum_k A^k / k!, truncated."""
    A = np.array(a[: n + 1], dtype=float)
    out = np.zeros(n + 1)
    out[0] = 1.0
    term = np.zeros(n + 1)
    term[0] = 1.0
    for k in range(1, n + 1):
        term = np.convolve(term, A)[: n + 1] / k
        out += term
    return out


def test_exp_series_against_power_expansion():
    for t, r in ((2, 3), (3, 5), (4, 10)):
        a = expsum.genfunc_log_coeffs(t, r, 15)
        assert np.allclose(expsum.exp_series(a, 15), exp_by_powers(a, 15), rtol=1e-12)


def test_genfunc_examples():
    for t in (2, 3, 4):
        for r in range(2, 11):
            rep = expsum.genfunc_coeff_bounds(t, r, 1)
            if expsum.log_threshold(t, r) >= 1:
                assert rep.coeff == pytest.approx(10 * t)
            for n in range(1, 21):
                assert expsum.genfunc_coeff_bounds(t, r, n).binom_ok


def test_large_r_branch():
    assert not expsum.cool_hypothesis(2, 19999)
    assert expsum.cool_hypothesis(2, 20000)
    for t in (2, 3, 4):
        for n in (1, 5, 10, 30):
            rep = expsum.genfunc_coeff_bounds(t, 20000, n)
            assert rep.cool_ok


def test_log_h_coefficients():
    for q in (2, 3, 4, 5, 7):
        for ell, deg_M in ((0, 1), (1, 1), (2, 3), (4, 0)):
            for order in (2, 3, 5, 12):
                assert expsum.check_log_h(q, ell, deg_M, order, 40) <= 1.0


def test_expothm_moebius_short_interval():
    g = CharacterGroup(F2, 1, (1,))
    for n in range(1, 11):
        for c in g.nontrivial():
            rep = expsum.verify_expothm(c, n, meanval.MOEBIUS)
            assert rep.ok and rep.chain_ok and rep.proof_ok


def test_expothm_constant_function_sums_vanish():
    g = CharacterGroup(F3, 1, (0, 1))
    for n in range(2, 6):
        for c in g.nontrivial():
            rep = expsum.verify_expothm(c, n, meanval.ONE)
            assert rep.lhs < 1e-9 and rep.ok


def test_expothm_von_mangoldt_trace_bound():
    g = CharacterGroup(F2, 2, (1, 1))
    for n in range(3, 8):
        sums, _ = expsum.alpha_char_sums(g, n, meanval.LAMBDA)
        for c in g.nontrivial():
            assert expsum.verify_expothm(c, n, meanval.LAMBDA).ok
            deg = lfunc.l_polynomial(c).degree
            assert abs(sums[c.index]) <= deg * 2 ** (n / 2) + 1e-9


def test_expothm_rejects_trivial_character():
    g = CharacterGroup(F2, 1, (1,))
    with pytest.raises(ValueError):
        expsum.verify_expothm(g.trivial, 3, meanval.MOEBIUS)
