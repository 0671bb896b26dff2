"""Factorization functions and their means and variances over short intervals,
arithmetic progressions and generalized progressions (GAPs).

A GAP is one class of M_n under R_{l,M}.  Every quantity here is computed
twice: once by summing over polynomials directly, once from character sums
S(n, alpha chi) through orthogonality.
"""
import math
from dataclasses import asdict, dataclass
from functools import partial

import numpy as np

from .errors import CrossCheckMismatch, DegreeConstraintViolated, NotCoprime
from .expsum import alpha_char_sums, upper_rhs
from .hayes import CharacterGroup


@dataclass(frozen=True)
class FactorizationFunction:
    """An arithmetic function whose value depends only on the factorization type."""

    name: str
    rule: callable

    def __call__(self, omega):
        return self.rule(omega)

    def values(self, ring, n):
        """alpha(f) for every f in ring.monic_list(n), in order."""
        types, ids = ring.type_table(n)
        return np.array([self.rule(t) for t in types], dtype=complex)[ids]

    def max_abs(self, ring, n, M=None):
        """max |alpha(f)| over f in M_n coprime to M."""
        vals = np.abs(self.values(ring, n))
        if M is not None and len(M) > 1:
            vals = vals[_coprime_mask(ring, n, M)]
        return float(vals.max()) if len(vals) else 0.0


def _coprime_mask(ring, n, M):
    mask = np.ones(ring.q**n, dtype=bool)
    C = ring.monic_array(n)
    for P, _ in ring.factor(ring.monic(M)):
        mask &= np.any(ring.residues_array(C, P), axis=1)
    return mask


def _von_mangoldt(omega):
    return omega.pairs[0][0] if len(omega.pairs) == 1 else 0


def _moebius(omega):
    if any(e > 1 for _, e in omega.pairs):
        return 0
    return -1 if len(omega.pairs) % 2 else 1


def _moebius_sq(omega):
    return 0 if any(e > 1 for _, e in omega.pairs) else 1


def _divisor_k(k, omega):
    return math.prod(math.comb(e + k - 1, k - 1) for _, e in omega.pairs)


def divisor_degree_counts(omega):
    """c[i] = number of monic divisors of degree i of a polynomial of type omega.

    Each prime of degree d and exponent e contributes a factor
    1 + u^d + ... + u^(d e).
    """
    counts = np.zeros(omega.size + 1, dtype=np.int64)
    counts[0] = 1
    for d, e in omega.pairs:
        nxt = np.zeros_like(counts)
        for j in range(e + 1):
            nxt[d * j:] += counts[: len(counts) - d * j]
        counts = nxt
    return counts


def _has_divisor_deg(d, omega):
    c = divisor_degree_counts(omega)
    return int(0 <= d < len(c) and c[d] > 0)


def _hooley_delta(omega):
    return int(divisor_degree_counts(omega).max())


LAMBDA = FactorizationFunction("lambda", _von_mangoldt)
MOEBIUS = FactorizationFunction("mu", _moebius)
MOEBIUS_SQ = FactorizationFunction("mu2", _moebius_sq)
HOOLEY_DELTA = FactorizationFunction("hooley_delta", _hooley_delta)
ONE = FactorizationFunction("one", lambda omega: 1)


def divisor_function(k):
    return FactorizationFunction(f"d{k}", partial(_divisor_k, k))


def has_divisor_deg(d):
    return FactorizationFunction(f"has_divisor_deg:{d}", partial(_has_divisor_deg, d))


def get_alpha(name):
    """Look up a built-in by name: lambda, mu, mu2, one, hooley_delta, d<k>, has_divisor_deg:<d>."""
    fixed = {"lambda": LAMBDA, "mu": MOEBIUS, "moebius": MOEBIUS, "mu2": MOEBIUS_SQ,
             "moebius_sq": MOEBIUS_SQ, "one": ONE, "hooley_delta": HOOLEY_DELTA}
    if name in fixed:
        return fixed[name]
    if name.startswith("has_divisor_deg:"):
        return has_divisor_deg(int(name.split(":", 1)[1]))
    if name.startswith("d") and name[1:].isdigit():
        return divisor_function(int(name[1:]))
    raise KeyError(f"unknown factorization function {name!r}")


# sums and means

def s_alpha_chi(n, alpha, chi):
    """S(n, alpha chi) = sum_{f in M_n} alpha(f) chi(f)."""
    sums, _ = alpha_char_sums(chi.group, n, alpha)
    return complex(sums[chi.index])


def mean_over(ring, n, alpha, M=None):
    """<alpha> over M_n, or over M_{n;M} when M is given."""
    vals = alpha.values(ring, n)
    if M is not None and len(M) > 1:
        vals = vals[_coprime_mask(ring, n, M)]
    return complex(np.mean(vals))


@dataclass
class GapMeans:
    brute: np.ndarray      # per unit class
    formula: np.ndarray    # per unit class
    main_term: complex
    max_diff: float


def gap_means(group, n, alpha, tol=1e-9):
    """Mean of alpha over every GAP of degree n: by direct summation and by characters.

    The character route is sum_chi conj(chi(A)) S(n, alpha chi) / (q^l phi(M)),
    divided by the GAP size q^(n - l - deg M).
    """
    units = group.units
    if n < group.ell + group.deg_M:
        raise DegreeConstraintViolated(f"n={n} < l + deg M")
    size = group.ring.q ** (n - group.ell - group.deg_M)
    idx = units.monic_indices(n)
    vals = alpha.values(group.ring, n)
    ok = idx >= 0
    brute = np.zeros(units.order, dtype=complex)
    np.add.at(brute, idx[ok], vals[ok])
    counts = np.bincount(idx[ok], minlength=units.order)
    if np.any(counts != size):
        raise CrossCheckMismatch("GAP sizes differ from q^(n - l - deg M)")
    brute /= size
    sums, _ = alpha_char_sums(group, n, alpha)
    formula = (group.values.conj() @ sums) / units.order / size
    main = sums[0] / units.order / size
    diff = float(np.max(np.abs(brute - formula)))
    if diff > tol:
        raise CrossCheckMismatch(f"GAP means differ by {diff:.3g}")
    return GapMeans(brute, formula, complex(main), diff)


def mean_gap(alpha, A, n, group):
    """(brute, formula) mean of alpha over GAP(A) in degree n."""
    res = gap_means(group, n, alpha)
    i = group.units.index(A)
    return complex(res.brute[i]), complex(res.formula[i])


@dataclass
class MeanReport:
    lhs_mean: complex
    ref_mean: complex
    abs_diff: float
    bound_rhs: float
    ok: bool

    def as_dict(self):
        d = asdict(self)
        for k in ("lhs_mean", "ref_mean"):
            d[k] = [d[k].real, d[k].imag]
        return d


def interval(ring, f0, h):
    """I(f0, h) within M_n: the monics agreeing with f0 in every coefficient above degree h."""
    n = len(f0) - 1
    C = ring.monic_array(n)
    mask = np.all(C[:, h + 1:] == np.asarray(f0[h + 1:]), axis=1)
    return np.flatnonzero(mask)


def mean_interval(alpha, f0, h, ring):
    """<alpha> over I(f0, h) against <alpha> over M_n, with the bound obtained by
    summing the explicit character-sum bound over the q^(n-h-1) - 1 nontrivial characters."""
    n = len(f0) - 1
    if not 0 <= h <= n - 1:
        raise DegreeConstraintViolated(f"need 0 <= h <= n-1, got h={h}, n={n}")
    if f0[-1] != 1:
        raise ValueError("f0 must be monic")
    vals = alpha.values(ring, n)
    lhs = complex(np.mean(vals[interval(ring, f0, h)]))
    ref = complex(np.mean(vals))
    ell = n - h - 1
    q = ring.q
    max_alpha = float(np.max(np.abs(vals)))
    bound = (q**ell - 1) * upper_rhs(q, ell, 0, n, max_alpha) / q**n
    diff = abs(lhs - ref)
    return MeanReport(lhs, ref, diff, bound, diff <= bound + 1e-9)


def progression(ring, f0, M):
    """AP(f0, M) within M_n: the monics of degree deg f0 congruent to f0 mod M."""
    n = len(f0) - 1
    C = ring.monic_array(n)
    res = ring.residues_array(C, M)
    target = np.zeros(len(M) - 1, dtype=np.int64)
    r = ring.mod(f0, M)
    target[: len(r)] = r
    return np.flatnonzero(np.all(res == target, axis=1))


def mean_ap(alpha, f0, M, ring):
    """<alpha> over AP(f0, M) against <alpha> over M_{n;M}, with the summed explicit bound."""
    n = len(f0) - 1
    M = ring.monic(M)
    if n < len(M) - 1:
        raise DegreeConstraintViolated(f"n={n} < deg M={len(M) - 1}")
    if ring.gcd(f0, M) != ring.one:
        raise NotCoprime("f0 and M must be coprime")
    vals = alpha.values(ring, n)
    lhs = complex(np.mean(vals[progression(ring, f0, M)]))
    coprime = _coprime_mask(ring, n, M) if len(M) > 1 else np.ones(len(vals), dtype=bool)
    ref = complex(np.mean(vals[coprime]))
    q, dM, phi = ring.q, len(M) - 1, ring.euler_phi(M)
    max_alpha = float(np.max(np.abs(vals[coprime])))
    bound = (phi - 1) * upper_rhs(q, 0, dM, n, max_alpha) / (q ** (n - dM) * phi)
    diff = abs(lhs - ref)
    return MeanReport(lhs, ref, diff, bound, diff <= bound + 1e-9)


# variances

@dataclass
class VarianceReport:
    brute: float
    formula: float
    surrogate: float
    agree: bool
    ok: bool

    def as_dict(self):
        return asdict(self)


def _population_variance(x):
    x = np.asarray(x, dtype=complex)
    return float(np.mean(np.abs(x - x.mean()) ** 2)) if len(x) else 0.0


def _agree(a, b, rel=1e-9, floor=1e-6, abs_tol=1e-12):
    if max(abs(a), abs(b)) < floor:
        return abs(a - b) < abs_tol
    return abs(a - b) <= rel * max(abs(a), abs(b))


def variance_formula(group, n, alpha):
    """sum_{chi != chi_0} |S(n, alpha chi)|^2 / (q^l phi(M))^2, and the surrogate bound."""
    sums, max_alpha = alpha_char_sums(group, n, alpha)
    G = group.units.order
    formula = float(np.sum(np.abs(sums[1:]) ** 2)) / G**2
    rhs = upper_rhs(group.ring.q, group.ell, group.deg_M, n, max_alpha)
    surrogate = (G - 1) * rhs**2 / G**2
    return formula, surrogate


def variance_gap(group, n, alpha):
    """Variance over f0 in M_{n;M} of the GAP sums, by direct summation and by characters."""
    idx = group.units.monic_indices(n)
    vals = alpha.values(group.ring, n)
    ok = idx >= 0
    class_sums = np.zeros(group.units.order, dtype=complex)
    np.add.at(class_sums, idx[ok], vals[ok])
    brute = _population_variance(class_sums[idx[ok]])
    formula, surrogate = variance_formula(group, n, alpha)
    return VarianceReport(brute, formula, surrogate, _agree(brute, formula), brute <= surrogate * (1 + 1e-12))


def variance_interval(alpha, n, h, ring):
    """Variance over f0 in M_n of sum_{f in I(f0,h)} alpha(f); intervals are found by
    grouping the coefficients above degree h, not through characters."""
    if not 0 <= h <= n - 1:
        raise DegreeConstraintViolated(f"need 0 <= h <= n-1, got h={h}, n={n}")
    C = ring.monic_array(n)
    vals = alpha.values(ring, n)
    high = C[:, h + 1:n] @ (ring.q ** np.arange(n - h - 1, dtype=np.int64))
    sums = np.zeros(ring.q ** (n - h - 1), dtype=complex)
    np.add.at(sums, high, vals)
    brute = _population_variance(sums[high])
    group = CharacterGroup(ring, n - h - 1, ring.one)
    formula, surrogate = variance_formula(group, n, alpha)
    return VarianceReport(brute, formula, surrogate, _agree(brute, formula), brute <= surrogate * (1 + 1e-12))


def variance_ap(alpha, n, M, ring):
    """Variance over f0 in M_{n;M} of sum_{f in AP(f0,M)} alpha(f), grouping by residue."""
    M = ring.monic(M)
    dM = len(M) - 1
    if n < dM:
        raise DegreeConstraintViolated(f"n={n} < deg M={dM}")
    C = ring.monic_array(n)
    vals = alpha.values(ring, n)
    res = ring.residues_array(C, M) @ (ring.q ** np.arange(dM, dtype=np.int64))
    sums = np.zeros(ring.q**dM, dtype=complex)
    np.add.at(sums, res, vals)
    coprime = _coprime_mask(ring, n, M) if dM else np.ones(len(vals), dtype=bool)
    brute = _population_variance(sums[res[coprime]])
    group = CharacterGroup(ring, 0, M)
    formula, surrogate = variance_formula(group, n, alpha)
    return VarianceReport(brute, formula, surrogate, _agree(brute, formula), brute <= surrogate * (1 + 1e-12))


# applications

def count_H(ring, n, d):
    """H_q(n, d): monics of degree n with a monic divisor of degree d."""
    return int(np.sum(has_divisor_deg(d).values(ring, n).real))


def count_H_brute(ring, n, d):
    """H_q(n, d) by trial division of every f in M_n by every monic of degree d."""
    if d in (0, n):
        return ring.q**n
    divisors = ring.monic_list(d)
    return sum(1 for f in ring.monic_list(n) if any(not ring.mod(f, g) for g in divisors))


def divisor_count_brute(ring, f, k):
    """Number of ordered k-tuples of monics with product f."""
    if k == 1:
        return 1
    n = len(f) - 1
    total = 0
    for m in range(n + 1):
        for g in ring.monic_list(m):
            quo, rem = ring.divmod(f, g)
            if not rem:
                total += divisor_count_brute(ring, quo, k - 1)
    return total
