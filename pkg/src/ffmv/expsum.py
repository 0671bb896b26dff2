"""Character sums restricted to a factorization type, and the explicit bounds on them.

The sum of chi over the f in M_n of type omega factors over prime degrees,
and each factor is a monomial symmetric polynomial evaluated at the values
chi(P), P in P_d.  Both that product and plain enumeration are available,
so every such sum can be cross-checked.
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import BoundViolation, CrossCheckMismatch, DomainError
from .ffpoly import FactorizationType
from .symcomb import Partition, monomial_eval, partitions


@dataclass(frozen=True)
class ZParams:
    d: int
    z1: float
    z2: float


def z_params(q, d, ell, deg_M):
    z2 = q**d / d
    z1 = min(q ** (d / 2) * (ell + deg_M + 1) / d, z2)
    return ZParams(d, z1, z2)


def log_threshold(t, r):
    """floor(2 log_t r), computed exactly as the largest L with t^L <= r^2."""
    if r < 1:
        raise ValueError("r must be >= 1")
    L = 0
    while t ** (L + 1) <= r * r:
        L += 1
    return L


@dataclass(frozen=True)
class BoundConfig:
    q: int
    ell: int
    deg_M: int
    n: int
    order: int

    @property
    def threshold(self):
        return log_threshold(self.q, self.ell + self.deg_M + 1)


def upper_rhs(q, ell, deg_M, n, max_alpha):
    """7 max|alpha| q^(n/2) binom(10(l + deg M + 1) + n - 1, n)."""
    return 7 * max_alpha * q ** (n / 2) * math.comb(10 * (ell + deg_M + 1) + n - 1, n)


def proof_rhs(q, ell, deg_M, n):
    """q^(n/2) binom(10(l + deg M + 2) + n - 1, n), the bound on sum_omega |S(n, chi 1_omega)|."""
    return q ** (n / 2) * math.comb(10 * (ell + deg_M + 2) + n - 1, n)


# factorization types of a given size

def omega_types(n, prime_counts):
    """Every factorization type of size n realizable with |P_d| = prime_counts[d] primes.

    A type is a choice of partition lambda_d for each degree d with
    sum d |lambda_d| = n and len(lambda_d) <= |P_d|.
    """
    out = []

    def rec(d, remaining, chosen):
        if remaining == 0:
            out.append(FactorizationType(tuple((dd, e) for dd, lam in chosen for e in lam)))
            return
        if d > remaining:
            return
        for k in range(remaining // d, -1, -1):
            lams = [()] if k == 0 else [lam for lam in partitions(k) if len(lam) <= prime_counts.get(d, 0)]
            for lam in lams:
                rec(d + 1, remaining - d * k, chosen + ([(d, lam)] if k else []))

    rec(1, n, [])
    return out


def ring_omega_types(ring, n):
    return omega_types(n, {d: len(ring.irreducibles(d)) for d in range(1, n + 1)})


def type_char_sums(group, n):
    """Direct enumeration: (types, matrix) with matrix[t, chi] = sum over f of type t of chi(f) (cached)."""
    key = ("types", n)
    cached = group._sums.get(key)
    if cached is None:
        types, ids = group.ring.type_table(n)
        idx = group.units.monic_indices(n)
        ok = idx >= 0
        W = np.zeros((len(types), group.units.order))
        np.add.at(W, (ids[ok], idx[ok]), 1.0)
        cached = group._sums[key] = ({t: i for i, t in enumerate(types)}, W @ group.values)
    return cached


def prime_values(group, d):
    """Matrix of chi(P) for P in P_d (rows) and every character (columns), zeros where P | M."""
    idx = group.prime_indices(d)
    vals = np.zeros((len(idx), len(group)), dtype=complex)
    ok = idx >= 0
    vals[ok] = group.values[idx[ok]]
    return vals


def type_sum_product(group, omega):
    """prod_d m_{lambda_d}(chi(P) : P in P_d), for every character."""
    out = np.ones(len(group), dtype=complex)
    for d, lam in FactorizationType(tuple(omega.pairs)).by_degree().items():
        out = out * monomial_eval(Partition(lam), prime_values(group, d))
    return out


def type_sum_direct(group, omega):
    index, table = type_char_sums(group, omega.size)
    i = index.get(omega)
    return np.zeros(len(group), dtype=complex) if i is None else table[i]


def s_omega(chi, omega, tol=1e-9):
    """S(|omega|, chi 1_omega) by enumeration, cross-checked against the product formula."""
    g = chi.group
    direct = complex(type_sum_direct(g, omega)[chi.index])
    product = complex(type_sum_product(g, omega)[chi.index])
    if abs(direct - product) > tol * max(1.0, abs(direct)):
        raise CrossCheckMismatch(f"{chi.ident} {omega}: direct {direct} vs product {product}")
    return direct


def cross_check_types(group, n, tol=1e-9):
    """Largest |direct - product| over all types of size n and all characters."""
    worst = 0.0
    index, table = type_char_sums(group, n)
    for omega in ring_omega_types(group.ring, n):
        prod = type_sum_product(group, omega)
        i = index.get(omega)
        direct = np.zeros(len(group)) if i is None else table[i]
        worst = max(worst, float(np.max(np.abs(direct - prod))))
    return worst


def omega_abs_sums(group, n, method="product"):
    """sum over omega with |omega| = n of |S(n, chi 1_omega)|, for every character."""
    total = np.zeros(len(group))
    if method == "direct":
        _, table = type_char_sums(group, n)
        return np.sum(np.abs(table), axis=0)
    for omega in ring_omega_types(group.ring, n):
        total += np.abs(type_sum_product(group, omega))
    return total


def omega_abs_sum(chi, n, method="product"):
    return float(omega_abs_sums(chi.group, n, method)[chi.index])


# finite-sum lemmas

@dataclass
class Check:
    lhs: float
    rhs: float
    ok: bool

    @property
    def slack_ratio(self):
        return self.lhs / self.rhs if self.rhs else math.inf


def _divisor_pairs(n):
    return [(d, n // d) for d in range(1, n + 1) if n % d == 0]


def sum_2x_bound(n, x):
    """sum_{d1 d2 = n} 2^d1 x^d2 <= 8 x^n, and for each m >= 2 dividing n the
    sum over d1 d2 = n/m is <= 8 x^(n/2).  Returns (main check, {m: check})."""
    if x < 2:
        raise DomainError("x must be >= 2")
    if n < 1:
        raise ValueError("n must be >= 1")
    lhs = sum(2**d1 * x**d2 for d1, d2 in _divisor_pairs(n))
    main = Check(lhs, 8 * x**n, lhs <= 8 * x**n)
    parts = {}
    for m in range(2, n + 1):
        if n % m == 0:
            s = sum(2**d1 * x**d2 for d1, d2 in _divisor_pairs(n // m))
            parts[m] = Check(s, 8 * x ** (n / 2), s <= 8 * x ** (n / 2))
    return main, parts


VARIANT_XS = (math.sqrt(2), math.sqrt(3), 2.0, 3.0)


def sum_2x_variant(n, x):
    """sum_{d1 d2 = n, d1 != n} 2^d1 x^d2 <= 7 x^n, for x in {sqrt 2, sqrt 3, 2, 3}."""
    if not any(math.isclose(x, v, rel_tol=1e-12) for v in VARIANT_XS):
        raise DomainError(f"x={x} is not one of sqrt(2), sqrt(3), 2, 3")
    lhs = sum(2**d1 * x**d2 for d1, d2 in _divisor_pairs(n) if d1 != n)
    return Check(lhs, 7 * x**n, lhs <= 7 * x**n)


def binom3_bound(n):
    lhs = sum(math.comb(n, i) for i in range(4))
    return Check(lhs, 7 * 1.4**n, lhs <= 7 * 1.4**n)


def exp_series(a, n):
    """Coefficients z_0..z_n of exp(sum_{k>=1} a[k] u^k), via n z_n = sum_k k a_k z_{n-k}."""
    z = [1.0] + [0.0] * n
    for m in range(1, n + 1):
        z[m] = sum(k * a[k] * z[m - k] for k in range(1, m + 1)) / m
    return z


def genfunc_log_coeffs(t, r, n):
    """a_k of log Z(u): 10 t^k / k up to the threshold, 10 (r+1) t^(k/2) / k beyond."""
    L = log_threshold(t, r)
    return [0.0] + [10 * t**k / k if k <= L else 10 * (r + 1) * t ** (k / 2) / k
                    for k in range(1, n + 1)]


@dataclass
class GenfuncReport:
    t: int
    r: int
    n: int
    coeff: float
    binom_bound: float
    binom_ok: bool
    cool_log_lhs: float = None
    cool_log_rhs: float = None
    cool_ok: bool = None


def cool_hypothesis(t, r):
    return r >= max(20000, t ** (math.log(t) ** 2))


def genfunc_coeff_bounds(t, r, n):
    """[u^n] Z(u) against t^(n/2) binom(10(r+1)+n-1, n), and, when r is large
    enough for it, against the sharper bound compared in log space."""
    z = exp_series(genfunc_log_coeffs(t, r, n), n)[n]
    b1 = t ** (n / 2) * math.comb(10 * (r + 1) + n - 1, n)
    rep = GenfuncReport(t, r, n, z, b1, z <= b1 * (1 + 1e-12))
    if cool_hypothesis(t, r):
        lr = math.log(r)
        rep.cool_log_lhs = math.log(z)
        rep.cool_log_rhs = (n / 2) * math.log(t) + n * math.log(lr) / lr * math.log(t) + 70 * (r + 1) / lr**2 * t
        rep.cool_ok = rep.cool_log_lhs <= rep.cool_log_rhs
    return rep


# the majorant H_chi

def log_h_coeff(k, q, ell, deg_M, order, small_q=False):
    """[u^k] log H_chi(u).  With ``small_q`` the degree-1 factor uses base 1.4 instead of 2."""
    total = 0.0
    for d, i in _divisor_pairs(k):
        base = 1.4 if (small_q and d == 1) else 2.0
        total += base**i * z_params(q, d, ell, deg_M).z1 * d
    if k % order == 0:
        for d, i in _divisor_pairs(k // order):
            base = 1.4 if (small_q and d == 1) else 2.0
            z = z_params(q, d, ell, deg_M)
            total += base**i * (z.z2 - z.z1) * d
    return total / k


def log_h_bounds(k, q, ell, deg_M):
    """(bound valid for every k, bound for k up to the threshold), as used for q >= 4 or q in {2, 3}."""
    r = ell + deg_M
    if q >= 4:
        return 8 * (r + 2) * q ** (k / 2) / k, 8 * q**k / k
    return 10 * (r + 2) * q ** (k / 2) / k, 10 * q**k / k


def check_log_h(q, ell, deg_M, order, kmax):
    """All coefficient bounds on log H_chi for k <= kmax; returns the worst lhs/rhs ratio."""
    small_q = q in (2, 3)
    L = log_threshold(q, ell + deg_M + 1)
    worst = 0.0
    for k in range(1, kmax + 1):
        v = log_h_coeff(k, q, ell, deg_M, order, small_q)
        general, small_k = log_h_bounds(k, q, ell, deg_M)
        worst = max(worst, v / general)
        if k <= L:
            worst = max(worst, v / small_k)
    return worst


@dataclass
class ExpoReport:
    config: dict
    lhs: float
    rhs: float
    ok: bool
    chain_lhs: float
    chain_rhs: float
    chain_ok: bool
    proof_rhs: float
    proof_ok: bool

    @property
    def slack_ratio(self):
        return self.lhs / self.rhs

    def as_dict(self):
        d = asdict(self)
        d["slack_ratio"] = self.slack_ratio
        return d


def alpha_char_sums(group, n, alpha):
    """S(n, alpha chi) for every character, plus max |alpha| over M_{n;M}."""
    types, ids = group.ring.type_table(n)
    vals = np.array([alpha(t) for t in types], dtype=complex)
    idx = group.units.monic_indices(n)
    w = vals[ids]
    ok = idx >= 0
    max_alpha = float(np.max(np.abs(w[ok]))) if np.any(ok) else 0.0
    W = np.zeros(group.units.order, dtype=complex)
    np.add.at(W, idx[ok], w[ok])
    return W @ group.values, max_alpha


def verify_expothm(chi, n, alpha, strict=True, slack=1e-9):
    """The explicit bound on |S(n, alpha chi)| and the triangle-inequality chain behind it."""
    if chi.is_trivial:
        raise ValueError("the bound is stated for nontrivial characters")
    g = chi.group
    q = g.ring.q
    sums, max_alpha = alpha_char_sums(g, n, alpha)
    lhs = abs(complex(sums[chi.index]))
    rhs = upper_rhs(q, g.ell, g.deg_M, n, max_alpha)
    omega_sum = omega_abs_sum(chi, n)
    chain_rhs = max_alpha * omega_sum
    prf = proof_rhs(q, g.ell, g.deg_M, n)
    rep = ExpoReport(
        config={"q": q, "l": g.ell, "M": list(g.M), "n": n, "chi": chi.ident,
                "alpha": getattr(alpha, "name", str(alpha))},
        lhs=lhs, rhs=rhs, ok=lhs <= rhs * (1 + slack),
        chain_lhs=lhs, chain_rhs=chain_rhs, chain_ok=lhs <= chain_rhs + slack * max(1.0, chain_rhs),
        proof_rhs=prf, proof_ok=omega_sum <= prf * (1 + slack),
    )
    if strict and not (rep.ok and rep.chain_ok and rep.proof_ok):
        raise BoundViolation(str(rep.as_dict()))
    return rep
