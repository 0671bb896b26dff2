"""L-functions of Hayes characters.

For a nontrivial character the series sum_f chi(f) u^deg(f) is a polynomial
whose coefficient of u^m is S(m, chi), the character sum over M_m.  Its
degree is found by exact zero tests in cyclotomic coordinates, so trailing
coefficients that only look small in floating point are never trimmed.
"""
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .cyclotomic import reduction_matrix
from .errors import NumericalInstability, OrthogonalityViolation

RH_TOL = 1e-6
RESIDUAL_TOL = 1e-8
MERGE_TOL = 1e-11


@dataclass
class LPolynomial:
    """L(u, chi).  ``coeffs`` is ascending; for the trivial character the
    rational form ``numerator / (1 - q u)`` is kept instead."""

    chi: object = field(repr=False)
    coeffs: np.ndarray = None
    numerator: tuple = None
    denominator: tuple = None

    @property
    def is_rational(self):
        return self.numerator is not None

    @property
    def degree(self):
        if self.is_rational:
            raise ValueError("the trivial character's L-function is not a polynomial")
        return len(self.coeffs) - 1

    def series(self, n):
        """First n+1 power-series coefficients."""
        if not self.is_rational:
            out = np.zeros(n + 1, dtype=complex)
            k = min(n + 1, len(self.coeffs))
            out[:k] = self.coeffs[:k]
            return out
        q = -self.denominator[1]
        geo = np.array([q**k for k in range(n + 1)], dtype=float)
        num = np.zeros(n + 1)
        for i, c in enumerate(self.numerator[: n + 1]):
            num[i] = c
        return np.convolve(num, geo)[: n + 1].astype(complex)


def _trivial_form(group):
    q = group.ring.q
    num = np.zeros(1, dtype=np.int64)
    num[0] = 1
    for P, _ in group.ring.factor(group.M) if group.deg_M else ():
        f = np.zeros(len(P), dtype=np.int64)
        f[0], f[-1] = 1, -1
        num = np.convolve(num, f)
    return tuple(int(c) for c in num), (1, -q)


@dataclass
class _LData:
    degrees: np.ndarray       # per character; -1 for the trivial one
    coeffs: np.ndarray        # (l + deg M + 1, #characters), complex
    counts: list              # per m, integer count matrix (N, #characters)


def _l_data(group):
    """Exact degrees and coefficients of every L-polynomial of ``group`` (cached).

    Coefficients of u^m for m <= l + deg M are character sums over M_m; the
    one at m = l + deg M must vanish exactly for nontrivial characters.
    """
    cached = group._sums.get("ldata")
    if cached is not None:
        return cached
    top = group.ell + group.deg_M
    R = reduction_matrix(group.N)
    nonzero = np.zeros((top + 1, len(group)), dtype=bool)
    sums = np.zeros((top + 1, len(group)), dtype=complex)
    counts = []
    for m in range(top + 1):
        C = group.count_matrix(group.units.monic_indices(m))
        counts.append(C)
        # float matmul is exact here: every entry stays far below 2**53
        nonzero[m] = np.any(R.astype(float) @ C.astype(float) != 0, axis=0)
        sums[m] = group.monic_sums(m)
    if np.any(nonzero[top, 1:]):
        bad = [group[i].ident for i in np.flatnonzero(nonzero[top, 1:]) + 1]
        raise OrthogonalityViolation(f"S(l+deg M, chi) != 0 for {bad[:3]}")
    # highest m with a nonzero coefficient; row 0 is always nonzero
    degrees = top - np.argmax(nonzero[::-1], axis=0)
    degrees[0] = -1
    sums[0] = 1.0
    data = group._sums["ldata"] = _LData(degrees, sums, counts)
    return data


def l_polynomial(chi):
    group = chi.group
    if chi.is_trivial:
        num, den = _trivial_form(group)
        return LPolynomial(chi, numerator=num, denominator=den)
    data = _l_data(group)
    deg = int(data.degrees[chi.index])
    return LPolynomial(chi, coeffs=data.coeffs[: deg + 1, chi.index].copy())


def l_polynomials(group):
    return [l_polynomial(c) for c in group]


@dataclass
class InverseRoots:
    gammas: np.ndarray
    residual: float


def _expand(gammas):
    """Ascending coefficients of prod (1 - gamma u), row-wise for a (k, d) stack."""
    k, d = gammas.shape
    out = np.zeros((k, d + 1), dtype=complex)
    out[:, 0] = 1.0
    for j in range(d):
        out[:, 1:] = out[:, 1:] - gammas[:, j:j + 1] * out[:, :-1]
    return out


def _roots_stack(coeffs):
    """Inverse roots for a (k, d+1) stack of ascending coefficients with constant term 1.

    The gamma are the eigenvalues of the companion matrix of
    x^d + c_1 x^(d-1) + ... + c_d.
    """
    k, d1 = coeffs.shape
    d = d1 - 1
    comp = np.zeros((k, d, d), dtype=complex)
    comp[:, 0, :] = -coeffs[:, 1:]
    if d > 1:
        comp[:, np.arange(1, d), np.arange(d - 1)] = 1.0
    gammas = np.linalg.eigvals(comp)
    scale = np.maximum(1.0, np.max(np.abs(coeffs), axis=1))
    residual = np.max(np.abs(_expand(gammas) - coeffs), axis=1) / scale
    return gammas, residual


def inverse_roots(L, tol=RESIDUAL_TOL):
    """The gamma_i with L(u) = prod (1 - gamma_i u), from companion-matrix eigenvalues.

    The product is re-expanded and compared with L; a residual above ``tol``
    raises NumericalInstability.
    """
    if isinstance(L, LPolynomial) and L.is_rational:
        raise ValueError("inverse roots are defined for nontrivial characters only")
    coeffs = np.asarray(L.coeffs if isinstance(L, LPolynomial) else L, dtype=complex)
    coeffs = coeffs / coeffs[0]
    if len(coeffs) == 1:
        return InverseRoots(np.zeros(0, dtype=complex), 0.0)
    gammas, residual = _roots_stack(coeffs[None, :])
    if residual[0] > tol:
        raise NumericalInstability(f"root reconstruction residual {residual[0]:.3g}")
    return InverseRoots(gammas[0], float(residual[0]))


def _precise_roots(group, i, deg, dps=60):
    """Inverse roots of L(u, chi_i) from its exact coefficients at ``dps`` digits.

    Repeated inverse roots are common for imprimitive characters, and double
    precision only locates a k-fold root to about eps**(1/k).
    """
    data = _l_data(group)
    N = group.N
    with mpmath.workdps(dps):
        zeta = [mpmath.expjpi(mpmath.mpf(2 * k) / N) for k in range(N)]
        coeffs = []
        for m in range(deg + 1):
            col = data.counts[m][:, i]
            coeffs.append(mpmath.fsum(int(c) * zeta[k] for k, c in enumerate(col) if c))
        comp = mpmath.zeros(deg, deg)
        for j in range(deg):
            comp[0, j] = -coeffs[j + 1] / coeffs[0]
            if j:
                comp[j, j - 1] = 1
        roots = mpmath.eig(comp, left=False, right=False)
        return np.array([complex(r) for r in roots])


def _merge_clusters(gammas, radius=1e-3):
    """Replace each cluster of nearby roots by copies of its centroid.

    A k-fold root is only located to about eps**(1/k) in double precision,
    but the centroid of its k computed copies is accurate to about eps.
    """
    g = np.array(gammas)
    n = len(g)
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(g[i] - g[j]) < radius:
                label[find(i)] = find(j)
    roots = [find(i) for i in range(n)]
    for r in set(roots):
        members = [i for i in range(n) if roots[i] == r]
        g[members] = np.mean(g[members])
    return g


def _deviation(gammas, q):
    mods = np.abs(gammas)
    return np.minimum(np.abs(mods - 1.0), np.abs(mods - math.sqrt(q)))


def group_inverse_roots(group, refine_above=1e-10):
    """Inverse roots of every nontrivial character's L-polynomial (cached).

    Returns a list indexed like the characters (None for the trivial one).
    Roots off both circles by more than ``refine_above`` are recomputed at
    high precision.
    """
    cached = group._sums.get("roots")
    if cached is not None:
        return cached
    data = _l_data(group)
    q = group.ring.q
    out = [None] * len(group)
    for deg in np.unique(data.degrees[1:]):
        idx = np.flatnonzero(data.degrees == deg)
        idx = idx[idx > 0]
        if deg == 0:
            for i in idx:
                out[i] = np.zeros(0, dtype=complex)
            continue
        gammas, residual = _roots_stack(data.coeffs[: deg + 1, idx].T)
        if np.any(residual > RESIDUAL_TOL):
            raise NumericalInstability(f"root reconstruction residual {residual.max():.3g}")
        dev = np.max(_deviation(gammas, q), axis=1)
        for row, i in enumerate(idx):
            g = gammas[row]
            if dev[row] > refine_above:
                g = _merge_clusters(g)
                coeffs = data.coeffs[: deg + 1, i]
                err = np.max(np.abs(_expand(g[None, :])[0] - coeffs)) / max(1.0, np.max(np.abs(coeffs)))
                if err > MERGE_TOL:
                    g = _precise_roots(group, i, int(deg))
            out[i] = g
    group._sums["roots"] = out
    return out


@dataclass
class RHReport:
    ok: bool
    moduli: list
    deviations: list


def rh_check(gammas, q, tol=RH_TOL):
    """Every |gamma| within tol of 1 or sqrt(q)."""
    gammas = np.asarray(gammas)
    dev = _deviation(gammas, q)
    return RHReport(bool(np.all(dev < tol)), np.abs(gammas).tolist(), dev.tolist())


def verify_rh(chi, tol=RH_TOL):
    """RH for L(u, chi): every inverse root on the circle of radius 1 or sqrt(q)."""
    if chi.is_trivial:
        raise ValueError("RH is checked for nontrivial characters")
    return rh_check(group_inverse_roots(chi.group)[chi.index], chi.group.ring.q, tol)


def verify_rh_coeffs(coeffs, q, tol=RH_TOL):
    """RH test for an arbitrary ascending coefficient list (used for negative controls)."""
    return rh_check(inverse_roots(coeffs, tol=np.inf).gammas, q, tol)


def prime_char_sum(chi, n):
    """sum over P in P_n of chi(P), by enumeration of P_n."""
    return complex(chi.group.prime_sums(n)[chi.index])


def prime_bound(q, n, ell, deg_M, trivial):
    trivial_bound = q**n / n
    if trivial:
        return trivial_bound
    return min(q ** (n / 2) / n * (ell + deg_M + 1), trivial_bound)


def verify_prime_bound(chi, n, slack=1e-9):
    g = chi.group
    lhs = abs(prime_char_sum(chi, n))
    rhs = prime_bound(g.ring.q, n, g.ell, g.deg_M, chi.is_trivial)
    return lhs <= rhs + slack


def von_mangoldt_sums(group, n):
    """sum_{f in M_n} Lambda(f) chi(f) for every character.

    Enumerates the prime powers P^(n/d), P in P_d, and classifies each power
    polynomial directly rather than going through chi(P)**(n/d).
    """
    ring = group.ring
    total = np.zeros(len(group), dtype=complex)
    for d in range(1, n + 1):
        if n % d:
            continue
        powers = [ring.power(P, n // d) for P in ring.irreducibles(d)]
        total += d * group.char_sums(group.units.indices(powers))
    return total


def root_power_sums(chi, n):
    """sum_i gamma_i**n."""
    return complex(np.sum(group_inverse_roots(chi.group)[chi.index] ** n))


def euler_product_series(chi, n):
    """prod_{deg P <= n} (1 - chi(P) u^deg P)^(-1), truncated after u^n."""
    g = chi.group
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1.0
    for d in range(1, n + 1):
        vals = g.values[:, chi.index][g.prime_indices(d)[g.prime_indices(d) >= 0]]
        for v in vals:
            geo = np.zeros(n + 1, dtype=complex)
            geo[:: d] = v ** np.arange(len(geo[:: d]))
            out = np.convolve(out, geo)[: n + 1]
    return out


def character_sum_series(chi, n):
    return np.array([chi.group.monic_sums(m)[chi.index] for m in range(n + 1)])
