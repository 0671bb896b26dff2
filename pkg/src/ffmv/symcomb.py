"""Partitions, monomial and power-sum symmetric polynomials, brick tabloids.

The change of basis m_lambda = sum_mu c(lambda, mu) p_mu is computed from
brick tabloids: c(lambda, mu) = (-1)^(len lambda - len mu) w(B) / z_mu,
where w(B) sums the products of row-final brick lengths over all
lambda-brick tabloids of shape mu.
"""
import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import SizeMismatch


class Partition(tuple):
    """A non-increasing tuple of positive integers."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be non-increasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self):
        return sum(self)

    @property
    def length(self):
        return len(self)

    def multiplicities(self):
        return Counter(self)

    def __repr__(self):
        return "(" + ",".join(map(str, self)) + ")"


def _partitions(n, largest):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def partitions(n):
    """All partitions of n, largest first part first: 4, 31, 22, 211, 1111."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return tuple(Partition(p) for p in _partitions(n, n))


def partition_count(n):
    """p(n) by the standard recursion over the largest part (independent of the generator)."""
    table = [[0] * (n + 1) for _ in range(n + 1)]
    for k in range(n + 1):
        table[0][k] = 1
    for m in range(1, n + 1):
        for k in range(1, n + 1):
            table[m][k] = table[m][k - 1] + (table[m - k][k] if m >= k else 0)
    return table[n][n]


def monomial_eval(lam, xs):
    """m_lambda(xs): sum over distinct placements of the parts of lambda on the variables.

    ``xs`` may be 1-D or 2-D; for 2-D input the variables run along axis 0
    and every column is evaluated independently.  Runs a dynamic programme
    over the multiset of parts not yet placed.
    """
    xs = np.asarray(xs, dtype=complex)
    lam = Partition(lam)
    values = sorted(set(lam))
    start = tuple(lam.count(v) for v in values)
    shape = xs.shape[1:]
    states = {start: np.ones(shape, dtype=complex)}
    for x in xs:
        nxt = {}
        for st, acc in states.items():
            nxt[st] = nxt.get(st, 0) + acc
            for j, v in enumerate(values):
                if st[j]:
                    s2 = st[:j] + (st[j] - 1,) + st[j + 1:]
                    nxt[s2] = nxt.get(s2, 0) + acc * x**v
        states = nxt
    done = (0,) * len(values)
    return states.get(done, np.zeros(shape, dtype=complex))


def monomial_eval_brute(lam, xs):
    """m_lambda by explicit distinct permutations of lambda padded with zeros."""
    xs = list(xs)
    if len(xs) < len(lam):
        return 0j
    padded = tuple(lam) + (0,) * (len(xs) - len(lam))
    total = 0j
    for perm in set(itertools.permutations(padded)):
        term = 1 + 0j
        for x, e in zip(xs, perm):
            term *= x**e
        total += term
    return total


def power_sum_eval(mu, xs):
    """p_mu(xs) = prod_i sum_j x_j**mu_i (columns of 2-D input evaluated independently)."""
    xs = np.asarray(xs, dtype=complex)
    out = np.ones(xs.shape[1:], dtype=complex)
    for part in mu:
        out = out * np.sum(xs**part, axis=0)
    return out


@dataclass(frozen=True)
class BrickTabloid:
    """Brick lengths row by row, left to right."""

    rows: tuple

    @property
    def weight(self):
        return math.prod(row[-1] for row in self.rows)

    @property
    def bricks(self):
        return Partition(sorted((b for row in self.rows for b in row), reverse=True))

    @property
    def shape(self):
        return Partition(sum(row) for row in self.rows)


def _row_fillings(length, available):
    """Compositions of ``length`` using bricks from the multiset ``available`` (a Counter)."""
    if length == 0:
        yield ()
        return
    for b in sorted(available):
        if available[b] > 0 and b <= length:
            available[b] -= 1
            for rest in _row_fillings(length - b, available):
                yield (b,) + rest
            available[b] += 1


def brick_tabloids(lam, mu):
    """Every lambda-brick tabloid of shape mu; equal-length bricks are indistinguishable."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.size != mu.size:
        raise SizeMismatch(f"|lambda|={lam.size} != |mu|={mu.size}")
    available = Counter(lam)
    out = []

    def fill(i, rows):
        if i == len(mu):
            out.append(BrickTabloid(tuple(rows)))
            return
        # while a filling is yielded its bricks are already taken out of ``available``
        for row in _row_fillings(mu[i], available):
            fill(i + 1, rows + [row])

    fill(0, [])
    return out


@lru_cache(maxsize=None)
def tabloid_weight(lam, mu):
    """w(B_{lambda,mu})."""
    return sum(t.weight for t in brick_tabloids(lam, mu))


def z_mu(mu):
    """z_mu = prod_i i^{m_i} m_i!, the centralizer size of a permutation of cycle type mu."""
    return math.prod(i**m * math.factorial(m) for i, m in Counter(mu).items())


def cycle_probability(mu):
    """P(a uniform permutation of S_|mu| has cycle type mu) = 1/z_mu."""
    return Fraction(1, z_mu(mu))


@lru_cache(maxsize=None)
def cycle_type_counts(n):
    """Exhaustive count of permutations of S_n by cycle type."""
    counts = Counter()
    for perm in itertools.permutations(range(n)):
        seen = [False] * n
        cycles = []
        for i in range(n):
            if not seen[i]:
                length, j = 0, i
                while not seen[j]:
                    seen[j] = True
                    j = perm[j]
                    length += 1
                cycles.append(length)
        counts[Partition(sorted(cycles, reverse=True))] += 1
    return dict(counts)


def c_coeff(lam, mu):
    """Coefficient of p_mu in m_lambda, as an exact Fraction."""
    lam, mu = Partition(lam), Partition(mu)
    if lam.size != mu.size:
        raise SizeMismatch(f"|lambda|={lam.size} != |mu|={mu.size}")
    sign = -1 if (len(lam) - len(mu)) % 2 else 1
    return sign * tabloid_weight(lam, mu) * cycle_probability(mu)


def base_change_eval(lam, xs):
    """sum_mu c(lambda, mu) p_mu(xs), the right side of the change of basis."""
    xs = np.asarray(xs, dtype=complex)
    total = np.zeros(xs.shape[1:], dtype=complex)
    for mu in partitions(sum(lam)):
        c = c_coeff(lam, mu)
        if c:
            total = total + float(c) * power_sum_eval(mu, xs)
    return total


def bsum_series(mu):
    """Coefficients of B(u) = prod_i ((1+u)^{mu_i} - 1), constant term first."""
    out = np.array([1], dtype=object)
    for part in mu:
        f = np.array([math.comb(part, k) for k in range(part + 1)], dtype=object)
        f[0] = 0
        out = np.convolve(out, f)
    return [int(c) for c in out]


def bsum_by_enumeration(mu):
    """Coefficient t is sum over lambda of length t of w(B_{lambda,mu}), by listing tabloids."""
    mu = Partition(mu)
    out = [0] * (mu.size + 1)
    for lam in partitions(mu.size):
        out[len(lam)] += tabloid_weight(lam, mu)
    return out


def composition_count(n1, n2, n3):
    """Number of (x_1..x_{n1}) with x_i >= 1, x_{n1} = n2 and sum n3."""
    if n1 < 1:
        raise ValueError("n1 must be >= 1")
    if n1 == 1:
        return int(n2 == n3)
    if n3 >= n2 + n1 - 1:
        return math.comb(n3 - n2 - 1, n1 - 2)
    return 0


def composition_count_brute(n1, n2, n3):
    if n2 < 1:
        return 0
    return sum(1 for xs in itertools.product(range(1, n3 + 1), repeat=n1 - 1)
               if sum(xs) + n2 == n3)


def binomial_series(a, n):
    """Coefficients of (1+u)^a for complex a up to u^n, by the falling-product recurrence."""
    out = [complex(1)]
    for k in range(1, n + 1):
        out.append(out[-1] * (a - k + 1) / k)
    return out


def exp_formula_coeff(n, m, z1, z2):
    """[u^n] (1-u)^{-z1} (1-u^m)^{(z1-z2)/m}."""
    if n < 0:
        raise ValueError("n must be >= 0")
    a = binomial_series(-z1, n)
    a = [c * (-1) ** k for k, c in enumerate(a)]
    b = binomial_series((z1 - z2) / m, n // m)
    b = [c * (-1) ** k for k, c in enumerate(b)]
    return complex(sum(b[j] * a[n - m * j] for j in range(len(b))))


def cycle_statistic_mean(n, m, z1, z2, counts=None):
    """E over S_n of prod over cycles of (z2 if m divides the length else z1), by cycle type.

    ``counts`` defaults to the exhaustive S_n census for n <= 8 and to n!/z_mu beyond.
    """
    if counts is None:
        counts = cycle_type_counts(n) if n <= 8 else {mu: math.factorial(n) // z_mu(mu) for mu in partitions(n)}
    total = sum(counts.values())
    acc = 0j
    for mu, c in counts.items():
        acc += c * math.prod(z2 if part % m == 0 else z1 for part in mu)
    return complex(acc / total)
