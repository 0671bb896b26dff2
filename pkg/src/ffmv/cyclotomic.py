"""Exact roots of unity and exact zero tests for sums of them.

A sum ``sum_k c_k * zeta_N**k`` with integer ``c_k`` is stored as its count
vector ``c`` of length N.  It vanishes iff the polynomial ``sum c_k x**k`` is
divisible by the N-th cyclotomic polynomial.
"""
import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class RootOfUnity:
    """exp(2*pi*i*k/n) with k reduced mod n and the fraction k/n in lowest terms.

    ``n == 0`` marks the distinguished zero value taken on non-invertible inputs.
    """

    k: int
    n: int

    def __post_init__(self):
        if self.n:
            k = self.k % self.n
            g = math.gcd(k, self.n)
            object.__setattr__(self, "k", k // g)
            object.__setattr__(self, "n", self.n // g)
        else:
            object.__setattr__(self, "k", 0)

    @property
    def is_zero(self):
        return self.n == 0

    def __mul__(self, other):
        if self.is_zero or other.is_zero:
            return ZERO
        n = self.n * other.n // math.gcd(self.n, other.n)
        return RootOfUnity(self.k * (n // self.n) + other.k * (n // other.n), n)

    def conjugate(self):
        return self if self.is_zero else RootOfUnity(-self.k, self.n)

    def __pow__(self, e):
        if self.is_zero:
            return ZERO if e else ONE
        return RootOfUnity(self.k * e, self.n)

    def __complex__(self):
        if self.is_zero:
            return 0j
        return cmath.exp(2j * math.pi * self.k / self.n)

    def __str__(self):
        return "0" if self.is_zero else f"{self.k}/{self.n}"


ZERO = RootOfUnity(0, 0)
ONE = RootOfUnity(0, 1)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Integer coefficients (ascending) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, cyclotomic_polynomial(d))
    return tuple(num)


def _exact_div(num, den):
    num = list(num)
    dd = len(den) - 1
    quo = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quo[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    assert not any(num), "cyclotomic division left a remainder"
    return quo


def reduce_counts(counts, n):
    """Canonical coordinates of sum counts[k]*zeta_n**k in the basis 1..zeta**(phi(n)-1)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    r = [int(c) for c in counts]
    for i in range(len(r) - 1, deg - 1, -1):
        c = r[i]
        if c:
            for j in range(deg + 1):
                r[i - deg + j] -= c * phi[j]
    return tuple(r[:deg]) + (0,) * max(0, deg - len(r))


@lru_cache(maxsize=None)
def reduction_matrix(n):
    """Integer matrix R with R @ counts == reduce_counts(counts, n) for length-n count vectors."""
    deg = len(cyclotomic_polynomial(n)) - 1
    R = np.zeros((deg, n), dtype=np.int64)
    for k in range(n):
        e = [0] * n
        e[k] = 1
        R[:, k] = reduce_counts(e, n)
    R.setflags(write=False)
    return R


def is_zero_sum(counts, n):
    """True iff sum counts[k]*zeta_n**k == 0 exactly."""
    return not any(reduce_counts(counts, n))


def exponent_counts(exponents, n, weights=None):
    """Bincount of exponents mod n, the count vector of a sum of roots of unity."""
    exps = np.asarray(exponents, dtype=np.int64) % n
    if weights is None:
        return np.bincount(exps, minlength=n)
    return np.bincount(exps, weights=weights, minlength=n)


def counts_to_complex(counts, n):
    k = np.arange(len(counts))
    return complex(np.sum(np.asarray(counts) * np.exp(2j * np.pi * k / n)))
