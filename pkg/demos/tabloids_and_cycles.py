"""
Brick tabloids, base change and permutation cycles
==================================================

The combinatorics behind the factorization-type bounds: brick tabloids
convert monomial symmetric functions to power sums, and the exponential
formula gives cycle statistics of random permutations.
"""
import math

import numpy as np

from ffmv import symcomb

tabs = symcomb.brick_tabloids((3, 2, 1, 1), (4, 3))
for t in tabs:
    print(t.rows, t.weight)
print("total weight", sum(t.weight for t in tabs))

# m_lambda evaluated directly and through the power-sum expansion
rng = np.random.default_rng(0)
xs = rng.normal(size=(6, 3)) + 1j * rng.normal(size=(6, 3))
lam = (3, 2, 1)
print(symcomb.monomial_eval(lam, xs))
print(symcomb.base_change_eval(lam, xs))

# cycle-type probabilities in S_6
for mu in symcomb.partitions(6)[:5]:
    print(tuple(mu), symcomb.cycle_probability(mu))

# partial sums of tabloid counts stay below partial sums of binomials
mu = (5, 3, 1)
series = symcomb.bsum_series(mu)
print([sum(series[: k + 1]) for k in range(10)])
print([sum(math.comb(9, i) for i in range(k + 1)) for k in range(10)])
