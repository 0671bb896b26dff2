"""
Means and variances of arithmetic functions in short intervals
==============================================================

Average the Moebius function and the divisor function over intervals
I(f0, h) and arithmetic progressions, and compare the variance computed by
brute force with the character-sum formula.
"""
from ffmv import PolyRing, meanval

ring = PolyRing.of(2)
n, h = 8, 4
f0 = (1, 1, 0, 1, 0, 0, 1, 0, 1)

for alpha in (meanval.MOEBIUS, meanval.divisor_function(2), meanval.LAMBDA):
    rep = meanval.mean_interval(alpha, f0, h, ring)
    print(f"{alpha.name:>6}: interval mean {rep.lhs_mean.real:.4f}  global {rep.ref_mean.real:.4f}"
          f"  |diff| {rep.abs_diff:.4f} <= {rep.bound_rhs:.1f}")

# the divisor function has mean n + 1 over all monics of degree n
print([round(meanval.mean_over(ring, k, meanval.divisor_function(2)).real, 6) for k in range(1, 8)])

for alpha in (meanval.MOEBIUS, meanval.MOEBIUS_SQ):
    v = meanval.variance_interval(alpha, n, h, ring)
    print(alpha.name, "variance: brute", round(v.brute, 9), "formula", round(v.formula, 9))

v = meanval.variance_ap(meanval.LAMBDA, 6, (1, 1, 1), ring)
print("lambda mod T^2+T+1:", round(v.brute, 9), round(v.formula, 9), "surrogate", round(v.surrogate, 1))

# H_q(n, d): how many degree-n monics have a divisor of degree d
print([meanval.count_H(ring, 10, d) for d in range(11)])
