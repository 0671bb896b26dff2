"""
Characters of F_q[T] and their L-polynomials
=============================================

Build the character group for short intervals (l) and a modulus M, then look
at the inverse roots of each L-polynomial.  Every root should sit on
|z| = 1 or |z| = sqrt(q).
"""
import numpy as np

from ffmv import CharacterGroup, PolyRing, lfunc

ring = PolyRing.of(3)
g = CharacterGroup(ring, 1, (1, 0, 1))      # l = 1, M = T^2 + 1
print(len(g), "characters, group orders", g.units.orders)

# first few rows of the character table, as fractions of a turn
for row in g.table_rows()[:4]:
    print(row[:5])

roots = lfunc.group_inverse_roots(g)
for c in g.nontrivial()[:6]:
    L = lfunc.l_polynomial(c)
    mods = np.round(np.abs(roots[c.index]), 6)
    print(c.ident, "degree", L.degree, "|gamma|", mods.tolist())

# sum of Lambda(f) chi(f) over degree-n monics is minus the n-th power sum of the roots
chi = g.nontrivial()[3]
for n in range(1, 6):
    lam = lfunc.von_mangoldt_sums(g, n)[chi.index]
    print(n, np.round(lam, 9), np.round(-np.sum(roots[chi.index] ** n), 9))
