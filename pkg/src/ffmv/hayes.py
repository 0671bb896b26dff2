"""Hayes equivalence classes, their unit groups and character groups.

A monic f is classified mod R_{l,M} by its first l next-to-leading
coefficients together with its residue mod M.  The top part multiplies like
the truncated power series ``1 + a_{n-1} u + a_{n-2} u^2 + ...`` mod
``u^(l+1)`` (the reversal of f), so the unit group splits as

    (truncated series group) x prod_{P^e || M} (F_q[T]/P^e)^x

and each factor is decomposed into cyclic groups of prime-power order by
brute force.
"""
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import budget
from .cyclotomic import ONE, ZERO, RootOfUnity, exponent_counts, reduce_counts
from .errors import (DegreeTooSmall, NotMonic, OrthogonalityViolation,
                     ZeroModulus)
from .ffpoly import lcm


@dataclass(frozen=True)
class HayesClass:
    top: tuple
    residue: tuple


def top_coefficients(f, ell):
    """First ell next-to-leading coefficients; positions past deg f count as 0."""
    n = len(f) - 1
    return tuple(f[n - j] if n - j >= 0 else 0 for j in range(1, ell + 1))


def class_of(ring, f, ell, M):
    if not M:
        raise ZeroModulus("modulus must be nonzero")
    if not ring.is_monic(f):
        raise NotMonic(f"{list(f)} is not monic")
    return HayesClass(top_coefficients(f, ell), ring.mod(f, M))


def series_mul(ring, a, b):
    """Product of 1 + a_1 u + ... and 1 + b_1 u + ... truncated after u^len(a)."""
    add, mul = ring.field.add_table, ring.field.mul_table
    ell = len(a)
    out = list(a)
    for j in range(ell):
        c = add[out[j]][b[j]]
        for i in range(j):
            c = add[c][mul[a[i]][b[j - 1 - i]]]
        out[j] = c
    return tuple(out)


def class_mul(ring, x, y, M):
    return HayesClass(series_mul(ring, x.top, y.top), ring.mod(ring.mul(x.residue, y.residue), M))


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _power(x, e, mul, one):
    out = one
    while e:
        if e & 1:
            out = mul(out, x)
        x = mul(x, x)
        e >>= 1
    return out


def decompose_abelian(elements, mul, one):
    """Cyclic decomposition of a finite abelian group given by its element list.

    Returns ``(gens, orders, log)``: generators of prime-power order, their
    orders, and a dict sending each element to its exponent vector.  Works
    one Sylow subgroup at a time; inside a p-group it repeatedly takes an
    element of maximal order modulo the span so far and corrects it by an
    element of the span so that its true order equals that quotient order.
    """
    n = len(elements)
    gens, orders = [], []
    for p in _prime_factors(n):
        pa = 1
        while n % (pa * p) == 0:
            pa *= p
        cof = n // pa
        sylow = list(dict.fromkeys(_power(x, cof, mul, one) for x in elements))
        assert len(sylow) == pa, "Sylow subgroup has the wrong size"
        span = {one: ()}
        while len(span) < pa:
            best, best_k, best_y = None, 0, None
            for x in sylow:
                if x in span:
                    continue
                k, y = 0, x
                while y not in span:
                    y = _power(y, p, mul, one)
                    k += 1
                if k > best_k:
                    best, best_k, best_y = x, k, y
            e = p**best_k
            h = next((h for h in span if _power(h, e, mul, one) == best_y), None)
            if h is None:
                raise AssertionError("no correction element found; group is not abelian?")
            g = mul(best, _power(h, pa - 1, mul, one))
            new_span, gj = {}, one
            for j in range(e):
                for el, v in span.items():
                    new_span[mul(el, gj)] = v + (j,)
                gj = mul(gj, g)
            assert len(new_span) == len(span) * e
            span = new_span
            gens.append(g)
            orders.append(e)
    log = _build_log(gens, orders, mul, one)
    if len(log) != n:
        raise AssertionError("generators do not span the group")
    return gens, orders, log


def _build_log(gens, orders, mul, one):
    log = {one: ()}
    for g, d in zip(gens, orders):
        new, gj = {}, one
        for j in range(d):
            for el, v in log.items():
                new[mul(el, gj)] = v + (j,)
            gj = mul(gj, g)
        log = new
    return log


_COMPONENT_CACHE = {}
_RESIDUE_CACHE = {}


@dataclass
class _Component:
    elements: list
    gens: list
    orders: list
    log: dict


def _short_interval_component(ring, ell):
    key = (ring.field.key, "U", ell)
    comp = _COMPONENT_CACHE.get(key)
    if comp is None:
        elements = list(itertools.product(range(ring.q), repeat=ell))
        one = (0,) * ell
        gens, orders, log = decompose_abelian(elements, lambda a, b: series_mul(ring, a, b), one)
        comp = _COMPONENT_CACHE[key] = _Component(elements, gens, orders, log)
    return comp


def _prime_power_component(ring, P, e):
    key = (ring.field.key, "P", P, e)
    comp = _COMPONENT_CACHE.get(key)
    if comp is None:
        Q = ring.power(P, e)
        d = len(Q) - 1
        elements = []
        for c in itertools.product(range(ring.q), repeat=d):
            r = ring._trim(list(c))
            if ring.mod(r, P):
                elements.append(r)

        def mul(a, b):
            return ring.mod(ring.mul(a, b), Q)

        m = len(elements)
        if e == 1 and m > 1:
            # F_q[T]/P is a field: its unit group is cyclic
            primes = _prime_factors(m)
            g = next(x for x in elements if all(_power(x, m // p, mul, (1,)) != (1,) for p in primes))
            gens, orders = [g], [m]
            log = _build_log(gens, orders, mul, (1,))
        else:
            gens, orders, log = decompose_abelian(elements, mul, (1,))
        comp = _COMPONENT_CACHE[key] = _Component(elements, gens, orders, log)
    return comp


@dataclass
class _ResiduePart:
    residues: list
    logs: np.ndarray
    orders: list
    gens: list
    lookup: np.ndarray


def _residue_part(ring, M):
    """Units of F_q[T]/M assembled from its prime-power components by CRT (cached per M)."""
    key = (ring.field.key, M)
    part = _RESIDUE_CACHE.get(key)
    if part is not None:
        return part
    d = len(M) - 1
    add, _ = ring.np_tables
    arr = np.zeros((1, d), dtype=np.int64)
    logs = np.zeros((1, 0), dtype=np.int64)
    orders, comps, idempotents = [], [], []
    for P, e in ring.factor(M):
        Q = ring.power(P, e)
        comp = _prime_power_component(ring, P, e)
        other = ring.divmod(M, Q)[0]
        # E = other * (other^-1 mod Q) is 1 mod Q and 0 mod M/Q
        _, s, _ = ring.ext_gcd(other, Q)
        E = ring.mod(ring.mul(other, s), M)
        comps.append(comp)
        idempotents.append(E)
        dq = len(Q) - 1
        elem = np.zeros((len(comp.elements), dq), dtype=np.int64)
        for i, r in enumerate(comp.elements):
            elem[i, :len(r)] = r
        contrib = ring.combine_rows(elem, ring.reduction_basis(M, dq, E))
        clogs = np.array([comp.log[r] for r in comp.elements], dtype=np.int64).reshape(len(comp.elements), len(comp.orders))
        m0, m1 = len(arr), len(contrib)
        arr = add[arr[:, None, :], contrib[None, :, :]].reshape(m0 * m1, d)
        logs = np.hstack([np.repeat(logs, m1, axis=0), np.tile(clogs, (m0, 1))])
        orders += comp.orders
    residues = [ring._trim(list(row)) for row in arr.tolist()]
    codes = arr @ (ring.q ** np.arange(d, dtype=np.int64))
    lookup = np.full(ring.q**d, -1, dtype=np.int64)
    lookup[codes] = np.arange(len(arr))
    if len(set(codes.tolist())) != len(arr):
        raise AssertionError("CRT assembly produced duplicate residues")
    gens = []
    for i, comp in enumerate(comps):
        for g in comp.gens:
            r = ()
            for j, E in enumerate(idempotents):
                r = ring.add(r, ring.mul(g if j == i else (1,), E))
            gens.append(ring.mod(r, M))
    part = _RESIDUE_CACHE[key] = _ResiduePart(residues, logs, orders, gens, lookup)
    return part


class UnitGroup:
    """(M / R_{l,M})^x with a cyclic decomposition and a discrete-log table.

    Unit classes are indexed ``top_index * phi(M) + residue_index``, where the
    top index is the base-q number with the first next-to-leading
    coefficient most significant; ``logs`` holds the exponent vector of
    every class in that order.
    """

    def __init__(self, ring, ell, M):
        if not M:
            raise ZeroModulus("modulus must be nonzero")
        if ell < 0:
            raise ValueError("ell must be >= 0")
        M = ring.monic(M)
        self.ring, self.ell, self.M = ring, ell, M
        self.deg_M = len(M) - 1
        self.phi = ring.euler_phi(M)
        self.order = ring.q**ell * self.phi
        budget.check_group(self.order)

        U = _short_interval_component(ring, ell)
        R = _residue_part(ring, M)
        self.tops = U.elements
        self.residues = R.residues
        self._res_index = {r: i for i, r in enumerate(R.residues)}
        self._res_lookup = R.lookup
        top_logs = np.array([U.log[t] for t in self.tops], dtype=np.int64).reshape(len(self.tops), len(U.orders))
        self.orders = list(U.orders) + list(R.orders)
        self.exponent = lcm(*self.orders)
        self.logs = np.hstack([np.repeat(top_logs, self.phi, axis=0),
                               np.tile(R.logs, (len(self.tops), 1))])
        unit_res = (1,) if self.deg_M >= 1 else ()
        self.generators = ([HayesClass(g, unit_res) for g in U.gens]
                           + [HayesClass((0,) * ell, r) for r in R.gens])
        self._idx_cache = {}

    @property
    def rank(self):
        return len(self.orders)

    def classes(self):
        return [HayesClass(t, r) for t in self.tops for r in self.residues]

    def _top_code(self, top):
        code = 0
        for t in top:
            code = code * self.ring.q + t
        return code

    def index(self, cls):
        """Index of a unit class, or -1 when the class is not invertible."""
        ri = self._res_index.get(cls.residue)
        if ri is None:
            return -1
        return self._top_code(cls.top) * self.phi + ri

    def index_of(self, f):
        ri = self._res_index.get(self.ring.mod(f, self.M))
        if ri is None:
            return -1
        return self._top_code(top_coefficients(f, self.ell)) * self.phi + ri

    def class_at(self, idx):
        t, r = divmod(idx, self.phi)
        return HayesClass(self.tops[t], self.residues[r])

    def dlog(self, cls):
        idx = self.index(cls)
        if idx < 0:
            raise ValueError("class is not invertible")
        return tuple(int(x) for x in self.logs[idx])

    def mul(self, x, y):
        return class_mul(self.ring, x, y, self.M)

    def indices_array(self, C):
        """Class indices (-1 if not invertible) of same-degree monics given as coefficient rows."""
        C = np.asarray(C, dtype=np.int64)
        n = C.shape[1] - 1
        q = self.ring.q
        res = self.ring.residues_array(C, self.M)
        codes = res @ (q ** np.arange(self.deg_M, dtype=np.int64))
        ri = self._res_lookup[codes]
        top = np.zeros(len(C), dtype=np.int64)
        for j in range(1, self.ell + 1):
            top = top * q + (C[:, n - j] if n - j >= 0 else 0)
        return np.where(ri >= 0, top * self.phi + ri, -1)

    def indices(self, polys):
        out = np.empty(len(polys), dtype=np.int64)
        by_len = {}
        for i, f in enumerate(polys):
            by_len.setdefault(len(f), []).append(i)
        for length, pos in by_len.items():
            out[pos] = self.indices_array([polys[i] for i in pos])
        return out

    def monic_indices(self, n):
        """Class indices of every polynomial in ``ring.monic_list(n)`` (cached)."""
        cached = self._idx_cache.get(n)
        if cached is None:
            cached = self._idx_cache[n] = self.indices_array(self.ring.monic_array(n))
        return cached

    def label(self, idx):
        c = self.class_at(idx)
        return "top=(" + ",".join(map(str, c.top)) + ");res=" + self.ring.format(c.residue)


def unit_group(ring, ell, M):
    return UnitGroup(ring, ell, M)


@dataclass(frozen=True, eq=False)
class HayesCharacter:
    group: "CharacterGroup" = field(repr=False)
    exponents: tuple
    index: int
    order: int

    @property
    def is_trivial(self):
        return not any(self.exponents)

    def __call__(self, f):
        idx = self.group.units.index_of(f)
        if idx < 0:
            return ZERO
        return RootOfUnity(int(self.group.exponent_column(self.index)[idx]), self.group.N)

    def value(self, f):
        return complex(self(f))

    def conj(self):
        d = self.group.units.orders
        return self.group.by_exponents(tuple((-a) % di for a, di in zip(self.exponents, d)))

    def __mul__(self, other):
        d = self.group.units.orders
        return self.group.by_exponents(tuple((a + b) % di for a, b, di in zip(self.exponents, other.exponents, d)))

    def __pow__(self, e):
        d = self.group.units.orders
        return self.group.by_exponents(tuple((a * e) % di for a, di in zip(self.exponents, d)))

    @property
    def ident(self):
        g = self.group
        return f"chi[{g.ell},{g.ring.format(g.M)}]#(" + ",".join(map(str, self.exponents)) + ")"

    def __repr__(self):
        return f"HayesCharacter({self.ident}, order={self.order})"


class CharacterGroup:
    """G(R_{l,M}): all q^l phi(M) Hayes characters, trivial character first."""

    def __init__(self, ring, ell, M):
        self.units = UnitGroup(ring, ell, M)
        self.ring, self.ell, self.M = ring, ell, self.units.M
        self.deg_M = self.units.deg_M
        self.N = self.units.exponent
        d = self.units.orders
        exps = np.array(list(itertools.product(*(range(di) for di in d))), dtype=np.int64)
        exps = exps.reshape(len(exps), len(d))
        dd = np.array(d, dtype=np.int64)
        orders = np.lcm.reduce(dd // np.gcd(exps, dd), axis=1) if len(d) else np.ones(1, dtype=np.int64)
        self.characters = [HayesCharacter(self, a, idx, o)
                           for idx, (a, o) in enumerate(zip(map(tuple, exps.tolist()), orders.tolist()))]
        self._by_exp = {c.exponents: c for c in self.characters}
        self._scaled = exps * (self.N // dd) if len(d) else exps
        self._table = None
        self._values = None
        self._columns = {}
        self._sums = {}

    def __len__(self):
        return len(self.characters)

    def __iter__(self):
        return iter(self.characters)

    def __getitem__(self, i):
        return self.characters[i]

    @property
    def trivial(self):
        return self.characters[0]

    def nontrivial(self):
        return self.characters[1:]

    def by_exponents(self, a):
        return self._by_exp[tuple(a)]

    @property
    def table(self):
        """Exponent table E[class, character]: the value is exp(2 pi i E / N)."""
        if self._table is None:
            self._table = (self.units.logs @ self._scaled.T) % self.N
        return self._table

    @property
    def roots(self):
        """exp(2 pi i k / N) for k < N."""
        return np.exp(2j * np.pi * np.arange(self.N) / self.N)

    @property
    def values(self):
        if self._values is None:
            self._values = self.roots[self.table]
        return self._values

    def exponent_column(self, i):
        col = self._columns.get(i)
        if col is None:
            if self._table is not None:
                col = self._table[:, i]
            else:
                col = (self.units.logs @ self._scaled[i]) % self.N
            self._columns[i] = col
        return col

    def class_weights(self, indices, weights=None):
        """Aggregate (optionally weighted) counts of invertible polynomials per unit class."""
        indices = np.asarray(indices)
        ok = indices >= 0
        w = None if weights is None else np.asarray(weights)[ok]
        return np.bincount(indices[ok], weights=w, minlength=self.units.order)

    def char_sums(self, indices, weights=None):
        """Vector over characters of sum_f weight(f) chi(f) for the given class indices."""
        return self.class_weights(indices, weights) @ self.values

    def exact_sum_counts(self, i, indices, weights=None):
        """Count vector (length N) of sum_f weight(f) chi_i(f), for exact zero tests.

        ``weights`` must be integers when given.
        """
        indices = np.asarray(indices)
        ok = indices >= 0
        exps = self.exponent_column(i)[indices[ok]]
        if weights is None:
            return exponent_counts(exps, self.N)
        w = np.asarray(weights)[ok]
        return np.bincount(exps, weights=w, minlength=self.N).astype(np.int64)

    def count_matrix(self, indices, weights=None):
        """Integer matrix C[k, chi] = total weight of polynomials with chi-exponent k.

        Column chi is the count vector of sum_f weight(f) chi(f) as a sum of N-th roots of unity.
        """
        w = self.class_weights(indices, weights).astype(np.int64)
        G = len(self)
        flat = (self.table * G + np.arange(G)).ravel()
        weights = np.broadcast_to(w[:, None], self.table.shape).ravel()
        C = np.bincount(flat, weights=weights, minlength=self.N * G)
        return np.rint(C).astype(np.int64).reshape(self.N, G)

    def monic_sums(self, m):
        """S(m, chi) = sum over M_m of chi, for every character (cached)."""
        key = ("monic", m)
        if key not in self._sums:
            self._sums[key] = self.char_sums(self.units.monic_indices(m))
        return self._sums[key]

    def prime_indices(self, d):
        key = ("prime_idx", d)
        if key not in self._sums:
            self._sums[key] = self.units.indices(self.ring.irreducibles(d))
        return self._sums[key]

    def prime_sums(self, d, power=1):
        """sum over P_d of chi(P)**power, for every character (cached)."""
        key = ("prime", d, power)
        if key not in self._sums:
            w = self.class_weights(self.prime_indices(d))
            self._sums[key] = w @ self.roots[(power * self.table) % self.N]
        return self._sums[key]

    def representatives(self):
        """One monic polynomial per invertible class: the invertible part of M_{l+deg M}."""
        n = self.ell + self.deg_M
        idx = self.units.monic_indices(n)
        polys = self.ring.monic_list(n)
        reps = [None] * self.units.order
        pos = np.flatnonzero(idx >= 0)
        if len(np.unique(idx[pos])) != len(pos):
            raise AssertionError("class represented twice in M_{l+deg M}")
        for i in pos.tolist():
            reps[idx[i]] = polys[i]
        return reps

    def table_rows(self):
        """Rows for CSV export: header then one row per unit class with k/N entries."""
        header = ["class"] + [c.ident for c in self.characters]
        rows = [header]
        tab = self.table
        for idx in range(self.units.order):
            rows.append([self.units.label(idx)] + [str(RootOfUnity(int(e), self.N)) for e in tab[idx]])
        return rows


def characters(ring, ell, M):
    return CharacterGroup(ring, ell, M).characters


def evaluate(chi, f):
    return chi(f)


def gap_set(group, A, n):
    """All f in M_n with f = A mod R_{l,M}."""
    units = group.units if isinstance(group, CharacterGroup) else group
    if n < units.ell + units.deg_M:
        raise DegreeTooSmall(f"n={n} < l + deg M = {units.ell + units.deg_M}")
    target = units.index(A)
    if target < 0:
        raise ValueError("GAP sets are defined for invertible classes")
    idx = units.monic_indices(n)
    polys = units.ring.monic_list(n)
    return [f for f, i in zip(polys, idx) if i == target]


@dataclass
class OrthogonalityReport:
    ell: int
    M: tuple
    q: int
    order: int
    n: int
    ortho1_err: float
    orthouse_err: float
    ortho2_err: float
    exact: bool
    ok: bool


def verify_orthogonality(group, n=None, exact=False, tol=1e-9, strict=True):
    """Check both orthogonality relations and the M_n sum relation for one group.

    In exact mode each character sum is reduced modulo the cyclotomic
    polynomial and compared with its expected integer; errors are then 0 or 1.
    """
    units = group.units
    G = units.order
    n0 = group.ell + group.deg_M
    if n is None:
        n = n0
    if n < n0:
        raise DegreeTooSmall(f"n={n} < l + deg M")
    reps = group.representatives()
    if any(r is None for r in reps):
        raise OrthogonalityViolation("M_{l+deg M} misses an invertible class")
    rep_idx = units.indices(reps)
    q = group.ring.q
    mn_idx = units.monic_indices(n)
    scale = q ** (n - group.deg_M) * group.units.phi

    if not exact:
        V = group.values[rep_idx]
        e1 = float(np.max(np.abs(V.conj().T @ V / G - np.eye(len(group)))))
        e2 = float(np.max(np.abs(V @ V.conj().T / G - np.eye(G))))
        s = group.char_sums(mn_idx) / scale
        target = np.zeros(len(group))
        target[0] = 1.0
        eu = float(np.max(np.abs(s - target)))
        ok = max(e1, e2, eu) < tol
    else:
        N = group.N
        tab = group.table[rep_idx]
        e1 = e2 = eu = 0.0
        for i in range(len(group)):
            for j in range(len(group)):
                red = reduce_counts(exponent_counts(tab[:, i] - tab[:, j], N), N)
                if red != (G if i == j else 0,) + (0,) * (len(red) - 1):
                    e1 = 1.0
        for a in range(G):
            for b in range(G):
                red = reduce_counts(exponent_counts(tab[a] - tab[b], N), N)
                if red != (G if a == b else 0,) + (0,) * (len(red) - 1):
                    e2 = 1.0
        for i in range(len(group)):
            red = reduce_counts(group.exact_sum_counts(i, mn_idx), N)
            if red != (scale if i == 0 else 0,) + (0,) * (len(red) - 1):
                eu = 1.0
        ok = not (e1 or e2 or eu)
    report = OrthogonalityReport(group.ell, group.M, q, G, n, e1, eu, e2, exact, ok)
    if strict and not ok:
        raise OrthogonalityViolation(str(report))
    return report


def split_character(chi, si_group=None, dir_group=None):
    """Find chi_si in G(R_{l,1}) and chi_dir in G(R_{0,M}) with chi = chi_si * chi_dir on units.

    Matching is exhaustive over both groups; returns the pair or raises.
    """
    g = chi.group
    ring = g.ring
    si_group = si_group or CharacterGroup(ring, g.ell, ring.one)
    dir_group = dir_group or CharacterGroup(ring, 0, g.M)
    units = g.units
    col = g.values[:, chi.index].reshape(len(units.tops), units.phi)
    si_vals = si_group.values  # classes are tops
    dir_vals = dir_group.values  # classes are residues
    si_order = [si_group.units.index(HayesClass(t, ())) for t in units.tops]
    dir_order = [dir_group.units.index(HayesClass((), r)) for r in units.residues]
    for a in si_group:
        va = si_vals[si_order, a.index]
        for b in dir_group:
            vb = dir_vals[dir_order, b.index]
            if np.allclose(np.outer(va, vb), col, atol=1e-9):
                return a, b
    raise AssertionError(f"{chi.ident} is not a product of short-interval and Dirichlet characters")
