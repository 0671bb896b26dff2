"""Exact arithmetic in F_q and F_q[T].

Field elements are encoded as integers ``0 .. q-1``: the element with
power-basis coordinates ``(c_0, ..., c_{k-1})`` over F_p has code
``sum(c_i * p**i)``.  Polynomials are tuples of element codes in ascending
order with no trailing zeros; the zero polynomial is ``()``.
"""
import itertools
import json
import math
import re
from dataclasses import dataclass

import numpy as np

from . import budget
from .errors import (DivisionByZero, NonPrimeP, NotMonic, ReducibleModulus,
                     ZeroModulus, ZeroPolynomial)

NEG_INF = float("-inf")


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q):
    """Return (p, k) with q = p**k, or raise NonPrimeP."""
    if q < 2:
        raise NonPrimeP(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    if r != 1:
        raise NonPrimeP(f"{q} is not a prime power")
    return p, k


class Field:
    """The finite field F_p[x]/(modulus) with precomputed operation tables."""

    def __init__(self, p, k=1, modulus=None):
        if not is_prime(p):
            raise NonPrimeP(f"p={p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p, self.k, self.q = p, k, p**k
        if k == 1:
            self.modulus = (0, 1)
        else:
            if modulus is None:
                modulus = find_irreducible_modulus(p, k)
            modulus = tuple(int(c) for c in modulus)
            if len(modulus) != k + 1 or any(not 0 <= c < p for c in modulus):
                raise ReducibleModulus(f"modulus must have {k + 1} coefficients in [0,{p})")
            if modulus[-1] != 1:
                raise ReducibleModulus("modulus must be monic")
            if not PolyRing(Field(p)).is_irreducible(modulus):
                raise ReducibleModulus(f"{list(modulus)} is reducible over F_{p}")
            self.modulus = modulus
        self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        vecs = [self._digits(a) for a in range(q)]
        self.add_table = [[self._code([(x + y) % p for x, y in zip(vecs[a], vecs[b])])
                           for b in range(q)] for a in range(q)]
        self.neg_table = [self._code([(-x) % p for x in vecs[a]]) for a in range(q)]
        self.sub_table = [[self.add_table[a][self.neg_table[b]] for b in range(q)]
                          for a in range(q)]
        if k == 1:
            self.mul_table = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            mod = self.modulus
            self.mul_table = [[0] * q for _ in range(q)]
            for a in range(q):
                for b in range(a, q):
                    prod = [0] * (2 * k - 1)
                    for i, x in enumerate(vecs[a]):
                        if x:
                            for j, y in enumerate(vecs[b]):
                                prod[i + j] = (prod[i + j] + x * y) % p
                    for i in range(2 * k - 2, k - 1, -1):
                        c = prod[i]
                        if c:
                            for j in range(k + 1):
                                prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
                    self.mul_table[a][b] = self.mul_table[b][a] = self._code(prod[:k])
        self.inv_table = [None] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    self.inv_table[a] = b
                    break

    def _digits(self, a):
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def _code(self, vec):
        return sum(c * self.p**i for i, c in enumerate(vec))

    # element operations
    def add(self, a, b):
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.sub_table[a][b]

    def neg(self, a):
        return self.neg_table[a]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero in F_q")
        return self.inv_table[a]

    def from_vector(self, vec):
        vec = list(vec)
        if len(vec) > self.k or any(not 0 <= c < self.p for c in vec):
            raise ValueError(f"bad coordinate vector {vec} for F_{self.q}")
        return self._code(vec)

    def to_vector(self, a):
        return tuple(self._digits(a))

    @property
    def key(self):
        return (self.p, self.k, self.modulus)

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def spec(self):
        s = f"q={self.q}:p={self.p},k={self.k}"
        if self.k > 1:
            s += ",mod=[" + ",".join(map(str, self.modulus)) + "]"
        return s

    def __repr__(self):
        return f"Field({self.spec()!r})"


def find_irreducible_modulus(p, k):
    """Smallest monic irreducible of degree k over F_p, lexicographic on ascending coefficients."""
    ring = PolyRing(Field(p))
    for tail in itertools.product(range(p), repeat=k):
        f = tail + (1,)
        if ring.is_irreducible(f):
            return f
    raise AssertionError("unreachable: irreducibles exist in every degree")


_SPEC_ITEM = re.compile(r"(\w+)\s*=\s*(\[[^\]]*\]|[^,:]+)")


def parse_field_spec(text):
    """Parse ``"q=9:p=3,k=2,mod=[1,0,1]"`` (or just ``"q=5"`` / ``"5"``)."""
    text = str(text).strip()
    if text.isdigit():
        text = f"q={text}"
    params = {m.group(1): m.group(2).strip() for m in _SPEC_ITEM.finditer(text)}
    if "p" in params:
        p, k = int(params["p"]), int(params.get("k", 1))
    elif "q" in params:
        p, k = prime_power(int(params["q"]))
    else:
        raise ValueError(f"cannot parse field spec {text!r}")
    if "q" in params and int(params["q"]) != p**k:
        raise ValueError(f"q={params['q']} inconsistent with p={p}, k={k}")
    modulus = json.loads(params["mod"]) if "mod" in params else None
    return Field(p, k, modulus)


@dataclass(frozen=True, order=True)
class FactorizationType:
    """Multiset of (prime degree, exponent) pairs, stored sorted."""

    pairs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted((int(d), int(e)) for d, e in self.pairs)))

    @property
    def size(self):
        return sum(d * e for d, e in self.pairs)

    @property
    def length(self):
        return len(self.pairs)

    def by_degree(self):
        """Map each prime degree d to the partition formed by its exponents."""
        out = {}
        for d, e in self.pairs:
            out.setdefault(d, []).append(e)
        return {d: tuple(sorted(es, reverse=True)) for d, es in out.items()}

    def __str__(self):
        return "{" + ",".join(f"({d},{e})" for d, e in self.pairs) + "}"


_RINGS = {}


class PolyRing:
    """F_q[T] over a given Field, with enumeration and factorization caches."""

    def __init__(self, field):
        self.field = field
        self.q = field.q
        self._add = field.add_table
        self._sub = field.sub_table
        self._mul = field.mul_table
        self._irreducibles = {}
        self._monics = {}
        self._factors = {}

    @classmethod
    def of(cls, q_or_spec):
        """Convenience constructor from q (int) or a field spec string.

        Rings built from the same q or spec are shared, so their enumeration
        and factorization caches are too.
        """
        if isinstance(q_or_spec, Field):
            return cls(q_or_spec)
        key = (cls, q_or_spec)
        ring = _RINGS.get(key)
        if ring is None:
            ring = _RINGS[key] = cls(parse_field_spec(q_or_spec))
        return ring

    zero = ()
    one = (1,)
    T = (0, 1)

    def __repr__(self):
        return f"PolyRing({self.field.spec()!r})"

    # construction / inspection
    def poly(self, coeffs):
        coeffs = list(coeffs)
        if any(not 0 <= c < self.q for c in coeffs):
            raise ValueError(f"coefficient out of range for F_{self.q}: {coeffs}")
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    @staticmethod
    def degree(f):
        return len(f) - 1 if f else NEG_INF

    def norm(self, f):
        return self.q ** (len(f) - 1) if f else 0

    @staticmethod
    def is_monic(f):
        return bool(f) and f[-1] == 1

    def monic(self, f):
        if not f:
            raise ZeroPolynomial("zero polynomial has no monic associate")
        if f[-1] == 1:
            return f
        return self.scale(self.field.inv(f[-1]), f)

    # arithmetic
    @staticmethod
    def _trim(c):
        while c and c[-1] == 0:
            c.pop()
        return tuple(c)

    def add(self, f, g):
        if len(f) < len(g):
            f, g = g, f
        add = self._add
        out = list(f)
        for i, b in enumerate(g):
            out[i] = add[out[i]][b]
        return self._trim(out)

    def neg(self, f):
        neg = self.field.neg_table
        return tuple(neg[a] for a in f)

    def sub(self, f, g):
        return self.add(f, self.neg(g))

    def scale(self, c, f):
        row = self._mul[c]
        return self._trim([row[a] for a in f])

    def mul(self, f, g):
        if not f or not g:
            return ()
        add, mul = self._add, self._mul
        out = [0] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if a:
                row = mul[a]
                for j, b in enumerate(g):
                    if b:
                        out[i + j] = add[out[i + j]][row[b]]
        return self._trim(out)

    def power(self, f, e):
        out = self.one
        for _ in range(e):
            out = self.mul(out, f)
        return out

    def divmod(self, f, g):
        if not g:
            raise DivisionByZero("polynomial division by zero")
        dg = len(g) - 1
        if len(f) <= dg:
            return (), f
        sub, mul = self._sub, self._mul
        lead_inv = self.field.inv(g[-1])
        r = list(f)
        quot = [0] * (len(f) - dg)
        for i in range(len(r) - 1, dg - 1, -1):
            c = r[i]
            if c:
                c = mul[c][lead_inv]
                quot[i - dg] = c
                row = mul[c]
                base = i - dg
                for j in range(dg + 1):
                    r[base + j] = sub[r[base + j]][row[g[j]]]
        return self._trim(quot), self._trim(r[:dg])

    def mod(self, f, g):
        if not g:
            raise DivisionByZero("polynomial reduction modulo zero")
        dg = len(g) - 1
        if len(f) <= dg:
            return f
        if dg == 0:
            return ()
        sub, mul = self._sub, self._mul
        lead_inv = 1 if g[-1] == 1 else self.field.inv(g[-1])
        r = list(f)
        for i in range(len(r) - 1, dg - 1, -1):
            c = r[i]
            if c:
                row = mul[mul[c][lead_inv]]
                base = i - dg
                for j in range(dg + 1):
                    r[base + j] = sub[r[base + j]][row[g[j]]]
        return self._trim(r[:dg])

    def gcd(self, f, g):
        """Monic gcd; gcd(f, 0) = monic(f) and gcd(0, 0) = 0."""
        while g:
            f, g = g, self.mod(f, g)
        return self.monic(f) if f else ()

    def ext_gcd(self, f, g):
        """Return (d, s, t) with s*f + t*g = d = gcd(f, g) monic."""
        r0, r1, s0, s1, t0, t1 = f, g, self.one, (), (), self.one
        while r1:
            quo, rem = self.divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, self.sub(s0, self.mul(quo, s1))
            t0, t1 = t1, self.sub(t0, self.mul(quo, t1))
        if not r0:
            return (), s0, t0
        c = self.field.inv(r0[-1])
        return self.scale(c, r0), self.scale(c, s0), self.scale(c, t0)

    # vectorized helpers
    @property
    def np_tables(self):
        tabs = getattr(self, "_np_tables", None)
        if tabs is None:
            tabs = self._np_tables = (np.array(self._add, dtype=np.int64),
                                      np.array(self._mul, dtype=np.int64))
        return tabs

    def combine_rows(self, C, B):
        """Row-wise sum_j C[:, j] * B[j] in F_q, via table lookups (B has one row per column of C)."""
        C = np.asarray(C, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.field.k == 1:
            return (C @ B) % self.q
        out = np.zeros((C.shape[0], B.shape[1]), dtype=np.int64)
        add, mul = self.np_tables
        for j in range(C.shape[1]):
            out = add[out, mul[C[:, j:j + 1], B[j][None, :]]]
        return out

    def reduction_basis(self, M, ncols, multiplier=(1,)):
        """Rows T^j * multiplier mod M for j < ncols, zero-padded to deg M."""
        d = len(M) - 1
        B = np.zeros((ncols, d), dtype=np.int64)
        x = self.mod(multiplier, M) if d else ()
        for j in range(ncols):
            B[j, :len(x)] = x
            x = self.mod(self.mul(x, self.T), M) if d else ()
        return B

    def residues_array(self, C, M):
        """Residues mod M of the polynomials whose ascending coefficients are the rows of C.

        Reduction is F_q-linear, so each column is folded in with table lookups;
        the result has shape (len(C), deg M), zero-padded.
        """
        C = np.asarray(C, dtype=np.int64)
        return self.combine_rows(C, self.reduction_basis(M, C.shape[1]))

    def monic_array(self, n):
        """Coefficient matrix (q^n rows, n+1 columns) of ``monic_list(n)``, same order."""
        cache = self.__dict__.setdefault("_monic_arrays", {})
        arr = cache.get(n)
        if arr is None:
            budget.check_enumeration(self.q, n)
            r = np.arange(self.q**n, dtype=np.int64)
            arr = np.empty((self.q**n, n + 1), dtype=np.int64)
            for i in range(n):
                arr[:, i] = (r // self.q ** (n - 1 - i)) % self.q
            arr[:, n] = 1
            cache[n] = arr
        return arr

    # enumeration
    def monics(self, n):
        """All monic polynomials of degree n, lexicographic in ascending coefficients."""
        for tail in itertools.product(range(self.q), repeat=n):
            yield tail + (1,)

    def monic_list(self, n):
        cached = self._monics.get(n)
        if cached is None:
            budget.check_enumeration(self.q, n)
            cached = self._monics[n] = list(self.monics(n))
        return cached

    def irreducibles(self, n):
        if n < 1:
            raise ValueError("irreducibles have degree >= 1")
        cached = self._irreducibles.get(n)
        if cached is None:
            cached = self._irreducibles[n] = self._sieve(n)
        return cached

    # sieve tables are kept only up to this many monics per degree
    SIEVE_LIMIT = 1 << 16

    def _sieve(self, n):
        """Cross out every product P * g with deg P <= n/2; what survives is prime.

        The first P to hit a row is its smallest prime factor (degree first,
        then list order), recorded for factor() when the table is small.
        """
        weights = self.q ** np.arange(n - 1, -1, -1, dtype=np.int64)
        spf = np.full(self.q**n, -1, dtype=np.int64)
        candidates = []
        for d in range(1, n // 2 + 1):
            cofactors = self.monic_array(n - d)
            for P in self.irreducibles(d):
                shifts = np.zeros((n - d + 1, n + 1), dtype=np.int64)
                for j in range(n - d + 1):
                    shifts[j, j:j + d + 1] = P
                hit = self.combine_rows(cofactors, shifts)[:, :n] @ weights
                hit = hit[spf[hit] < 0]
                spf[hit] = len(candidates)
                candidates.append(P)
        if self.q**n <= self.SIEVE_LIMIT:
            self.__dict__.setdefault("_spf", {})[n] = (spf, candidates)
        monics = self.monic_list(n)
        return [monics[i] for i in np.flatnonzero(spf < 0)]

    def is_irreducible(self, f):
        n = len(f) - 1
        if n < 1:
            return False
        for d in range(1, n // 2 + 1):
            for P in self.irreducibles(d):
                if not self.mod(f, P):
                    return False
        return True

    def _smallest_prime_factor(self, f):
        n = len(f) - 1
        if self.q**n <= self.SIEVE_LIMIT:
            self.irreducibles(n)
            spf, candidates = self._spf[n]
            k = int(spf[sum(c * self.q ** (n - 1 - i) for i, c in enumerate(f[:n]))])
            return f if k < 0 else candidates[k]
        for d in range(1, n // 2 + 1):
            for P in self.irreducibles(d):
                if not self.mod(f, P):
                    return P
        return f

    def factor(self, f):
        """Prime factorization of a monic f as a sorted list of (P, e)."""
        if not f:
            raise ZeroPolynomial("cannot factor the zero polynomial")
        if f[-1] != 1:
            raise NotMonic(f"{list(f)} is not monic")
        cached = self._factors.get(f)
        if cached is not None:
            return cached
        if len(f) == 1:
            result = []
        else:
            P = self._smallest_prime_factor(f)
            if P == f:
                result = [(f, 1)]
            else:
                rest = dict(self.factor(self.divmod(f, P)[0]))
                rest[P] = rest.get(P, 0) + 1
                result = sorted(rest.items(), key=lambda pe: (len(pe[0]), pe[0]))
        self._factors[f] = result
        return result

    def factorization_type(self, f):
        return FactorizationType(tuple((len(P) - 1, e) for P, e in self.factor(f)))

    def type_table(self, n):
        """Factorization types of all of M_n: (distinct types, per-polynomial type index).

        Vectorized: for every prime P of degree <= n/2 the exponent of P in
        each row is read off from divisibility by P, P^2, ...; whatever
        degree is left over is a single prime factor of degree > n/2.
        """
        cache = self.__dict__.setdefault("_type_tables", {})
        if n in cache:
            return cache[n]
        C = self.monic_array(n)
        rows = len(C)
        keys = {}
        rem = np.full(rows, n, dtype=np.int64)

        def bump(d, e, mask):
            keys.setdefault((d, e), np.zeros(rows, dtype=np.int64))
            keys[(d, e)] += mask

        for d in range(1, n // 2 + 1):
            for P in self.irreducibles(d):
                ex = np.zeros(rows, dtype=np.int64)
                live = np.arange(rows)
                Pe = P
                while len(Pe) - 1 <= n and len(live):
                    live = live[~np.any(self.residues_array(C[live], Pe), axis=1)]
                    ex[live] += 1
                    Pe = self.mul(Pe, P)
                rem -= d * ex
                for e in range(1, int(ex.max()) + 1):
                    bump(d, e, ex == e)
        for r in np.unique(rem[rem > 0]).tolist():
            bump(r, 1, rem == r)
        order = sorted(keys)
        if order:
            K = np.stack([keys[k] for k in order], axis=1)
            uniq, ids = np.unique(K, axis=0, return_inverse=True)
        else:
            uniq, ids = np.zeros((1, 0), dtype=np.int64), np.zeros(rows, dtype=np.int64)
        types = [FactorizationType(tuple(pair for pair, c in zip(order, row) for _ in range(int(c))))
                 for row in uniq]
        cache[n] = (types, ids.reshape(-1))
        return cache[n]

    def euler_phi(self, M):
        if not M:
            raise ZeroModulus("phi(0) is undefined")
        out = 1
        for P, e in self.factor(self.monic(M)):
            qd = self.q ** (len(P) - 1)
            out *= qd ** (e - 1) * (qd - 1)
        return out

    # text format
    def format(self, f):
        if self.field.k == 1:
            return "[" + ",".join(map(str, f)) + "]" if f else "[]"
        return json.dumps([list(self.field.to_vector(a)) for a in f], separators=(",", ":"))

    def parse(self, text):
        raw = json.loads(text) if isinstance(text, str) else text
        if self.field.k == 1:
            return self.poly([int(c) % self.q if c < 0 else int(c) for c in raw])
        return self.poly([self.field.from_vector(c) if isinstance(c, list) else int(c) for c in raw])

    def pretty(self, f):
        """Human-readable form such as ``T^2 + 2``; extension-field coefficients print as codes."""
        if not f:
            return "0"
        terms = []
        for i in range(len(f) - 1, -1, -1):
            c = f[i]
            if not c:
                continue
            mono = "" if i == 0 else ("T" if i == 1 else f"T^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{mono}" if self.field.k == 1 else f"<{c}>{mono}")
        return " + ".join(terms)


def count_coprime_brute(ring, M):
    """Number of residues mod M coprime to M, by direct enumeration."""
    d = len(M) - 1
    return sum(1 for c in itertools.product(range(ring.q), repeat=d)
               if ring.gcd(ring._trim(list(c)), M) == ring.one)


def lcm(*xs):
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out
