"""Verification suites over parameter grids.

Every check returns a list of ``CheckResult`` records.  The ``desk`` profile
reproduces the grids the acceptance tests run; ``smoke`` is a fast subset
and ``deep`` pushes each grid further.
"""
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import expsum, lfunc, meanval, symcomb
from .ffpoly import PolyRing
from .hayes import CharacterGroup, verify_orthogonality


@dataclass
class CheckResult:
    suite: str
    name: str
    config: dict
    lhs: float
    rhs: float
    ok: bool
    extra: dict = field(default_factory=dict)

    @property
    def slack_ratio(self):
        if self.rhs == 0:
            return 0.0 if self.lhs == 0 else math.inf
        return self.lhs / self.rhs

    def as_dict(self):
        d = asdict(self)
        d["slack_ratio"] = self.slack_ratio
        return d


PROFILES = {
    "smoke": dict(
        group_qs=(2, 3), max_order=30, prime_n={2: 5, 3: 4, 4: 3, 5: 3},
        mean_qs=(2,), mean_span=2, mean_nmax=6,
        type_sizes={2: 5, 3: 4}, type_span=2,
        sym_n=5, perm_n=6, bsum_n=6, exp_n=6, exp_ms=(2, 3), exp_pairs=4,
        sum_n=20, binom_n=30, gen_t=(2, 3), gen_r=range(2, 6), gen_n=10,
        d2_qs=(2, 3), d2_n=5, mu_qs=(2,), mu_n=8, H_q=2, H_n=8,
    ),
    "desk": dict(
        group_qs=(2, 3, 4, 5), max_order=200, prime_n={2: 8, 3: 8, 4: 5, 5: 5},
        mean_qs=(2, 3), mean_span=3, mean_nmax=8,
        type_sizes={2: 7, 3: 5}, type_span=2,
        sym_n=7, perm_n=8, bsum_n=9, exp_n=8, exp_ms=(2, 3, 4), exp_pairs=10,
        sum_n=40, binom_n=60, gen_t=(2, 3, 4), gen_r=range(2, 11), gen_n=20,
        d2_qs=(2, 3, 5), d2_n=7, mu_qs=(2, 3), mu_n=10, H_q=2, H_n=12,
    ),
    "deep": dict(
        group_qs=(2, 3, 4, 5, 7), max_order=400, prime_n={2: 10, 3: 8, 4: 6, 5: 5, 7: 4},
        mean_qs=(2, 3), mean_span=4, mean_nmax=9,
        type_sizes={2: 9, 3: 6}, type_span=3,
        sym_n=8, perm_n=9, bsum_n=10, exp_n=10, exp_ms=(2, 3, 4, 5), exp_pairs=20,
        sum_n=80, binom_n=120, gen_t=(2, 3, 4, 5), gen_r=range(2, 16), gen_n=30,
        d2_qs=(2, 3, 5), d2_n=8, mu_qs=(2, 3), mu_n=12, H_q=2, H_n=14,
    ),
}


def _pmap(func, items, workers):
    if workers and workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(func, items))
    return [func(x) for x in items]


def group_grid(qs, max_order):
    """Every (q, l, M) with q^l phi(M) <= max_order.

    Degrees of M stop once q^d prod_{deg P <= d} (1 - q^-deg P) exceeds the
    cap, a lower bound for phi over all monic M of degree d.
    """
    out = []
    for q in qs:
        ring = PolyRing.of(q)
        for dm in itertools.count():
            floor = q**dm * math.prod((1 - q**-d) ** len(ring.irreducibles(d)) for d in range(1, dm + 1))
            if floor > max_order:
                break
            for M in ring.monics(dm):
                phi = ring.euler_phi(M)
                ell = 0
                while q**ell * phi <= max_order:
                    out.append((q, ell, M))
                    ell += 1
    return out


def span_grid(qs, span):
    """Every (q, l, M) with l + deg M <= span."""
    out = []
    for q in qs:
        ring = PolyRing.of(q)
        for dm in range(span + 1):
            for M in ring.monics(dm):
                for ell in range(span - dm + 1):
                    out.append((q, ell, M))
    return out


def _cfg(q, ell, M):
    return {"q": q, "l": ell, "M": list(M)}


# Hayes characters and L-functions

def _ortho_one(args):
    q, ell, M, exact = args
    g = CharacterGroup(PolyRing.of(q), ell, M)
    rep = verify_orthogonality(g, exact=exact, strict=False)
    err = max(rep.ortho1_err, rep.ortho2_err, rep.orthouse_err)
    return CheckResult("orthogonality", "ortho", _cfg(q, ell, M), err, 1e-9, rep.ok)


def check_orthogonality(p, workers=1, exact=False, grid=None):
    grid = grid or group_grid(p["group_qs"], p["max_order"])
    return _pmap(_ortho_one, [(q, l, M, exact) for q, l, M in grid], workers)


def _rh_one(args):
    q, ell, M, tol = args
    g = CharacterGroup(PolyRing.of(q), ell, M)
    data = lfunc._l_data(g)
    roots = lfunc.group_inverse_roots(g)
    max_deg = int(data.degrees[1:].max()) if len(g) > 1 else -1
    allroots = np.concatenate([np.zeros(0, dtype=complex)] + roots[1:])
    worst = float(lfunc._deviation(allroots, q).max()) if len(allroots) else 0.0
    cfg = _cfg(q, ell, M)
    return [CheckResult("rh", "degree", cfg, max_deg, ell + g.deg_M - 1, max_deg <= ell + g.deg_M - 1),
            CheckResult("rh", "root_modulus", cfg, worst, tol, worst < tol)]


def check_rh(p, workers=1, tol=lfunc.RH_TOL, grid=None):
    grid = grid or group_grid(p["group_qs"], p["max_order"])
    return [r for rs in _pmap(_rh_one, [(q, l, M, tol) for q, l, M in grid], workers) for r in rs]


def _prime_one(args):
    q, ell, M, nmax = args
    g = CharacterGroup(PolyRing.of(q), ell, M)
    out = []
    for n in range(1, nmax + 1):
        sums = np.abs(g.prime_sums(n))
        rhs = np.array([lfunc.prime_bound(q, n, ell, g.deg_M, c.is_trivial) for c in g])
        ratio = float(np.max(sums / rhs))
        out.append(CheckResult("prime-bound", "prime_sum", {**_cfg(q, ell, M), "n": n},
                               ratio, 1.0, ratio <= 1 + 1e-9))
    return out


def check_prime_bound(p, workers=1, grid=None):
    grid = grid or group_grid(p["group_qs"], p["max_order"])
    return [r for rs in _pmap(_prime_one, [(q, l, M, p["prime_n"][q]) for q, l, M in grid], workers)
            for r in rs]


def _lambda_trace_one(args):
    """sum_{M_n} Lambda chi = -sum gamma^n, checked for n up to nmax."""
    q, ell, M, nmax = args
    g = CharacterGroup(PolyRing.of(q), ell, M)
    roots = lfunc.group_inverse_roots(g)
    worst = 0.0
    for n in range(1, nmax + 1):
        lam = lfunc.von_mangoldt_sums(g, n)
        for c in g.nontrivial():
            worst = max(worst, abs(lam[c.index] + np.sum(roots[c.index] ** n)))
    return CheckResult("rh", "lambda_trace", {**_cfg(q, ell, M), "nmax": nmax}, worst, 1e-6, worst < 1e-6)


# factorization types and the explicit bound

def alpha_family(n):
    return [meanval.LAMBDA, meanval.MOEBIUS, meanval.MOEBIUS_SQ, meanval.divisor_function(2),
            meanval.divisor_function(3), meanval.has_divisor_deg(n // 2), meanval.HOOLEY_DELTA]


def _mean_var_one(args):
    q, ell, M, nmax = args
    g = CharacterGroup(PolyRing.of(q), ell, M)
    out = []
    for n in range(ell + g.deg_M, nmax + 1):
        if n == 0:
            continue
        for alpha in alpha_family(n):
            cfg = {**_cfg(q, ell, M), "n": n, "alpha": alpha.name}
            try:
                diff = meanval.gap_means(g, n, alpha, tol=math.inf).max_diff
            except Exception as exc:  # reported, not raised
                out.append(CheckResult("mean-var", "gap_mean", cfg, math.inf, 1e-9, False, {"error": str(exc)}))
                continue
            out.append(CheckResult("mean-var", "gap_mean", cfg, diff, 1e-9, diff <= 1e-9))
            v = meanval.variance_gap(g, n, alpha)
            err = abs(v.brute - v.formula)
            out.append(CheckResult("mean-var", "variance", cfg, err,
                                   1e-12 if max(v.brute, v.formula) < 1e-6 else 1e-9 * max(v.brute, v.formula),
                                   v.agree, {"brute": v.brute, "formula": v.formula}))
    return out


def check_mean_var(p, workers=1, grid=None):
    grid = grid or span_grid(p["mean_qs"], p["mean_span"])
    return [r for rs in _pmap(_mean_var_one, [(q, l, M, p["mean_nmax"]) for q, l, M in grid], workers)
            for r in rs]


def _expothm_one(args):
    q, ell, M, nmax = args
    g = CharacterGroup(PolyRing.of(q), ell, M)
    out = []
    if len(g) == 1:
        return out
    for n in range(ell + g.deg_M, nmax + 1):
        if n == 0:
            continue
        omega_sum = expsum.omega_abs_sums(g, n, method="direct")[1:]
        prf = expsum.proof_rhs(q, ell, g.deg_M, n)
        cfg = {**_cfg(q, ell, M), "n": n}
        out.append(CheckResult("expothm", "omega_sum", cfg, float(omega_sum.max()), prf,
                               bool(omega_sum.max() <= prf * (1 + 1e-12))))
        for alpha in alpha_family(n):
            sums, max_alpha = expsum.alpha_char_sums(g, n, alpha)
            lhs = np.abs(sums[1:])
            rhs = expsum.upper_rhs(q, ell, g.deg_M, n, max_alpha)
            chain = max_alpha * omega_sum
            ok = bool(np.all(lhs <= rhs * (1 + 1e-12)) and np.all(lhs <= chain + 1e-9 * np.maximum(1, chain)))
            out.append(CheckResult("expothm", "upper", {**cfg, "alpha": alpha.name},
                                   float(lhs.max()), rhs, ok,
                                   {"chain_ratio": float(np.max(lhs / np.maximum(chain, 1e-300)))}))
    return out


def check_expothm(p, workers=1, grid=None):
    grid = grid or span_grid(p["mean_qs"], p["mean_span"])
    return [r for rs in _pmap(_expothm_one, [(q, l, M, p["mean_nmax"]) for q, l, M in grid], workers)
            for r in rs]


def _types_one(args):
    q, ell, M, nmax = args
    g = CharacterGroup(PolyRing.of(q), ell, M)
    out = []
    for n in range(1, nmax + 1):
        worst = expsum.cross_check_types(g, n)
        out.append(CheckResult("expothm", "type_sum_product", {**_cfg(q, ell, M), "n": n},
                               worst, 1e-9, worst < 1e-9))
    return out


def check_type_sums(p, workers=1):
    items = [(q, l, M, p["type_sizes"][q]) for q, l, M in span_grid(tuple(p["type_sizes"]), p["type_span"])]
    return [r for rs in _pmap(_types_one, items, workers) for r in rs]


# symmetric functions

def check_base_change(p, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for n in range(1, p["sym_n"] + 1):
        for lam in symcomb.partitions(n):
            worst = 0.0
            for nvars in (n, n + 2):
                r = np.sqrt(rng.uniform(size=(nvars, 20)))
                xs = r * np.exp(2j * np.pi * rng.uniform(size=(nvars, 20)))
                err = np.abs(symcomb.monomial_eval(lam, xs) - symcomb.base_change_eval(lam, xs))
                worst = max(worst, float(err.max()))
            out.append(CheckResult("base-change", "m_to_p", {"lambda": list(lam)}, worst, 1e-8, worst < 1e-8))
    return out


def check_cycle_probabilities(p):
    out = []
    for n in range(p["perm_n"] + 1):
        counts = symcomb.cycle_type_counts(n)
        total = math.factorial(n)
        bad = [mu for mu in symcomb.partitions(n)
               if Fraction(counts.get(mu, 0), total) != symcomb.cycle_probability(mu)]
        out.append(CheckResult("base-change", "cycle_probability", {"n": n}, len(bad), 0, not bad))
    return out


def check_exp_formula(p, seed=1):
    rng = np.random.default_rng(seed)
    out = []
    for m in p["exp_ms"]:
        pairs = []
        for i in range(p["exp_pairs"]):
            z1 = complex(*rng.normal(size=2))
            z2 = z1 if i == 0 else complex(*rng.normal(size=2))
            pairs.append((z1, z2))
        for n in range(1, p["exp_n"] + 1):
            worst = max(abs(symcomb.exp_formula_coeff(n, m, z1, z2) - symcomb.cycle_statistic_mean(n, m, z1, z2))
                        for z1, z2 in pairs)
            out.append(CheckResult("base-change", "exp_formula", {"n": n, "m": m}, worst, 1e-9, worst < 1e-9))
    return out


def check_figure_tabloids():
    tabs = symcomb.brick_tabloids((3, 2, 1, 1), (4, 3))
    weights = sorted(t.weight for t in tabs)
    ok = len(tabs) == 7 and weights == sorted([6, 3, 3, 2, 6, 1, 3]) and sum(weights) == 24
    return [CheckResult("tabloids", "figure", {"lambda": [3, 2, 1, 1], "mu": [4, 3]}, sum(weights), 24, ok,
                        {"count": len(tabs), "weights": [t.weight for t in tabs],
                         "rows": [[list(r) for r in t.rows] for t in tabs]})]


def check_bsum(p):
    out = []
    for n in range(1, p["bsum_n"] + 1):
        for mu in symcomb.partitions(n):
            series = symcomb.bsum_series(mu)
            enum = symcomb.bsum_by_enumeration(mu)
            agree = series == enum
            worst = max(sum(series[: k + 1]) / sum(math.comb(n, i) for i in range(k + 1)) for k in range(n + 1))
            out.append(CheckResult("tabloids", "bsum", {"mu": list(mu)}, worst, 1.0, agree and worst <= 1,
                                   {"series_matches_enumeration": agree}))
    return out


# finite sums and generating functions

def check_finite_sums(p):
    out = []
    for n in range(1, p["sum_n"] + 1):
        for x in (2.0, math.e, 3.0, 4.0, 10.0):
            main, parts = expsum.sum_2x_bound(n, x)
            out.append(CheckResult("bounds", "sum_2x", {"n": n, "x": x}, main.lhs, main.rhs, main.ok))
            for m, c in parts.items():
                out.append(CheckResult("bounds", "sum_2x_divisor", {"n": n, "x": x, "m": m}, c.lhs, c.rhs, c.ok))
        for x in expsum.VARIANT_XS:
            c = expsum.sum_2x_variant(n, x)
            out.append(CheckResult("bounds", "sum_2x_variant", {"n": n, "x": x}, c.lhs, c.rhs, c.ok))
    for n in range(1, p["binom_n"] + 1):
        c = expsum.binom3_bound(n)
        out.append(CheckResult("bounds", "binom3", {"n": n}, c.lhs, c.rhs, c.ok))
    for t in p["gen_t"]:
        for r in p["gen_r"]:
            for n in range(1, p["gen_n"] + 1):
                rep = expsum.genfunc_coeff_bounds(t, r, n)
                out.append(CheckResult("bounds", "genfunc_binom", {"t": t, "r": r, "n": n},
                                       rep.coeff, rep.binom_bound, rep.binom_ok))
    return out


def check_large_r_bound(ts=(2, 3, 4), r=20000, nmax=30):
    """The sharper bound for r >= 20000, compared in log space since its right side overflows."""
    out = []
    for t in ts:
        for n in range(1, nmax + 1):
            rep = expsum.genfunc_coeff_bounds(t, r, n)
            if rep.cool_ok is None:
                continue
            out.append(CheckResult("bounds", "genfunc_large_r", {"t": t, "r": r, "n": n},
                                   rep.cool_log_lhs, rep.cool_log_rhs, rep.cool_ok))
    return out


def check_log_h(qs=(2, 3, 4, 5, 7, 8, 9), spans=range(1, 8), orders=range(2, 12), kmax=40):
    out = []
    for q in qs:
        for r in spans:
            for order in orders:
                worst = expsum.check_log_h(q, r, 0, order, kmax)
                out.append(CheckResult("bounds", "log_h", {"q": q, "l+deg M": r, "order": order},
                                       worst, 1.0, worst <= 1.0))
    return out


# known values

def check_known_values(p):
    out = []
    d2 = meanval.divisor_function(2)
    for q in p["d2_qs"]:
        ring = PolyRing.of(q)
        for n in range(1, p["d2_n"] + 1):
            total = int(round(d2.values(ring, n).real.sum()))
            out.append(CheckResult("mean-var", "d2_mean", {"q": q, "n": n},
                                   Fraction(total, q**n), n + 1, total == (n + 1) * q**n))
    for q in p["mu_qs"] + tuple(x for x in p["d2_qs"] if x not in p["mu_qs"]):
        ring = PolyRing.of(q)
        nmax = p["mu_n"] if q in p["mu_qs"] else p["d2_n"]
        for n in range(1, nmax + 1):
            total = int(round(meanval.MOEBIUS.values(ring, n).real.sum()))
            expect = -q if n == 1 else 0
            out.append(CheckResult("mean-var", "mu_sum", {"q": q, "n": n}, total, expect, total == expect))
    for r in out:
        if isinstance(r.lhs, Fraction):
            r.lhs = float(r.lhs)
    return out


def check_H(p):
    q = p["H_q"]
    ring = PolyRing.of(q)
    out = []
    for n in range(1, p["H_n"] + 1):
        H = [meanval.count_H(ring, n, d) for d in range(n + 1)]
        ok = H[0] == q**n and H[n] == q**n and all(H[d] == H[n - d] for d in range(n + 1))
        out.append(CheckResult("mean-var", "H_symmetry", {"q": q, "n": n}, H[0], q**n, ok, {"H": H}))
    return out


# module invariants

def check_invariants(p):
    out = []
    for q in (2, 3):
        ring = PolyRing.of(q)
        for n in range(1, 7 if q == 2 else 5):
            bad = 0
            for f in ring.monic_list(n):
                g = ring.one
                for P, e in ring.factor(f):
                    g = ring.mul(g, ring.power(P, e))
                bad += g != f
            out.append(CheckResult("invariants", "unique_factorization", {"q": q, "n": n}, bad, 0, bad == 0))
            np_ = len(ring.irreducibles(n))
            out.append(CheckResult("invariants", "prime_count", {"q": q, "n": n}, n * np_, q**n, n * np_ <= q**n))
            types, ids = ring.type_table(n)
            mism = sum(types[i] != ring.factorization_type(f) for f, i in zip(ring.monic_list(n), ids))
            out.append(CheckResult("invariants", "type_table", {"q": q, "n": n}, mism, 0, mism == 0))
    for q, ell, M in span_grid((2, 3), 2):
        ring = PolyRing.of(q)
        g = CharacterGroup(ring, ell, M)
        n = ell + g.deg_M + 1
        idx = g.units.monic_indices(n)
        # values depend only on the class: a class's polynomials share one table row by construction,
        # so compare evaluation through polynomials against the table
        bad = 0
        for f, i in list(zip(ring.monic_list(n), idx))[:50]:
            for c in g.characters[:5]:
                v = c.value(f)
                bad += abs(v - (g.values[i, c.index] if i >= 0 else 0)) > 1e-12
        out.append(CheckResult("invariants", "class_function", _cfg(q, ell, M), bad, 0, bad == 0))
        lam = lfunc.euler_product_series(g[len(g) - 1], 4)
        ser = lfunc.character_sum_series(g[len(g) - 1], 4)
        err = float(np.max(np.abs(lam - ser)))
        out.append(CheckResult("invariants", "euler_product", _cfg(q, ell, M), err, 1e-9, err < 1e-9))
    out.append(_lambda_trace_one((2, 2, (1, 1), 8)))
    out.append(_lambda_trace_one((3, 1, (0, 1), 6)))
    return out


SUITES = {
    "orthogonality": lambda p, w: check_orthogonality(p, w),
    "rh": lambda p, w: check_rh(p, w),
    "prime-bound": lambda p, w: check_prime_bound(p, w),
    "base-change": lambda p, w: check_base_change(p) + check_cycle_probabilities(p) + check_exp_formula(p),
    "tabloids": lambda p, w: check_figure_tabloids() + check_bsum(p),
    "bounds": lambda p, w: check_finite_sums(p) + check_large_r_bound() + check_log_h(),
    "mean-var": lambda p, w: check_mean_var(p, w) + check_known_values(p) + check_H(p),
    "expothm": lambda p, w: check_expothm(p, w) + check_type_sums(p, w),
    "invariants": lambda p, w: check_invariants(p),
}


def run_suite(name, profile="desk", workers=1):
    p = PROFILES[profile]
    if name == "all":
        return [r for s in SUITES.values() for r in s(p, workers)]
    return SUITES[name](p, workers)
