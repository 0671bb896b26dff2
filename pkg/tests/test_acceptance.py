"""Acceptance gate: fourteen criteria, each at its tolerance and within its runtime limit.

Every criterion prints one PASS/FAIL line.  Run under pytest, or directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""
import functools
import sys
import time

import pytest

from ffmv import verify

DESK = verify.PROFILES["desk"]


def timed(func):
    start = time.perf_counter()
    results = func()
    return results, time.perf_counter() - start


@functools.lru_cache(maxsize=None)
def mean_var_run():
    # criteria 4 and 5 come out of one sweep; each is held to the sweep's full runtime
    return timed(lambda: verify.check_mean_var(DESK))


def pick(results, *names):
    return [r for r in results if r.name in names]


def crit_orthogonality():
    return timed(lambda: verify.check_orthogonality(DESK))


def crit_rh():
    return timed(lambda: verify.check_rh(DESK))


def crit_prime_bound():
    return timed(lambda: verify.check_prime_bound(DESK))


def crit_gap_mean():
    res, sec = mean_var_run()
    return pick(res, "gap_mean"), sec


def crit_variance():
    res, sec = mean_var_run()
    return pick(res, "variance"), sec


def crit_explicit_bound():
    return timed(lambda: verify.check_expothm(DESK))


def crit_type_sums():
    return timed(lambda: verify.check_type_sums(DESK))


def crit_base_change():
    return timed(lambda: verify.check_base_change(DESK) + verify.check_cycle_probabilities(DESK))


def crit_figure():
    return timed(verify.check_figure_tabloids)


def crit_bsum():
    return timed(lambda: verify.check_bsum(DESK))


def crit_exp_formula():
    return timed(lambda: verify.check_exp_formula(DESK))


def crit_finite_sums():
    return timed(lambda: verify.check_finite_sums(DESK))


def crit_known_values():
    return timed(lambda: verify.check_known_values(DESK))


def crit_H():
    return timed(lambda: verify.check_H(DESK))


CRITERIA = [
    (1, "character orthogonality, q^l phi(M) <= 200", crit_orthogonality, 10),
    (2, "L-polynomial degree and root moduli", crit_rh, 30),
    (3, "prime character sum bound", crit_prime_bound, 120),
    (4, "GAP mean identity", crit_gap_mean, 300),
    (5, "GAP variance identity", crit_variance, 300),
    (6, "explicit character sum bound", crit_explicit_bound, 600),
    (7, "factorization type sums, product vs enumeration", crit_type_sums, 300),
    (8, "base change and cycle probabilities", crit_base_change, 60),
    (9, "brick tabloids for (3,2,1,1) into (4,3)", crit_figure, 1),
    (10, "tabloid partial sums", crit_bsum, 60),
    (11, "exponential formula", crit_exp_formula, 60),
    (12, "finite sum inequalities", crit_finite_sums, 60),
    (13, "divisor means and Moebius sums", crit_known_values, 30),
    (14, "H_q(n, d) symmetry", crit_H, 60),
]


def evaluate(number, title, func, limit):
    results, sec = func()
    failed = [r for r in results if not r.ok]
    ok = bool(results) and not failed and sec < limit
    line = (f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} "
            f"({len(results)} checks, {len(failed)} failed, {sec:.1f}s of {limit}s)")
    return ok, line, failed


@pytest.mark.parametrize("number,title,func,limit", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, title, func, limit, capsys):
    ok, line, failed = evaluate(number, title, func, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, "; ".join(f"{r.name} {r.config}: {r.lhs} vs {r.rhs}" for r in failed[:5]) or line


if __name__ == "__main__":
    all_ok = True
    for crit in CRITERIA:
        ok, line, _ = evaluate(*crit)
        print(line, flush=True)
        all_ok &= ok
    sys.exit(0 if all_ok else 1)
