"""Desk-scale budget caps.

Defaults: at most 10**7 polynomials per enumeration and unit groups of at
most 10**5 elements.  The environment variable ``FFMV_BUDGET`` overrides
them, e.g. ``FFMV_BUDGET="max_qn=100000,max_group=500"``.
"""
import os

from .errors import BudgetExceeded, GroupTooLarge

DEFAULTS = {"max_qn": 10**7, "max_group": 10**5}


def caps():
    out = dict(DEFAULTS)
    raw = os.environ.get("FFMV_BUDGET", "").strip()
    if not raw:
        return out
    for item in raw.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in out:
            raise ValueError(f"unknown budget key {key!r} in FFMV_BUDGET")
        out[key] = int(float(val))
    return out


def check_enumeration(q, n):
    cap = caps()["max_qn"]
    if q**n > cap:
        raise BudgetExceeded(f"q^n = {q}^{n} exceeds max_qn={cap}")


def check_group(order):
    cap = caps()["max_group"]
    if order > cap:
        raise GroupTooLarge(f"group order {order} exceeds max_group={cap}")
