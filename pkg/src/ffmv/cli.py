"""Command-line front end: ``ffmv enumerate | char-table | lfunc | tabloids | table | verify``.

Exit codes: 0 on success, 1 when a check or bound fails, 2 on a
configuration error (bad field, reducible modulus, budget exceeded, ...).
"""
import argparse
import csv
import datetime
import io
import itertools
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import __version__, budget, lfunc, meanval, symcomb, verify
from .errors import (BoundViolation, CrossCheckMismatch, FFMVError, NumericalInstability,
                     OrthogonalityViolation)
from .ffpoly import PolyRing, parse_field_spec
from .hayes import CharacterGroup


def parse_range(text):
    """``"3"``, ``"1..10"`` or ``"1,4,7"`` as a list of ints."""
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..")
        return list(range(int(a), int(b) + 1))
    return [int(x) for x in text.split(",") if x.strip()]


@dataclass
class SweepConfig:
    field: str = "q=2"
    n: list = None
    l: list = None
    M: list = None
    deg_M: list = None
    alpha: list = None
    h: list = None
    tol: float = None
    out: str = None
    format: str = "json"
    workers: int = 1
    profile: str = "desk"
    lam: list = None
    mu: list = None

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text):
        raw = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    def ring(self):
        return PolyRing(parse_field_spec(self.field))

    def moduli(self, ring):
        if self.M is not None:
            return [ring.monic(ring.parse(m)) for m in self.M]
        if self.deg_M is not None:
            return [M for d in self.deg_M for M in ring.monics(d)]
        return [ring.one]

    def check_budget(self, ring):
        for n in self.n or []:
            budget.check_enumeration(ring.q, n)
        if self.l is not None or self.M is not None or self.deg_M is not None:
            for M in self.moduli(ring):
                for ell in self.l or [0]:
                    budget.check_group(ring.q**ell * ring.euler_phi(M))


def _field_text(args):
    if args.p is not None:
        text = f"p={args.p},k={args.k or 1}"
        if args.mod is not None:
            text += f",mod={args.mod}"
        return text
    if args.q is not None:
        return f"q={args.q}" + (f",mod={args.mod}" if args.mod is not None else "")
    return None


def build_config(args):
    cfg = SweepConfig()
    if args.config:
        with open(args.config) as fh:
            cfg = SweepConfig.from_json(fh.read())
    spec = _field_text(args)
    if spec:
        cfg.field = spec
    if args.n is not None:
        cfg.n = parse_range(args.n)
    if args.l is not None:
        cfg.l = parse_range(args.l)
    if args.M is not None:
        cfg.M = [json.loads(m) for m in args.M]
    if args.deg_M is not None:
        cfg.deg_M = parse_range(args.deg_M)
    if args.alpha is not None:
        cfg.alpha = args.alpha.split(",")
    if args.h is not None:
        cfg.h = parse_range(args.h)
    for name in ("tol", "out", "format", "workers", "profile"):
        val = getattr(args, name)
        if val is not None:
            setattr(cfg, name, val)
    for name in ("lam", "mu"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, parse_range(val))
    return cfg


# output

def _jsonable(x):
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return x


def _csv_cell(x):
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (complex, np.complexfloating)):
        return format(x.real, ".17g") + ";" + format(x.imag, ".17g")
    if isinstance(x, (list, tuple, dict)):
        return json.dumps(_jsonable(x), separators=(",", ":"))
    return str(x)


class Emitter:
    """Collects records and writes them as JSON lines or CSV, with an optional meta header."""

    def __init__(self, cfg, meta, argv):
        self.cfg, self.meta, self.argv = cfg, meta, argv
        self.records = []

    def add(self, rec):
        self.records.append(rec)

    def render(self):
        buf = io.StringIO()
        stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        if self.cfg.format == "csv":
            if self.meta:
                buf.write(f"# ffmv {__version__} generated {stamp} args {' '.join(self.argv)}\n")
            columns = []
            for rec in self.records:
                columns += [k for k in rec if k not in columns]
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(columns)
            for rec in self.records:
                writer.writerow([_csv_cell(rec[k]) if k in rec else "" for k in columns])
        else:
            if self.meta:
                buf.write(json.dumps({"meta": {"tool": "ffmv", "version": __version__,
                                               "generated": stamp, "args": self.argv}}) + "\n")
            for rec in self.records:
                buf.write(json.dumps(_jsonable(rec)) + "\n")
        return buf.getvalue()

    def flush(self):
        text = self.render()
        if self.cfg.out:
            with open(self.cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


# commands

def cmd_enumerate(args, cfg, em):
    ring = cfg.ring()
    if not cfg.n:
        raise ValueError("--n is required")
    cfg.check_budget(ring)
    count = 0
    lines = []
    for n in cfg.n:
        polys = ring.monic_list(n) if args.kind == "monic" else ring.irreducibles(n)
        lines += [ring.format(f) for f in polys]
        count += len(polys)
    lines.append(f"# count: {count}")
    text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _groups(cfg):
    ring = cfg.ring()
    cfg.check_budget(ring)
    return [CharacterGroup(ring, ell, M) for M in cfg.moduli(ring) for ell in (cfg.l or [0])]


def cmd_char_table(args, cfg, em):
    for g in _groups(cfg):
        header, *rows = g.table_rows()
        for row in rows:
            em.add({"l": g.ell, "M": list(g.M), **dict(zip(header, row))})
    em.flush()
    return 0


def cmd_lfunc(args, cfg, em):
    tol = cfg.tol if cfg.tol is not None else lfunc.RH_TOL
    status = 0
    for g in _groups(cfg):
        roots = lfunc.group_inverse_roots(g)
        for c in g:
            L = lfunc.l_polynomial(c)
            if L.is_rational:
                em.add({"chi": c.ident, "numerator": list(L.numerator), "denominator": list(L.denominator)})
                continue
            rep = lfunc.rh_check(roots[c.index], g.ring.q, tol)
            status |= not rep.ok
            em.add({"chi": c.ident, "coeffs": L.coeffs, "roots": roots[c.index], "rh_ok": rep.ok})
    em.flush()
    return int(status)


def cmd_tabloids(args, cfg, em):
    if cfg.lam and cfg.mu:
        tabs = symcomb.brick_tabloids(cfg.lam, cfg.mu)
        for t in tabs:
            em.add({"rows": [list(r) for r in t.rows], "weight": t.weight})
        c = symcomb.c_coeff(cfg.lam, cfg.mu)
        em.add({"lambda": cfg.lam, "mu": cfg.mu, "count": len(tabs),
                "total_weight": sum(t.weight for t in tabs), "c": str(c)})
    else:
        for n in cfg.n or [4]:
            for lam in symcomb.partitions(n):
                for mu in symcomb.partitions(n):
                    em.add({"lambda": list(lam), "mu": list(mu), "weight": symcomb.tabloid_weight(lam, mu),
                            "c": str(symcomb.c_coeff(lam, mu))})
    em.flush()
    return 0


def _alphas(cfg, n):
    names = cfg.alpha or ["mu"]
    out = []
    for name in names:
        if name == "has_divisor_deg:half":
            out.append(meanval.has_divisor_deg(n // 2))
        else:
            out.append(meanval.get_alpha(name))
    return out


def _table_mean(cfg, em):
    ring = cfg.ring()
    cfg.check_budget(ring)
    status = 0
    for n in cfg.n or []:
        for alpha in _alphas(cfg, n):
            if cfg.h is not None:
                for h in cfg.h:
                    for top in itertools.product(range(ring.q), repeat=n - h - 1):
                        f0 = (0,) * (h + 1) + top + (1,)
                        rep = meanval.mean_interval(alpha, f0, h, ring)
                        status |= not rep.ok
                        em.add({"alpha": alpha.name, "q": ring.q, "n": n, "l": n - h - 1, "M": [1],
                                "f0": list(f0), "h": h, "scope": "monic degree-n part of I(f0,h)",
                                **rep.as_dict()})
            else:
                for g in _groups(cfg):
                    if n < g.ell + g.deg_M:
                        continue
                    res = meanval.gap_means(g, n, alpha, tol=math.inf)
                    for i in range(g.units.order):
                        ok = abs(res.brute[i] - res.formula[i]) <= (cfg.tol or 1e-9)
                        status |= not ok
                        em.add({"alpha": alpha.name, "q": ring.q, "n": n, "l": g.ell, "M": list(g.M),
                                "f0": g.units.label(i), "brute_mean": res.brute[i],
                                "formula_mean": res.formula[i], "ok": ok})
    em.flush()
    return int(status)


def _table_variance(cfg, em):
    ring = cfg.ring()
    cfg.check_budget(ring)
    status = 0
    for n in cfg.n or []:
        for alpha in _alphas(cfg, n):
            if cfg.h is not None:
                for h in cfg.h:
                    rep = meanval.variance_interval(alpha, n, h, ring)
                    status |= not (rep.agree and rep.ok)
                    em.add({"alpha": alpha.name, "q": ring.q, "n": n, "h": h, "l": n - h - 1, "M": [1],
                            **rep.as_dict()})
            else:
                for g in _groups(cfg):
                    if n < g.ell + g.deg_M:
                        continue
                    rep = meanval.variance_gap(g, n, alpha)
                    status |= not (rep.agree and rep.ok)
                    em.add({"alpha": alpha.name, "q": ring.q, "n": n, "l": g.ell, "M": list(g.M),
                            **rep.as_dict()})
    em.flush()
    return int(status)


def _table_H(cfg, em):
    ring = cfg.ring()
    cfg.check_budget(ring)
    for n in cfg.n or []:
        em.add({"q": ring.q, "n": n, **{f"d={d}": meanval.count_H(ring, n, d) for d in range(n + 1)}})
    em.flush()
    return 0


def _table_ltable(cfg, em):
    for g in _groups(cfg):
        data = lfunc._l_data(g)
        for c in g.nontrivial():
            deg = int(data.degrees[c.index])
            em.add({"chi": c.ident, "degree": deg, "coeffs": data.coeffs[: deg + 1, c.index]})
    em.flush()
    return 0


def cmd_table(args, cfg, em):
    return {"mean": _table_mean, "variance": _table_variance, "H": _table_H,
            "ltable": _table_ltable}[args.what](cfg, em)


def _targeted(cfg, suite):
    """Run a grid suite on the configurations named on the command line only."""
    ring = cfg.ring()
    cfg.check_budget(ring)
    grid = [(ring.q, ell, M) for M in cfg.moduli(ring) for ell in (cfg.l or [0])]
    p = dict(verify.PROFILES[cfg.profile])
    if cfg.n:
        p["prime_n"] = {ring.q: max(cfg.n)}
        p["mean_nmax"] = max(cfg.n)
    w = cfg.workers
    if suite == "orthogonality":
        return verify.check_orthogonality(p, w, grid=grid)
    if suite == "rh":
        return verify.check_rh(p, w, tol=cfg.tol or lfunc.RH_TOL, grid=grid)
    if suite == "prime-bound":
        return verify.check_prime_bound(p, w, grid=grid)
    if suite == "mean-var":
        return verify.check_mean_var(p, w, grid=grid)
    if suite == "expothm":
        return verify.check_expothm(p, w, grid=grid)
    raise ValueError(f"suite {suite!r} does not take --q/--l/--M")


def cmd_verify(args, cfg, em):
    targeted = (args.q is not None or args.p is not None
                or any(v is not None for v in (cfg.l, cfg.M, cfg.deg_M)))
    if targeted:
        results = _targeted(cfg, args.suite)
    else:
        results = verify.run_suite(args.suite, cfg.profile, cfg.workers)
    summary = {}
    for r in results:
        s = summary.setdefault((r.suite, r.name), {"suite": r.suite, "check": r.name, "count": 0,
                                                     "failed": 0, "max_slack_ratio": 0.0})
        s["count"] += 1
        s["failed"] += not r.ok
        if math.isfinite(r.slack_ratio):
            s["max_slack_ratio"] = max(s["max_slack_ratio"], r.slack_ratio)
    detail = args.detail or cfg.out is not None
    for r in results:
        if detail or not r.ok:
            em.add(r.as_dict())
    for s in summary.values():
        em.add(s)
    failed = sum(not r.ok for r in results)
    em.add({"suite": args.suite, "profile": cfg.profile, "checks": len(results), "failed": failed, "ok": not failed})
    em.flush()
    return 1 if failed else 0


def make_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, help="field size")
    common.add_argument("--p", type=int, help="field characteristic")
    common.add_argument("--k", type=int, help="extension degree")
    common.add_argument("--mod", help="defining polynomial of F_q over F_p, JSON list")
    common.add_argument("--n", help="degree or range, e.g. 6 or 1..10")
    common.add_argument("--l", help="short-interval length l (range allowed)")
    common.add_argument("--M", action="append", help="modulus as a JSON coefficient list (repeatable)")
    common.add_argument("--deg-M", dest="deg_M", help="every monic modulus of these degrees")
    common.add_argument("--alpha", help="comma-separated factorization functions")
    common.add_argument("--h", help="interval parameter or range")
    common.add_argument("--tol", type=float)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--workers", type=int)
    common.add_argument("--no-meta", action="store_true", help="omit the timestamp header line")
    common.add_argument("--profile", choices=tuple(verify.PROFILES))
    common.add_argument("--config", help="load a SweepConfig JSON file")
    common.add_argument("--save-config", help="write the effective config as JSON and continue")

    parser = argparse.ArgumentParser(prog="ffmv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ffmv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("enumerate", parents=[common])
    p.add_argument("kind", choices=("monic", "irreducible"))
    sub.add_parser("char-table", parents=[common])
    sub.add_parser("lfunc", parents=[common])
    p = sub.add_parser("tabloids", parents=[common])
    p.add_argument("--lam", help="lambda, e.g. 3,2,1,1")
    p.add_argument("--mu", help="mu, e.g. 4,3")
    p = sub.add_parser("table", parents=[common])
    p.add_argument("what", choices=("mean", "variance", "H", "ltable"))
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("suite", choices=tuple(verify.SUITES) + ("all",))
    p.add_argument("--detail", action="store_true", help="list every check, not only failures")
    return parser


COMMANDS = {"enumerate": cmd_enumerate, "char-table": cmd_char_table, "lfunc": cmd_lfunc,
            "tabloids": cmd_tabloids, "table": cmd_table, "verify": cmd_verify}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        if args.save_config:
            with open(args.save_config, "w") as fh:
                fh.write(cfg.to_json() + "\n")
        em = Emitter(cfg, not args.no_meta, argv)
        return COMMANDS[args.command](args, cfg, em)
    except (BoundViolation, CrossCheckMismatch, NumericalInstability, OrthogonalityViolation) as exc:
        print(f"ffmv: check failed: {exc}", file=sys.stderr)
        return 1
    except (FFMVError, ValueError, KeyError, OSError) as exc:
        print(f"ffmv: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
