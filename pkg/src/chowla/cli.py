"""Command-line front end.

Every subcommand writes one JSON document (or CSV table) to stdout or
``--out``.  Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from fractions import Fraction

import mpmath
from sympy import isprime, primerange

from chowla import analytics, cotsum, lseries, structmat, vanish
from chowla.exactalg import DEFAULT_DIGITS, format_rational

ENV_DIGITS = "CHOWLA_PRECISION_DIGITS"
SUITES = ("xk", "kernel", "det", "moments", "pass", "all")


class InvalidInput(ValueError):
    pass


def _default_digits() -> int:
    raw = os.environ.get(ENV_DIGITS)
    if raw is None:
        return DEFAULT_DIGITS
    try:
        return int(raw)
    except ValueError:
        raise InvalidInput(f"{ENV_DIGITS} must be an integer, got {raw!r}")


def _dec(x, digits: int) -> str:
    return mpmath.nstr(x, digits, strip_zeros=False)


# -- argument handling -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--r", type=int)
    common.add_argument("--m", type=int)
    common.add_argument("--X", type=int, default=10**6)
    common.add_argument("--digits", type=int, default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out")

    parser = argparse.ArgumentParser(prog="chowla", description="Cotangent-product sums and vanishing of D_k(1, f).")
    sub = parser.add_subparsers(dest="command", required=True)
    xk = sub.add_parser("xk", parents=[common], help="table of x_k(r; p)")
    xk.add_argument("--float", action="store_true", help="include decimal values")
    sub.add_parser("kernel", parents=[common], help="basis of V_0")
    sub.add_parser("rank", parents=[common], help="rank of the x_k values over Q")
    det = sub.add_parser("det", parents=[common], help="Galois-matrix determinant against its closed form")
    det.add_argument("--corrected", action="store_true", help="use the corrected L-value products")
    sub.add_parser("trace", parents=[common], help="rational traces of x_k")
    sub.add_parser("classnum", parents=[common], help="h(-p) and the relative class number")
    sub.add_parser("moments", parents=[common], help="moment of x_k against the divisor constant")
    sub.add_parser("series", parents=[common], help="truncated congruence series against x_k")
    sub.add_parser("lvalues", parents=[common], help="L(1, chi) for all nonprincipal chi")
    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("--suite", choices=SUITES, default="all")
    ver.add_argument("--pmax", type=int, default=13)
    ver.add_argument("--kmax", type=int, default=4)
    return parser


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InvalidInput(f"--{n} is required for {args.command}")


def _check_p(p: int) -> None:
    if p < 3 or not isprime(p):
        raise InvalidInput(f"p must be an odd prime, got {p}")


def validate(args) -> None:
    if args.digits is None:
        args.digits = _default_digits()
    if args.digits < 20:
        raise InvalidInput("digits must be >= 20")
    if args.X < 10**3:
        raise InvalidInput("X must be >= 1000")
    if args.p is not None:
        _check_p(args.p)
    if args.k is not None and args.k < 1:
        raise InvalidInput("k must be >= 1")
    if args.r is not None and args.p is not None and args.r % args.p == 0:
        raise InvalidInput("r must be coprime to p")
    if args.command == "verify":
        if args.pmax < 3 or args.kmax < 1:
            raise InvalidInput("need pmax >= 3 and kmax >= 1")


# -- subcommands ---------------------------------------------------------------------

def cmd_xk(args):
    _need(args, "p", "k")
    table = cotsum.xk_table(args.p, args.k)
    if args.format == "csv":
        return table.to_csv(args.digits), 0
    out = table.to_json()
    if args.float:
        out["x"] = {str(r): _dec(cotsum.xk_float(table, r, args.digits), args.digits) for r in range(1, args.p)}
    return out, 0


def cmd_kernel(args):
    _need(args, "p", "k")
    kb = vanish.v0_kernel(args.p, args.k)
    out = vanish.kernel_json(kb)
    if args.format == "csv":
        return _csv([["f(%d)" % (i + 1) for i in range(kb.dimV)]] + [list(v) for v in out["basis"]]), 0
    return out, 0


def cmd_rank(args):
    _need(args, "p", "k")
    p, k = args.p, args.k
    table = cotsum.xk_table(p, k)
    rk = vanish.rank_over_Q(table.half)
    out = {
        "p": p,
        "k": k,
        "rank": rk,
        "size": (p - 1) // 2,
        "full": rk == (p - 1) // 2,
        "expected_full": vanish.independence_expected(p, k),
        "subsets": {},
    }
    for which in ("QR", "QNR"):
        s = vanish.subset_rank(p, k, which)
        out["subsets"][which] = {"residues": list(s.residues), "rank": s.rank, "class": s.classification}
    if args.format == "csv":
        rows = [["subset", "size", "rank", "class"], ["all", out["size"], rk, ""]]
        rows += [[w, len(v["residues"]), v["rank"], v["class"]] for w, v in out["subsets"].items()]
        return _csv(rows), 0
    return out, 0


def _which_corollary(p: int, k: int) -> str | None:
    for which in structmat.COROLLARIES:
        if structmat._applicable(p, k, which):
            return which
    return None


def cmd_det(args):
    _need(args, "p", "k")
    p, k = args.p, args.k
    which = _which_corollary(p, k)
    rs = [args.r % p] if args.r is not None else list(range(1, p))
    reports = []
    code = 0
    for r in rs:
        if which is None:
            gm = structmat.galois_matrix(p, k, r)
            d = structmat.galois_det(gm, args.digits)
            reports.append({
                "corollary": None,
                "p": p,
                "k": k,
                "r": r,
                "det_exact": None if d.det_x_exact is None else format_rational(d.det_x_exact),
                "det_float": _dec(d.det_x, 40),
                "formula_float": None,
                "rel_dev": None,
                "pass": None,
            })
            continue
        try:
            rep = structmat.verify_fcd(p, k, r, which, args.digits, corrected=args.corrected)
        except ValueError as exc:
            raise InvalidInput(str(exc))
        reports.append(rep.to_json())
        if not rep.passed:
            code = 1
    if args.format == "csv":
        keys = list(reports[0])
        return _csv([keys] + [[rep[k2] for k2 in keys] for rep in reports]), code
    return {"reports": reports}, code


def cmd_trace(args):
    _need(args, "p", "k")
    p, k = args.p, args.k
    table = cotsum.xk_table(p, k)
    h = structmat.class_number_neg(p) if p % 4 == 3 and p > 3 else None
    rs = [args.r % p] if args.r is not None else list(range(1, p))
    rows = []
    match = True
    for r in rs:
        tr = cotsum.trace_xk(table, r)
        cf = cotsum.trace_closed_form(p, k, r, h) if h is not None else None
        if cf is not None and cf != tr:
            match = False
        rows.append({"r": r, "trace": format_rational(tr), "closed_form": None if cf is None else format_rational(cf)})
    out = {"p": p, "k": k, "h": h, "traces": rows, "match": match}
    if args.format == "csv":
        return _csv([["r", "trace", "closed_form"]] + [[x["r"], x["trace"], x["closed_form"] or ""] for x in rows]), int(not match)
    return out, int(not match)


def cmd_classnum(args):
    _need(args, "p")
    p = args.p
    out = {
        "p": p,
        "h_neg_p": structmat.class_number_neg(p) if p % 4 == 3 and p > 3 else None,
        "h_minus": structmat.relative_class_number(p, args.digits),
    }
    if args.format == "csv":
        return _csv([list(out), ["" if v is None else v for v in out.values()]]), 0
    return out, 0


def cmd_moments(args):
    _need(args, "p", "k", "m")
    if args.m < 1:
        raise InvalidInput("m must be >= 1")
    p, k, m = args.p, args.k, args.m
    if m % 2:
        out = {"p": p, "k": k, "m": m, "lhs_exact": "0/1", "pass": analytics.moment_exact(p, k, m) == 0}
        if args.format == "csv":
            return _csv([list(out), list(out.values())]), 0
        return out, 0
    rep = analytics.moment_report(p, k, m)
    if args.format == "csv":
        return analytics.moments_csv([rep]), int(not rep.passed)
    out = {
        "p": p,
        "k": k,
        "m": m,
        "lhs_exact": format_rational(rep.lhs_exact),
        "lhs": repr(rep.lhs),
        "rhs_constant": repr(rep.rhs_constant),
        "rhs_doubled": repr(rep.rhs_doubled),
        "deviation": repr(rep.deviation),
        "bound": repr(rep.bound),
        "pass": rep.passed,
    }
    return out, int(not rep.passed)


def cmd_series(args):
    _need(args, "p", "k")
    p, k = args.p, args.k
    rs = [args.r % p] if args.r is not None else list(range(1, (p - 1) // 2 + 1))
    reps = [analytics.verify_pass(p, k, r, X=args.X, digits=args.digits) for r in rs]
    code = int(not all(rep.passed for rep in reps))
    rows = [rep.to_json() for rep in reps]
    if args.format == "csv":
        keys = list(rows[0])
        return _csv([keys] + [[row[k2] for k2 in keys] for row in rows]), code
    return {"reports": rows}, code


def cmd_lvalues(args):
    _need(args, "p")
    vals = lseries.l_values(args.p, args.digits)
    rows = [{"j": j, "parity": "odd" if j % 2 else "even", "re": _dec(v.real, args.digits), "im": _dec(v.imag, args.digits)} for j, v in vals]
    if args.format == "csv":
        return _csv([["j", "parity", "re", "im"]] + [list(r.values()) for r in rows]), 0
    g, _ = cotsum.dlog_table(args.p)
    return {"p": args.p, "g": g, "values": rows}, 0


# -- verification suites ---------------------------------------------------------------

def _grid(pmax: int, kmax: int):
    for p in primerange(3, pmax + 1):
        for k in range(1, kmax + 1):
            yield int(p), k


def _suite_xk(pmax, kmax, digits):
    out = []
    for p, k in _grid(pmax, kmax):
        table = cotsum.xk_table(p, k)
        eq = all(cotsum.equivariance_holds(table, c, r) for c in range(1, p) for r in range(1, p))
        out.append(("equivariance", p, k, None, eq))
        if p ** (k - 1) <= 10**4:
            naive = all(cotsum.xk_naive(p, k, r) == table[r] for r in range(1, p))
            out.append(("naive_oracle", p, k, None, naive))
        out.append(("odd_in_r", p, k, None, all(table[p - r] == -table[r] for r in range(1, p))))
        if cotsum.v2(p - 1) > cotsum.v2(k):
            out.append(("trace_zero", p, k, None, all(cotsum.trace_xk(table, r) == 0 for r in range(1, p))))
    return out


def _suite_kernel(pmax, kmax, digits):
    out = []
    for p, k in _grid(pmax, kmax):
        try:
            rep = vanish.verify_dim(p, k)
            ok = True
        except vanish.TheoremViolation:
            ok = False
        out.append(("dim_bound", p, k, None, ok))
        out.append(("independence_iff", p, k, None, vanish.full_rank(p, k) == vanish.independence_expected(p, k)))
        if vanish.subset_hypothesis(p, k):
            full = all(vanish.subset_rank(p, k, w).full for w in ("QR", "QNR"))
            out.append(("subset_rank", p, k, None, full and vanish.qr_support_check(p, k)))
    return out


def _suite_det(pmax, kmax, digits):
    out = []
    rng = random.Random(0)
    for m in range(1, 9):
        v = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(m)]
        for kind in ("A+", "A-"):
            out.append(("linalg_" + kind, None, None, m, structmat.linalg_factorization_check(kind, v, digits)))
            out.append(("shift_" + kind, None, None, m, all(structmat.shift_identity_check(kind, v, j) for j in range(2 * m))))
    tol = mpmath.mpf(10) ** -30
    for p, k in _grid(pmax, kmax):
        which = _which_corollary(p, k)
        gm = structmat.galois_matrix(p, k, 1)
        out.append(("galois_twist", p, k, 1, all(structmat.galois_twist_holds(gm, j) for j in range(p - 1))))
        if which is None:
            continue
        det = structmat.galois_det(gm, digits)
        out.append(("nonvanishing", p, k, 1, det.det_x != 0 and not det.det_z.is_zero()))
        lf = structmat.lemma_formula(p, k, 1, digits)
        out.append(("det_product", p, k, 1, bool(abs(lf - det.det_x) <= tol * abs(det.det_x))))
        if which == "fcd1b":
            for r in range(1, p):
                out.append(("fcd1b_exact", p, k, r, structmat.verify_fcd(p, k, r, "fcd1b", digits).passed))
    return out


def _suite_moments(pmax, kmax, digits):
    out = []
    for p, k in _grid(pmax, kmax):
        for m in (1, 3):
            out.append((f"odd_moment_m{m}", p, k, None, analytics.moment_exact(p, k, m) == 0))
        if k == 1:
            out.append(("k1_m2_identity", p, k, None, analytics.moment_exact(p, 1, 2) == Fraction((p - 1) * (p - 2), 3 * p * p)))
    return out


def _suite_pass(pmax, kmax, digits):
    out = []
    for p, k in _grid(min(pmax, 7), min(kmax, 2)):
        for r in range(1, (p - 1) // 2 + 1):
            out.append(("series", p, k, r, analytics.verify_pass(p, k, r, digits=digits).passed))
    return out


SUITE_FUNCS = {
    "xk": _suite_xk,
    "kernel": _suite_kernel,
    "det": _suite_det,
    "moments": _suite_moments,
    "pass": _suite_pass,
}


def cmd_verify(args):
    names = list(SUITE_FUNCS) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        for check, p, k, r, ok in SUITE_FUNCS[name](args.pmax, args.kmax, args.digits):
            checks.append({"suite": name, "check": check, "p": p, "k": k, "r": r, "pass": bool(ok)})
    failed = sum(not c["pass"] for c in checks)
    code = int(failed > 0)
    if args.format == "csv":
        return _csv([["suite", "check", "p", "k", "r", "pass"]] + [["" if v is None else v for v in c.values()] for c in checks]), code
    return {"suite": args.suite, "pmax": args.pmax, "kmax": args.kmax, "checks": checks, "passed": len(checks) - failed, "failed": failed}, code


COMMANDS = {
    "xk": cmd_xk,
    "kernel": cmd_kernel,
    "rank": cmd_rank,
    "det": cmd_det,
    "trace": cmd_trace,
    "classnum": cmd_classnum,
    "moments": cmd_moments,
    "series": cmd_series,
    "lvalues": cmd_lvalues,
    "verify": cmd_verify,
}


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _render(payload) -> str:
    if isinstance(payload, str):
        return payload
    return json.dumps(payload, indent=2) + "\n"


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        validate(args)
        payload, code = COMMANDS[args.command](args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    text = _render(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
