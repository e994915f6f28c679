"""Command-line front end: ``bound``, ``sweep``, ``oracle`` and ``rskr``.

Exit codes: 0 success, 2 usage or parameter error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import tempfile
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence

from . import bounds, rskr
from .errors import ClusterDSSError, SecrecyViolation, TooLarge
from .oracle import (
    MAX_N_ENV,
    SearchLimits,
    Verdict,
    exhaustive_min_secure_flow,
    small_default_grid,
    validate_bound_grid,
)
from .topology import (
    INF,
    as_amount,
    asymmetric_bandwidth,
    asymmetric_from_totals,
    cluster_restricted,
    is_inf,
    make_topology,
    node_restricted,
    symmetric_bandwidth,
)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 2, 3

CSV_HEADER = ["alpha", "Lc", "model", "value_exact", "value_decimal"]
SWEEP_MODELS = ("capacity", "node-restricted", "cluster-symmetric", "cluster-asymmetric")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def decimal6(value) -> str:
    """Six fractional digits, round-half-even, computed exactly."""
    if is_inf(value):
        return "inf"
    value = Fraction(value)
    scaled = value * 10**6
    q, r = divmod(scaled.numerator, scaled.denominator)
    twice = 2 * r
    if twice > scaled.denominator or (twice == scaled.denominator and q % 2):
        q += 1
    sign = "-" if q < 0 else ""
    q = abs(q)
    return f"{sign}{q // 10**6}.{q % 10**6:06d}"


def exact(value) -> str:
    if is_inf(value):
        return "inf"
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _bandwidth(args, t, asymmetric: bool):
    if asymmetric:
        if args.beta_I is not None and args.beta_c is not None:
            return asymmetric_bandwidth(t, as_amount(args.beta_I), as_amount(args.beta_c))
        if args.gamma_I is not None and args.gamma_c is not None:
            return asymmetric_from_totals(t, as_amount(args.gamma_I), as_amount(args.gamma_c))
        raise UsageError("asymmetric repair needs --beta-I/--beta-c or --gamma-I/--gamma-c")
    if args.gamma is None:
        raise UsageError("symmetric repair needs --gamma")
    return symmetric_bandwidth(t, as_amount(args.gamma))


def _add_system(p: argparse.ArgumentParser, k_required: bool = True) -> None:
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--k", type=int, required=k_required)
    p.add_argument("--gamma", help="total repair bandwidth (symmetric)")
    p.add_argument("--beta-I", dest="beta_I", help="intra-cluster per-helper bandwidth")
    p.add_argument("--beta-c", dest="beta_c", help="cross-cluster per-helper bandwidth")
    p.add_argument("--gamma-I", dest="gamma_I", help="total intra-cluster repair bandwidth")
    p.add_argument("--gamma-c", dest="gamma_c", help="total cross-cluster repair bandwidth")


def _is_asym(args) -> bool:
    return any(getattr(args, a) is not None for a in ("beta_I", "beta_c", "gamma_I", "gamma_c"))


# -- bound -----------------------------------------------------------------


def cmd_bound(args, out) -> int:
    t = make_topology(args.n, args.L, args.k)
    alpha = as_amount(args.alpha)
    model = args.model
    if model == "capacity":
        res = bounds.storage_capacity(t, _bandwidth(args, t, False), alpha)
    elif model == "node-restricted":
        _need(args, "Lc")
        res = bounds.node_restricted_upper(t, _bandwidth(args, t, False), args.Lc, alpha)
    elif model == "unclustered":
        _need(args, "l")
        bw = _bandwidth(args, t, False)
        d = args.d if args.d is not None else t.d
        res = bounds.unclustered_secrecy_upper(t.n, t.k, d, args.l, bw.gamma / d, alpha)
    else:
        _need(args, "l")
        asym = model == "cluster-asymmetric" or (model == "cluster-restricted" and _is_asym(args))
        bw = _bandwidth(args, t, asym)
        if asym:
            _need(args, "Lc")
            res = bounds.cluster_restricted_asymmetric_upper(t, bw, args.l, args.Lc, alpha)
        else:
            if args.Lc is not None:
                cluster_restricted(t, args.l, args.Lc)
            res = bounds.cluster_restricted_symmetric_upper(t, bw, args.l, alpha)
    out.write(f"{res.value}\n{decimal6(res.value)}\n")
    return EXIT_OK


def _need(args, name: str) -> None:
    if getattr(args, name) is None:
        raise UsageError(f"--{name} is required for model {args.model}")


# -- sweep -----------------------------------------------------------------


def _alpha_range(args) -> List:
    amax = as_amount(args.alpha_max)
    if is_inf(amax):
        return [INF]
    amin = as_amount(args.alpha_min if args.alpha_min is not None else "0")
    if args.alpha_step is None:
        raise UsageError("--alpha-step is required for a finite alpha range")
    step = as_amount(args.alpha_step)
    if step <= 0:
        raise UsageError("--alpha-step must be positive")
    if amax < amin:
        raise UsageError("empty alpha range")
    values, a = [], amin
    while a <= amax:
        values.append(a)
        a += step
    return values


def sweep_rows(args) -> List[List[str]]:
    t = make_topology(args.n, args.L, args.k)
    models = [m.strip() for m in args.model.split(",") if m.strip()]
    for m in models:
        if m not in SWEEP_MODELS:
            raise UsageError(f"unknown sweep model {m!r}; choose from {', '.join(SWEEP_MODELS)}")
    alphas = _alpha_range(args)
    if args.Lc_max < args.Lc_min:
        raise UsageError("empty Lc range")
    sym = _bandwidth(args, t, False) if args.gamma is not None else None
    asym = _bandwidth(args, t, True) if _is_asym(args) else None
    if sym is None and any(m != "cluster-asymmetric" for m in models):
        raise UsageError("--gamma is required for symmetric models")
    if asym is None and "cluster-asymmetric" in models:
        raise UsageError("cluster-asymmetric needs --gamma-I/--gamma-c or --beta-I/--beta-c")
    rows = []
    for L_c in range(args.Lc_min, args.Lc_max + 1):
        for alpha in alphas:
            for m in models:
                try:
                    if m == "capacity":
                        v = bounds.storage_capacity(t, sym, alpha).value
                    elif m == "node-restricted":
                        v = bounds.node_restricted_upper(t, sym, L_c, alpha).value
                    elif m == "cluster-symmetric":
                        cluster_restricted(t, args.l, L_c)
                        v = bounds.cluster_restricted_symmetric_upper(t, sym, args.l, alpha).value
                    else:
                        v = bounds.cluster_restricted_asymmetric_upper(t, asym, args.l, L_c, alpha).value
                except ClusterDSSError as exc:
                    rows.append([exact_alpha(alpha), str(L_c), m, f"skipped:{type(exc).__name__}", ""])
                    continue
                rows.append([exact_alpha(alpha), str(L_c), m, exact(v), decimal6(v)])
    return rows


def exact_alpha(alpha) -> str:
    if is_inf(alpha):
        return "inf"
    return str(Fraction(alpha))


def write_csv_atomic(path: str, rows: Sequence[Sequence[str]]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(rows)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".sweep-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(buf.getvalue())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_sweep(args, out) -> int:
    if args.model and "cluster" in args.model and args.l is None:
        raise UsageError("--l is required for cluster-restricted models")
    rows = sweep_rows(args)
    write_csv_atomic(args.out, rows)
    out.write(f"wrote {len(rows)} rows to {args.out}\n")
    return EXIT_OK


# -- oracle ----------------------------------------------------------------


def cmd_oracle(args, out) -> int:
    limits = SearchLimits(
        max_n=args.max_n if args.max_n is not None else SearchLimits().max_n,
        time_budget=args.time_budget,
        eavesdrop_scope=args.scope,
    )
    if args.grid:
        if args.grid != "small-default":
            raise UsageError(f"unknown grid {args.grid!r}")
        if max(4, 6, 8) > limits.max_n:
            raise TooLarge(f"grid needs n up to 8, limit is {limits.max_n}")
        reports = validate_bound_grid(small_default_grid(), limits)
    else:
        for name in ("n", "L", "k", "alpha", "Lc"):
            if getattr(args, name) is None:
                raise UsageError(f"--{name} is required")
        t = make_topology(args.n, args.L, args.k)
        if t.n > limits.max_n:
            raise TooLarge(f"n={t.n} exceeds the exhaustive search limit {limits.max_n}")
        if args.model == "node-restricted":
            adv = node_restricted(t, args.Lc)
            bw = _bandwidth(args, t, False)
        else:
            _need(args, "l")
            adv = cluster_restricted(t, args.l, args.Lc)
            bw = _bandwidth(args, t, _is_asym(args))
        reports = [exhaustive_min_secure_flow(t, bw, adv, as_amount(args.alpha), limits)]
    for rep in reports:
        out.write(rep.to_text() + "\n")
    if any(rep.verdict is Verdict.BOUND_VIOLATED for rep in reports):
        return EXIT_VERIFY
    if any(rep.partial for rep in reports):
        out.write("search incomplete (time budget reached)\n")
        return EXIT_VERIFY
    counts = {v: sum(r.verdict is v for r in reports) for v in Verdict}
    out.write(
        "summary " + " ".join(f"{v.value}={c}" for v, c in counts.items()) + "\n"
    )
    return EXIT_OK


# -- rskr ------------------------------------------------------------------


def cmd_rskr(args, out) -> int:
    if args.k is not None and args.k != args.n - 1:
        raise UsageError("the RSKR demonstration needs k = n - 1")
    t = make_topology(args.n, args.L, args.n - 1)
    if not 0 <= args.Lc <= t.L:
        raise UsageError(f"--Lc must lie in 0..{t.L}")
    layout = rskr.rskr_layout(t)
    code = rskr.code_for(layout, args.Lc, args.q)
    if args.message is not None:
        msg = [int(x) for x in args.message.split(",") if x.strip()]
        _, rnd = rskr.random_message(layout, args.Lc, args.seed, args.q)
    else:
        msg, rnd = rskr.random_message(layout, args.Lc, args.seed, args.q)
    state = rskr.store_file(layout, args.Lc, msg, rnd, args.q)
    rskr.repair_all(state)

    failures = []
    s_ids = set(layout.s_ids)
    for clusters in combinations(range(t.L), args.Lc):
        seen = rskr.eavesdrop_node_restricted(state, clusters)
        expected = set(rskr.exposed_pairs(layout, clusters))
        if {p for p, _ in seen} != expected or any(p in s_ids for p, _ in seen):
            failures.append(f"observation mismatch for clusters {clusters}")
    try:
        cert = rskr.verify_perfect_secrecy(layout, args.Lc, code)
    except SecrecyViolation as exc:
        failures.append(f"secrecy: {exc}")
        cert = None
    for nodes in combinations(range(t.n), t.n - 1):
        if rskr.data_collector_decode(state, nodes) != [m % code.q for m in msg]:
            failures.append(f"decode mismatch for collector {nodes}")

    bw = symmetric_bandwidth(t, t.d)
    bound = bounds.node_restricted_upper(t, bw, args.Lc, t.d).value
    secure = rskr.secure_symbol_count(layout, args.Lc)
    rows = [
        ("|S|", len(layout.s_ids)),
        ("|T|", len(layout.t_ids)),
        ("exposed max", rskr.max_exposed(layout, args.Lc)),
        ("secure count", secure),
        ("bound", bound),
        ("field q", code.q),
        ("coset rows (mu)", code.mu),
        ("repair transmissions", len(state.transcript)),
    ]
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        out.write(f"{key:<{width}}  {value}\n")
    if secure != bound:
        failures.append(f"secure count {secure} differs from bound {bound}")
    if cert is not None and args.certificate:
        out.write(cert.to_text())
    if failures:
        for f in failures:
            out.write(f"FAIL {f}\n")
        return EXIT_VERIFY
    out.write("all checks pass\n")
    return EXIT_OK


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="clusterdss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="evaluate one closed-form bound")
    p.add_argument(
        "--model",
        required=True,
        choices=["capacity", "node-restricted", "cluster-restricted",
                 "cluster-symmetric", "cluster-asymmetric", "unclustered"],
    )
    _add_system(p)
    p.add_argument("--alpha", required=True, help="node storage size, or 'inf'")
    p.add_argument("--Lc", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--d", type=int, help="helper count for the unclustered model (default n-1)")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="write a CSV parameter sweep")
    p.add_argument("--model", required=True,
                   help="comma-separated subset of " + ",".join(SWEEP_MODELS))
    _add_system(p)
    p.add_argument("--l", type=int)
    p.add_argument("--alpha-min", dest="alpha_min")
    p.add_argument("--alpha-max", dest="alpha_max", required=True, help="'inf' for bandwidth-limited")
    p.add_argument("--alpha-step", dest="alpha_step")
    p.add_argument("--Lc-min", dest="Lc_min", type=int, default=0)
    p.add_argument("--Lc-max", dest="Lc_max", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="exhaustive min-cut search against a bound")
    p.add_argument("--model", default="node-restricted",
                   choices=["node-restricted", "cluster-restricted"])
    p.add_argument("--grid", help="named grid, e.g. small-default")
    p.add_argument("--n", type=int)
    p.add_argument("--L", type=int)
    p.add_argument("--k", type=int)
    for flag, dest in (("--gamma", "gamma"), ("--beta-I", "beta_I"), ("--beta-c", "beta_c"),
                       ("--gamma-I", "gamma_I"), ("--gamma-c", "gamma_c")):
        p.add_argument(flag, dest=dest)
    p.add_argument("--alpha")
    p.add_argument("--Lc", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--max-n", dest="max_n", type=int,
                   help=f"search size limit (default ${MAX_N_ENV} or 8)")
    p.add_argument("--time-budget", dest="time_budget", type=float)
    p.add_argument("--scope", choices=["newcomers", "all"], default="newcomers")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("rskr", help="RSKR + coset coding demonstration (k = n - 1)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--Lc", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q", type=int, help="prime field order (default: smallest prime > |T|)")
    p.add_argument("--message", help="comma-separated message symbols")
    p.add_argument("--certificate", action="store_true", help="print the secrecy certificate")
    p.set_defaults(func=cmd_rskr)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ClusterDSSError as exc:
        if hasattr(exc, "report") and getattr(exc, "report", None) is not None:
            out.write(exc.report.to_text() + "\n")
            err.write(f"bound violated: {exc}\n")
            return EXIT_VERIFY
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
