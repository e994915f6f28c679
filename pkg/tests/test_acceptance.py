"""Acceptance criteria, one printed PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v``; the result lines are
written straight to the terminal even when output capture is on.
"""

import csv
import io
import math
import random
import time
from fractions import Fraction
from collections import Counter
from itertools import combinations, product

import pytest

from clusterdss.bounds import (
    cluster_restricted_asymmetric_upper,
    cluster_restricted_symmetric_upper,
    unclustered_secrecy_upper,
    node_restricted_upper,
    storage_capacity,
)
from clusterdss.cli import main
from clusterdss.errors import SecrecyViolation
from clusterdss.field import rank
from clusterdss.oracle import Verdict, small_default_grid, validate_bound_grid, worst_case_min_cut
from clusterdss.rskr import (
    SecrecyMode,
    build_coset_code,
    code_for,
    data_collector_decode,
    eavesdrop_node_restricted,
    layout_for,
    random_message,
    repair_all,
    secure_symbol_count,
    store_file,
    verify_perfect_secrecy,
)
from clusterdss.topology import (
    asymmetric_bandwidth,
    make_topology,
    symmetric_bandwidth,
)

INF = math.inf


@pytest.fixture
def report(capsys):
    def _report(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, f"{name}: {detail}"

    return _report


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def grid_points():
    for n in (4, 6, 8):
        for L in divisors(n):
            for k in range(1, n):
                for alpha in (Fraction(1), Fraction(2), Fraction(n - 1), INF):
                    yield make_topology(n, L, k), alpha


def cluster_pairs(t):
    for L_c in range(t.L + 1):
        for l in range(0, min(t.k, L_c * t.n_I) + 1):
            yield l, L_c


def test_criterion_1_six_node_example(report):
    start = time.monotonic()
    t = make_topology(6, 3, 5)
    bw = symmetric_bandwidth(t, 5)
    layout = layout_for(6, 3)
    msg, rnd = random_message(layout, 1, seed=7)
    state = repair_all(store_file(layout, 1, msg, rnd))
    decodes = sum(data_collector_decode(state, nodes) == msg for nodes in combinations(range(6), 5))
    cert = verify_perfect_secrecy(layout, 1, code_for(layout, 1))
    facts = {
        "capacity": (storage_capacity(t, bw, 5).value, 15),
        "node-restricted bound": (node_restricted_upper(t, bw, 1, 5).value, 7),
        "|S|": (len(layout.s_ids), 3),
        "|T|": (len(layout.t_ids), 12),
        "max exposed": (code_for(layout, 1).mu, 8),
        "secure count": (secure_symbol_count(layout, 1), 7),
        "decodes": (decodes, 6),
        "certified cluster choices": (len(cert.checked), 3),
    }
    elapsed = time.monotonic() - start
    wrong = {k: v for k, v in facts.items() if v[0] != v[1]}
    ok = not wrong and elapsed < 10
    detail = f"{len(facts)} exact values checked in {elapsed:.2f}s"
    if wrong:
        detail += f"; mismatches {wrong}"
    report("criterion 1 (six-node example)", ok, detail)


def test_criterion_2a_oracle_node_restricted(report):
    start = time.monotonic()
    reps = validate_bound_grid(small_default_grid())
    tight = sum(r.verdict is Verdict.BOUND_TIGHT for r in reps)
    valid = sum(r.verdict is Verdict.BOUND_VALID for r in reps)
    partial = sum(r.partial for r in reps)
    elapsed = time.monotonic() - start
    # every point's family contains the witness order, so equality is required
    ok = tight == len(reps) and partial == 0 and elapsed < 30 * 60
    report(
        "criterion 2a (oracle vs node-restricted bound)",
        ok,
        f"{len(reps)} points, tight={tight}, valid-not-tight={valid}, partial={partial}, {elapsed:.1f}s",
    )


def test_criterion_2b_cluster_symmetric_matches_unclustered(report):
    checked, bad = 0, []
    for t, alpha in grid_points():
        bw = symmetric_bandwidth(t, t.d)
        for l in range(t.k + 1):
            a = cluster_restricted_symmetric_upper(t, bw, l, alpha).value
            b = unclustered_secrecy_upper(t.n, t.k, t.d, l, Fraction(1), alpha).value
            checked += 1
            if a != b:
                bad.append((t.n, t.L, t.k, l, alpha, a, b))
    report("criterion 2b (cluster symmetric bound vs unclustered bound at d=n-1)", not bad,
           f"{checked} points, mismatches={bad[:3]}")


def test_criterion_2c_asymmetric_matches_worst_case_graph(report):
    start = time.monotonic()
    checked, bad = 0, []
    for t, alpha in grid_points():
        bw = asymmetric_bandwidth(t, 1, 1)
        for l, L_c in cluster_pairs(t):
            closed = cluster_restricted_asymmetric_upper(t, bw, l, L_c, alpha).value
            cut = worst_case_min_cut(t, bw, l, L_c, alpha)
            checked += 1
            if closed != cut:
                bad.append((t.n, t.L, t.k, l, L_c, alpha, closed, cut))
    elapsed = time.monotonic() - start
    report("criterion 2c (asymmetric bound vs worst-case graph min-cut)",
           not bad and elapsed < 30 * 60,
           f"{checked} points, mismatches={bad[:3]}, {elapsed:.1f}s")


def test_criterion_3_symmetric_reduction(report):
    checked, bad = 0, []
    for t, alpha in grid_points():
        asym = asymmetric_bandwidth(t, 1, 1)
        sym = symmetric_bandwidth(t, t.d)
        for l, L_c in cluster_pairs(t):
            a = cluster_restricted_asymmetric_upper(t, asym, l, L_c, alpha).value
            s = cluster_restricted_symmetric_upper(t, sym, l, alpha).value
            checked += 1
            if a != s:
                bad.append((t.n, t.L, t.k, l, L_c, alpha, a, s))
    report("criterion 3 (equal bandwidths reduce to the symmetric bound)", not bad,
           f"{checked} points, mismatches={bad[:3]}")


def test_criterion_4_rskr_achieves_node_restricted_bound(report):
    checked, bad = 0, []
    for n in range(2, 13):
        for L in divisors(n):
            layout = layout_for(n, L)
            t = make_topology(n, L, n - 1)
            n_I = n // L
            # count classes directly from node pairs
            s = sum(1 for u, v in combinations(range(n), 2) if u // n_I == v // n_I)
            tt = n * (n - 1) // 2 - s
            for L_c in range(L + 1):
                lhs = s + tt - sum(n_I * (n - i * n_I) for i in range(1, L_c + 1))
                bound = node_restricted_upper(t, symmetric_bandwidth(t, n - 1), L_c, n - 1).value
                checked += 1
                if not (lhs == bound == secure_symbol_count(layout, L_c)):
                    bad.append((n, L, L_c, lhs, bound))
    report("criterion 4 (RSKR secure count equals node-restricted bound, n<=12)", not bad,
           f"{checked} (n, L, L_c) triples, mismatches={bad[:3]}")


def test_criterion_5_perfect_secrecy(report):
    start = time.monotonic()
    layout = layout_for(4, 2)
    code = code_for(layout, 1)
    problems = []
    if code.q ** code.N > 10**7:
        problems.append("field too large for enumeration")
    try:
        cert = verify_perfect_secrecy(layout, 1, code, SecrecyMode.EXHAUSTIVE)
        if cert.mutual_information != 0.0:
            problems.append(f"mutual information {cert.mutual_information}")
    except SecrecyViolation as exc:
        problems.append(str(exc))
    # end to end: every stored message and randomness through store, repair, eavesdrop
    n_msg = len(layout.s_ids) + code.k_message
    for clusters in combinations(range(layout.L), 1):
        seen = {}
        for m in product(range(code.q), repeat=n_msg):
            dist = Counter()
            for r in product(range(code.q), repeat=code.mu):
                state = repair_all(store_file(layout, 1, list(m), list(r)))
                dist[eavesdrop_node_restricted(state, clusters)] += 1
            seen[m] = dist
        if len({frozenset(d.items()) for d in seen.values()}) != 1:
            problems.append(f"observations depend on the message for clusters {clusters}")
    big = build_coset_code(12, 8, 13)
    subsets = 0
    for coords in combinations(range(12), 8):
        sub = [[row[c] for c in coords] for row in big.randomness_rows]
        subsets += 1
        if rank(sub, 13) != 8:
            problems.append(f"rank deficient on {coords}")
            break
    elapsed = time.monotonic() - start
    ok = not problems and elapsed < 300
    report(
        "criterion 5 (perfect secrecy)",
        ok,
        f"exhaustive n=4 L=2 Lc=1 q={code.q} N={code.N} mu={code.mu} "
        f"({code.q ** (n_msg + code.mu)} stored files per cluster choice); "
        f"{subsets} rank checks for N=12 mu=8 q=13; {elapsed:.1f}s; problems={problems}",
    )


def _sweep(tmp_path, name, argv):
    path = tmp_path / name
    code = main(["sweep", "--out", str(path), *argv], io.StringIO(), io.StringIO())
    assert code == 0
    table = {}
    for row in list(csv.reader(path.open()))[1:]:
        alpha = INF if row[0] == "inf" else Fraction(row[0])
        value = None if row[3].startswith("skipped") else Fraction(row[3])
        table[(row[2], int(row[1]), alpha)] = value
    return table


def test_criterion_6_figure_shapes(tmp_path, report):
    start = time.monotonic()
    problems = []
    # the alpha range runs past d*beta = 1 so saturation is visible
    alpha_sweep = _sweep(tmp_path, "alpha_sweep.csv", [
        "--model", "capacity,node-restricted", "--n", "100", "--L", "10", "--k", "85",
        "--gamma", "1", "--alpha-min", "0", "--alpha-max", "6/5", "--alpha-step", "1/100",
        "--Lc-min", "0", "--Lc-max", "10",
    ])
    alphas = sorted({a for _, _, a in alpha_sweep})
    for a in alphas:
        cap = alpha_sweep[("capacity", 0, a)]
        curve = [alpha_sweep[("node-restricted", L_c, a)] for L_c in range(11)]
        if any(v > cap for v in curve):
            problems.append(f"capacity not dominant at alpha={a}")
        if curve[0] != cap:
            problems.append(f"L_c=0 differs from capacity at alpha={a}")
        if any(x < y for x, y in zip(curve, curve[1:])):
            problems.append(f"not non-increasing in L_c at alpha={a}")
    for L_c in range(11):
        for model in ("capacity", "node-restricted"):
            series = [alpha_sweep[(model, L_c, a)] for a in alphas]
            if any(x > y for x, y in zip(series, series[1:])):
                problems.append(f"{model} L_c={L_c} decreases in alpha")
            if len({alpha_sweep[(model, L_c, a)] for a in alphas if a >= 1}) != 1:
                problems.append(f"{model} L_c={L_c} not constant for alpha >= d*beta")

    sym = _sweep(tmp_path, "lc_sweep_sym.csv", [
        "--model", "cluster-symmetric", "--n", "100", "--L", "10", "--k", "80", "--l", "10",
        "--gamma", "1", "--alpha-max", "inf", "--Lc-min", "1", "--Lc-max", "10",
    ])
    asym = _sweep(tmp_path, "lc_sweep_asym.csv", [
        "--model", "cluster-asymmetric", "--n", "100", "--L", "10", "--k", "80", "--l", "10",
        "--gamma-I", "1", "--gamma-c", "0", "--alpha-max", "inf", "--Lc-min", "1", "--Lc-max", "10",
    ])
    s_col = [sym[("cluster-symmetric", L_c, INF)] for L_c in range(1, 11)]
    a_col = [asym[("cluster-asymmetric", L_c, INF)] for L_c in range(1, 11)]
    if len(set(s_col)) != 1:
        problems.append("symmetric column varies with L_c")
    if any(x < y for x, y in zip(a_col, a_col[1:])):
        problems.append("asymmetric column increases with L_c")
    # ceil(l / n_I) = 1, so every swept L_c qualifies
    if any(a > s for a, s in zip(a_col, s_col)):
        problems.append("asymmetric column above symmetric")
    elapsed = time.monotonic() - start
    ok = not problems and elapsed < 60
    report(
        "criterion 6 (figure shapes)",
        ok,
        f"{len(alpha_sweep)} + {len(sym) + len(asym)} rows, symmetric={s_col[0]}, "
        f"asymmetric={[str(v) for v in a_col]}, {elapsed:.1f}s, problems={problems[:3]}",
    )


def test_criterion_7_monotonicity(report):
    rng = random.Random(20240611)
    draws, bad = 1200, []
    for _ in range(draws):
        n = rng.randint(2, 24)
        L = rng.choice(divisors(n))
        k = rng.randint(1, n - 1)
        t = make_topology(n, L, k)
        beta = Fraction(rng.randint(0, 12), rng.randint(1, 6))
        beta_c = beta * Fraction(rng.randint(0, 4), 4)
        a1 = Fraction(rng.randint(0, 40), rng.randint(1, 4))
        a2 = a1 + Fraction(rng.randint(0, 20), rng.randint(1, 4))
        sym = symmetric_bandwidth(t, beta * t.d)
        asym = asymmetric_bandwidth(t, beta, beta_c)
        case = (n, L, k, beta, beta_c, a1, a2)

        for alpha in (a1, a2, INF):
            nr = [node_restricted_upper(t, sym, L_c, alpha).value for L_c in range(L + 1)]
            if any(x < y for x, y in zip(nr, nr[1:])):
                bad.append(("node-restricted in L_c", case))
            cs = [cluster_restricted_symmetric_upper(t, sym, l, alpha).value for l in range(k + 1)]
            if any(x < y for x, y in zip(cs, cs[1:])):
                bad.append(("cluster symmetric in l", case))
            for l in range(k + 1):
                u1 = unclustered_secrecy_upper(n, k, n - 1, l, beta, alpha).value
                if u1 != cs[l]:
                    bad.append(("unclustered vs cluster symmetric", case, l))
            for L_c in range(L + 1):
                ls = range(0, min(k, L_c * t.n_I) + 1)
                ca = [cluster_restricted_asymmetric_upper(t, asym, l, L_c, alpha).value for l in ls]
                if any(x < y for x, y in zip(ca, ca[1:])):
                    bad.append(("asymmetric in l", case, L_c))
            for l in range(k + 1):
                lcs = [c for c in range(L + 1) if l <= c * t.n_I]
                ca = [cluster_restricted_asymmetric_upper(t, asym, l, c, alpha).value for c in lcs]
                if any(x < y for x, y in zip(ca, ca[1:])):
                    bad.append(("asymmetric in L_c", case, l))

        L_c = rng.randint(0, L)
        l = rng.randint(0, min(k, L_c * t.n_I))
        for f in (
            lambda a: storage_capacity(t, sym, a).value,
            lambda a: node_restricted_upper(t, sym, L_c, a).value,
            lambda a: cluster_restricted_symmetric_upper(t, sym, l, a).value,
            lambda a: cluster_restricted_asymmetric_upper(t, asym, l, L_c, a).value,
        ):
            if not f(a1) <= f(a2) <= f(INF):
                bad.append(("alpha", case, L_c, l))
    report("criterion 7 (monotonicity, seeded draws)", not bad,
           f"{draws} draws, violations={len(bad)} {bad[:3]}")
