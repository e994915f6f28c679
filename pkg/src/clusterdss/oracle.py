"""Exhaustive search for the smallest secure min-cut on small systems.

The search covers one repair round: ``k`` distinct nodes fail one after
another, each is replaced inside its own cluster, and the data collector
contacts the ``k`` newcomers. Nodes of a cluster are interchangeable, so a
failure order is enumerated as a sequence of cluster labels, and sequences
that differ only by a relabeling of interchangeable clusters are visited
once.

Placements are maximal: ``L_c`` compromised clusters, or exactly ``l``
eavesdropped nodes. Zeroing more edges never raises a cut, so smaller
placements cannot produce a smaller minimum.

The enumerated family is finite while the set of all flow graphs is not;
reports state the value over the enumerated family only.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .bounds import secrecy_upper
from .errors import BoundViolated, ClusterDSSError, TooLarge
from .flowgraph import (
    RepairSchedule,
    apply_eavesdropper,
    build_flow_graph,
    build_worst_case_graph,
    min_cut,
)
from .topology import (
    AdversaryModel,
    AdversarySpec,
    Amount,
    BandwidthModel,
    ClusterTopology,
    as_amount,
    asymmetric_bandwidth,
    cluster_restricted,
    make_topology,
    node_restricted,
    symmetric_bandwidth,
)

MAX_N_ENV = "CLUSTERDSS_MAX_N"
FAMILY_NOTE = "minimum over single-round repair graphs only"


def _default_max_n() -> int:
    return int(os.environ.get(MAX_N_ENV, "8"))


@dataclass(frozen=True)
class SearchLimits:
    max_n: int = field(default_factory=_default_max_n)
    max_schedules: Optional[int] = None
    time_budget: Optional[float] = None  # seconds
    # "newcomers": eavesdropped nodes are drawn from the k newcomers;
    # "all": from every node in the graph, original ones included
    eavesdrop_scope: str = "newcomers"


class Verdict(enum.Enum):
    BOUND_TIGHT = "BoundTight"
    BOUND_VALID = "BoundValid"
    BOUND_VIOLATED = "BoundViolated"
    SKIPPED = "Skipped"


@dataclass(frozen=True)
class OracleReport:
    params: Dict[str, Any]
    min_value: Optional[Amount]
    witness: Optional[Tuple[RepairSchedule, frozenset]]
    bound_value: Optional[Amount]
    verdict: Verdict
    enumerated_count: int
    partial: bool = False
    note: str = FAMILY_NOTE

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.BOUND_VIOLATED

    def to_text(self) -> str:
        p = " ".join(f"{k}={v}" for k, v in self.params.items())
        if self.verdict is Verdict.SKIPPED:
            return f"{self.verdict.value} {p} reason={self.note}"
        line = (
            f"{self.verdict.value}({_fmt(self.min_value)}) {p} bound={_fmt(self.bound_value)} "
            f"enumerated={self.enumerated_count}"
        )
        if self.partial:
            line += " PARTIAL"
        if self.verdict is Verdict.BOUND_VIOLATED and self.witness:
            sched, placement = self.witness
            order = [r.failed for r in sched.repairs]
            line += f" witness_failures={order} witness_placement={sorted(placement)}"
        return line


def _fmt(value) -> str:
    return "None" if value is None else str(value)


def _verdict(min_value, bound_value) -> Verdict:
    if min_value == bound_value:
        return Verdict.BOUND_TIGHT
    if min_value > bound_value:
        return Verdict.BOUND_VALID
    return Verdict.BOUND_VIOLATED


def canonical_cluster_sequences(
    k: int, n_I: int, groups: Sequence[Sequence[int]]
) -> Iterator[Tuple[int, ...]]:
    """Cluster-label sequences of length ``k`` using each cluster at most n_I times.

    Clusters inside one group are interchangeable, so a group's clusters are
    only ever introduced in their listed order.
    """
    counts: Dict[int, int] = {c: 0 for grp in groups for c in grp}
    introduced = [0] * len(groups)
    seq: List[int] = []

    def rec() -> Iterator[Tuple[int, ...]]:
        if len(seq) == k:
            yield tuple(seq)
            return
        for gi, grp in enumerate(groups):
            limit = min(introduced[gi] + 1, len(grp))
            for pos in range(limit):
                c = grp[pos]
                if counts[c] >= n_I:
                    continue
                fresh = pos == introduced[gi]
                counts[c] += 1
                if fresh:
                    introduced[gi] += 1
                seq.append(c)
                yield from rec()
                seq.pop()
                if fresh:
                    introduced[gi] -= 1
                counts[c] -= 1

    yield from rec()


def sequence_to_failures(t: ClusterTopology, seq: Sequence[int]) -> List[int]:
    used = {c: 0 for c in range(t.L)}
    out = []
    for c in seq:
        out.append(t.cluster_nodes(c)[used[c]])
        used[c] += 1
    return out


def _candidates(
    t: ClusterTopology, adv: AdversarySpec, limits: SearchLimits
) -> Iterator[Tuple[RepairSchedule, frozenset]]:
    if adv.model is AdversaryModel.NODE_RESTRICTED:
        compromised = list(range(adv.L_c))
        groups = [compromised, list(range(adv.L_c, t.L))]
        placement = frozenset(compromised)
        for seq in canonical_cluster_sequences(t.k, t.n_I, groups):
            yield RepairSchedule.consecutive(t, sequence_to_failures(t, seq)), placement
        return
    for seq in canonical_cluster_sequences(t.k, t.n_I, [list(range(t.L))]):
        sched = RepairSchedule.consecutive(t, sequence_to_failures(t, seq))
        cluster = {r.newcomer: t.cluster_of(r.failed) for r in sched.repairs}
        cluster.update({u: t.cluster_of(u) for u in range(t.n)})
        if limits.eavesdrop_scope == "all":
            pool = list(range(t.n)) + [r.newcomer for r in sched.repairs]
        elif limits.eavesdrop_scope == "newcomers":
            pool = [r.newcomer for r in sched.repairs]
        else:
            raise ValueError(f"unknown eavesdrop_scope {limits.eavesdrop_scope!r}")
        for spies in combinations(pool, adv.l):
            if len({cluster[u] for u in spies}) <= adv.L_c:
                yield sched, frozenset(spies)


def closed_form_bound(
    t: ClusterTopology, bw: BandwidthModel, adv: AdversarySpec, alpha
) -> Amount:
    return secrecy_upper(t, bw, adv, alpha).value


def exhaustive_min_secure_flow(
    t: ClusterTopology,
    bw: BandwidthModel,
    adv: AdversarySpec,
    alpha,
    limits: Optional[SearchLimits] = None,
) -> OracleReport:
    limits = limits or SearchLimits()
    if t.n > limits.max_n:
        raise TooLarge(f"n={t.n} exceeds the exhaustive search limit {limits.max_n}")
    adv.validate(t)
    alpha = as_amount(alpha)
    params = _params(t, bw, adv, alpha)
    start = time.monotonic()
    best: Optional[Amount] = None
    witness = None
    count = 0
    partial = False
    for sched, placement in _candidates(t, adv, limits):
        if limits.max_schedules is not None and count >= limits.max_schedules:
            partial = True
            break
        if limits.time_budget is not None and time.monotonic() - start > limits.time_budget:
            partial = True
            break
        g = apply_eavesdropper(build_flow_graph(t, bw, sched, alpha), adv, placement)
        value = min_cut(g)
        count += 1
        if best is None or value < best:
            best, witness = value, (sched, placement)
    bound = closed_form_bound(t, bw, adv, alpha)
    if best is None:
        return OracleReport(
            params, None, None, bound, Verdict.SKIPPED, 0, partial,
            note="no graph enumerated within the search limits",
        )
    return OracleReport(
        params, best, witness, bound, _verdict(best, bound), count, partial
    )


def worst_case_min_cut(
    t: ClusterTopology, bw: BandwidthModel, l: int, L_c: int, alpha, tie_break="low"
) -> Amount:
    adv = cluster_restricted(t, l, L_c)
    g, placement = build_worst_case_graph(t, bw, l, L_c, alpha, tie_break)
    return min_cut(apply_eavesdropper(g, adv, placement))


def _params(t, bw, adv, alpha) -> Dict[str, Any]:
    p: Dict[str, Any] = {
        "model": adv.model.value,
        "n": t.n,
        "L": t.L,
        "k": t.k,
    }
    if bw.symmetric:
        p["beta"] = bw.beta
    else:
        p["beta_I"] = bw.beta_I
        p["beta_c"] = bw.beta_c
    p["alpha"] = alpha
    p["Lc"] = adv.L_c
    if adv.l is not None:
        p["l"] = adv.l
    return p


# -- grids -----------------------------------------------------------------


def point_objects(point: Dict[str, Any]):
    """Build (topology, bandwidth, adversary, alpha) from a raw grid point.

    Keys: model, n, L, k, alpha, Lc, and l for cluster-restricted points;
    bandwidth from either ``beta`` / ``gamma`` (symmetric) or ``beta_I`` and
    ``beta_c`` (asymmetric).
    """
    t = make_topology(point["n"], point["L"], point["k"])
    if "beta_I" in point:
        bw = asymmetric_bandwidth(t, point["beta_I"], point["beta_c"])
    elif "gamma" in point:
        bw = symmetric_bandwidth(t, point["gamma"])
    else:
        bw = symmetric_bandwidth(t, Fraction(point.get("beta", 1)) * t.d)
    model = AdversaryModel(point["model"])
    if model is AdversaryModel.NODE_RESTRICTED:
        adv = node_restricted(t, point["Lc"])
    else:
        adv = cluster_restricted(t, point["l"], point["Lc"])
    return t, bw, adv, as_amount(point["alpha"])


def _run_point(args) -> OracleReport:
    point, limits = args
    try:
        t, bw, adv, alpha = point_objects(point)
    except ClusterDSSError as exc:
        return OracleReport(
            dict(point), None, None, None, Verdict.SKIPPED, 0,
            note=f"{type(exc).__name__}: {exc}",
        )
    return exhaustive_min_secure_flow(t, bw, adv, alpha, limits)


def validate_bound_grid(
    grid: Iterable[Dict[str, Any]],
    limits: Optional[SearchLimits] = None,
    workers: int = 1,
) -> List[OracleReport]:
    """One report per grid point, in grid order.

    Invalid points come back as ``Skipped`` reports. The first violated
    bound raises :class:`BoundViolated` carrying its report.
    """
    limits = limits or SearchLimits()
    jobs = [(dict(p), limits) for p in grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_point, jobs))
    else:
        reports = []
        for job in jobs:
            rep = _run_point(job)
            reports.append(rep)
            if rep.verdict is Verdict.BOUND_VIOLATED:
                break
    for rep in reports:
        if rep.verdict is Verdict.BOUND_VIOLATED:
            raise BoundViolated(rep.to_text(), rep)
    return reports


ALPHA_CHOICES = ("1", "2", "n-1", "inf")


def small_default_grid(
    ns: Sequence[int] = (4, 6, 8), model: str = "node-restricted"
) -> List[Dict[str, Any]]:
    """Every L | n, 1 <= k < n, beta = 1 and alpha in {1, 2, n-1, inf}.

    Node-restricted points sweep ``L_c``; cluster-restricted ones sweep every
    ``(l, L_c)`` pair, invalid pairs included so they show up as skipped.
    """
    grid = []
    for n in ns:
        for L in [x for x in range(1, n + 1) if n % x == 0]:
            for k in range(1, n):
                for a in ALPHA_CHOICES:
                    alpha = str(n - 1) if a == "n-1" else a
                    for L_c in range(L + 1):
                        base = {"model": model, "n": n, "L": L, "k": k, "beta": 1,
                                "alpha": alpha, "Lc": L_c}
                        if model == "node-restricted":
                            grid.append(base)
                        else:
                            for l in range(k + 1):
                                grid.append({**base, "l": l})
    return grid
