"""RSKR repetition layout with wiretap-II coset coding of the cross-cluster symbols.

Every unordered pair of nodes shares exactly one symbol. Pairs inside a
cluster (group S) never cross a top-of-rack switch during repair, so their
symbols hold message data verbatim. Pairs spanning two clusters (group T)
carry a coset codeword whose randomness rows form an MDS code, so an
adversary reading any ``mu`` of those coordinates learns nothing.

Pairs are indexed lexicographically by ``(min id, max id)``; within a
message, S symbols come first, in pair order, followed by the T message
symbols.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb, log
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import field as gf
from .errors import (
    AlreadyFailed,
    FieldTooSmall,
    InsufficientNodes,
    LengthMismatch,
    SecrecyViolation,
    SizeMismatch,
    UnknownCluster,
)
from .topology import ClusterTopology, make_topology


class SymbolClass(enum.Enum):
    S = "S"
    T = "T"


@dataclass(frozen=True)
class CodeLayout:
    n: int
    L: int
    pairs: Tuple[Tuple[int, int], ...]
    classes: Tuple[SymbolClass, ...]

    @property
    def n_I(self) -> int:
        return self.n // self.L

    def cluster_of(self, node: int) -> int:
        return node // self.n_I

    @property
    def s_ids(self) -> List[int]:
        return [i for i, c in enumerate(self.classes) if c is SymbolClass.S]

    @property
    def t_ids(self) -> List[int]:
        return [i for i, c in enumerate(self.classes) if c is SymbolClass.T]

    def node_pairs(self, node: int) -> List[int]:
        return [i for i, (u, v) in enumerate(self.pairs) if node in (u, v)]

    def shared_pair(self, a: int, b: int) -> int:
        return self.pairs.index((min(a, b), max(a, b)))


def rskr_layout(t: ClusterTopology) -> CodeLayout:
    pairs = tuple(combinations(range(t.n), 2))
    classes = tuple(
        SymbolClass.S if t.cluster_of(u) == t.cluster_of(v) else SymbolClass.T
        for u, v in pairs
    )
    return CodeLayout(t.n, t.L, pairs, classes)


def layout_for(n: int, L: int) -> CodeLayout:
    """Layout of an ``(n, k = n-1)`` system with ``L`` clusters."""
    return rskr_layout(make_topology(n, L, n - 1))


def exposed_pairs(layout: CodeLayout, compromised: Iterable[int]) -> List[int]:
    """T pair ids with an endpoint inside a compromised cluster."""
    compromised = set(compromised)
    unknown = [c for c in compromised if not 0 <= c < layout.L]
    if unknown:
        raise UnknownCluster(f"unknown cluster ids {sorted(unknown)}")
    return [
        i
        for i in layout.t_ids
        if layout.cluster_of(layout.pairs[i][0]) in compromised
        or layout.cluster_of(layout.pairs[i][1]) in compromised
    ]


def exposed_T_count(layout: CodeLayout, compromised: Iterable[int]) -> int:
    return len(exposed_pairs(layout, compromised))


def max_exposed(layout: CodeLayout, L_c: int) -> int:
    """Worst-case number of exposed T symbols over every L_c-cluster choice."""
    n, n_I = layout.n, layout.n_I
    return sum(n_I * (n - i * n_I) for i in range(1, L_c + 1))


def secure_symbol_count(layout: CodeLayout, L_c: int, beta: int = 1) -> int:
    """Securely storable symbols; ``beta`` parallel copies of the scheme scale it."""
    return beta * (len(layout.s_ids) + len(layout.t_ids) - max_exposed(layout, L_c))


# -- coset code ------------------------------------------------------------


@dataclass(frozen=True)
class CosetCode:
    q: int
    N: int
    mu: int
    generator: Tuple[Tuple[int, ...], ...]  # message rows first, then randomness rows

    @property
    def k_message(self) -> int:
        return self.N - self.mu

    @property
    def message_rows(self) -> List[List[int]]:
        return [list(r) for r in self.generator[: self.k_message]]

    @property
    def randomness_rows(self) -> List[List[int]]:
        return [list(r) for r in self.generator[self.k_message :]]


def build_coset_code(N: int, mu: int, q: Optional[int] = None) -> CosetCode:
    """Coset code with Vandermonde randomness rows over GF(q).

    Randomness row ``a`` evaluates ``x**a`` at the points ``0 .. N-1``; any
    ``mu`` columns of it form an invertible Vandermonde matrix. Message rows
    are the first unit vectors that extend the randomness rows to a basis.
    ``q`` defaults to the smallest prime above ``N``; only prime fields are
    supported.
    """
    if not 0 <= mu <= N:
        raise LengthMismatch(f"need 0 <= mu <= N, got mu={mu}, N={N}")
    if q is None:
        q = gf.next_prime(N + 1)
    if not gf.is_prime(q):
        raise ValueError(f"field order must be prime, got {q}")
    if q < N and mu not in (0, N):
        raise FieldTooSmall(f"GF({q}) has fewer than N={N} evaluation points")
    if mu == N:
        randomness = [[int(i == j) for j in range(N)] for i in range(N)]
    else:
        randomness = [[pow(x, a, q) for x in range(N)] for a in range(mu)]
    message: List[List[int]] = []
    current = list(randomness)
    for c in range(N):
        if len(message) == N - mu:
            break
        unit = [int(j == c) for j in range(N)]
        if gf.rank(current + [unit], q) > len(current):
            current.append(unit)
            message.append(unit)
    generator = tuple(tuple(r) for r in message + randomness)
    return CosetCode(q, N, mu, generator)


def coset_encode(code: CosetCode, message: Sequence[int], randomness: Sequence[int]) -> List[int]:
    if len(message) != code.k_message or len(randomness) != code.mu:
        raise LengthMismatch(
            f"expected {code.k_message} message and {code.mu} randomness symbols, "
            f"got {len(message)} and {len(randomness)}"
        )
    return gf.vec_mat(list(message) + list(randomness), code.generator, code.q)


def coset_decode(code: CosetCode, codeword: Sequence[int]) -> Tuple[List[int], List[int]]:
    if len(codeword) != code.N:
        raise LengthMismatch(f"expected {code.N} symbols, got {len(codeword)}")
    if code.N == 0:
        return [], []
    inv = gf.inverse([list(r) for r in code.generator], code.q)
    full = gf.vec_mat(codeword, inv, code.q)
    return full[: code.k_message], full[code.k_message :]


# -- live system -----------------------------------------------------------


class Locality(enum.Enum):
    INTRA = "intra"
    CROSS = "cross"


@dataclass(frozen=True)
class Transmission:
    helper: int
    newcomer: int
    pair: int
    value: int
    locality: Locality


@dataclass
class SystemState:
    layout: CodeLayout
    code: CosetCode
    L_c: int
    stores: Dict[int, Dict[int, int]]
    active: Dict[int, bool]
    transcript: List[Transmission] = field(default_factory=list)

    @property
    def q(self) -> int:
        return self.code.q

    def export(self) -> str:
        """``node_id pair_u pair_v class value`` per stored symbol."""
        lines = []
        for node in sorted(self.stores):
            for pid in sorted(self.stores[node]):
                u, v = self.layout.pairs[pid]
                cls = self.layout.classes[pid].value
                lines.append(f"{node} {u} {v} {cls} {self.stores[node][pid]}")
        return "\n".join(lines) + "\n"


def code_for(layout: CodeLayout, L_c: int, q: Optional[int] = None) -> CosetCode:
    return build_coset_code(len(layout.t_ids), max_exposed(layout, L_c), q)


def store_file(
    layout: CodeLayout,
    L_c: int,
    secure_message: Sequence[int],
    randomness: Sequence[int],
    q: Optional[int] = None,
) -> SystemState:
    code = code_for(layout, L_c, q)
    n_s = len(layout.s_ids)
    want = n_s + code.k_message
    if len(secure_message) != want:
        raise SizeMismatch(f"message must have {want} symbols, got {len(secure_message)}")
    if len(randomness) != code.mu:
        raise SizeMismatch(f"randomness must have {code.mu} symbols, got {len(randomness)}")
    values: Dict[int, int] = {}
    for pid, m in zip(layout.s_ids, secure_message[:n_s]):
        values[pid] = m % code.q
    codeword = coset_encode(code, [m % code.q for m in secure_message[n_s:]], randomness)
    for pid, c in zip(layout.t_ids, codeword):
        values[pid] = c
    stores = {u: {pid: values[pid] for pid in layout.node_pairs(u)} for u in range(layout.n)}
    active = {u: True for u in range(layout.n)}
    return SystemState(layout, code, L_c, stores, active)


def random_message(layout: CodeLayout, L_c: int, seed: int, q: Optional[int] = None):
    """Seeded (message, randomness) from Python's MT19937 ``random.Random``."""
    code = code_for(layout, L_c, q)
    rng = random.Random(seed)
    msg = [rng.randrange(code.q) for _ in range(len(layout.s_ids) + code.k_message)]
    rnd = [rng.randrange(code.q) for _ in range(code.mu)]
    return msg, rnd


def repair_node(state: SystemState, failed: int) -> SystemState:
    """Fail ``failed`` and rebuild it from one symbol per surviving node."""
    layout = state.layout
    if not state.active.get(failed, False):
        raise AlreadyFailed(f"node {failed} is not active")
    helpers = [u for u in range(layout.n) if u != failed]
    missing = [u for u in helpers if not state.active[u]]
    if missing:
        raise InsufficientNodes(f"helpers {missing} are not active")
    state.active[failed] = False
    state.stores[failed] = {}
    rebuilt = {}
    for h in helpers:
        pid = layout.shared_pair(h, failed)
        value = state.stores[h][pid]
        same = layout.cluster_of(h) == layout.cluster_of(failed)
        state.transcript.append(
            Transmission(h, failed, pid, value, Locality.INTRA if same else Locality.CROSS)
        )
        rebuilt[pid] = value
    state.stores[failed] = rebuilt
    state.active[failed] = True
    return state


def repair_all(state: SystemState, order: Optional[Sequence[int]] = None) -> SystemState:
    for u in order if order is not None else range(state.layout.n):
        repair_node(state, u)
    return state


def eavesdrop_node_restricted(
    state: SystemState, compromised: Iterable[int]
) -> FrozenSet[Tuple[int, int]]:
    """``(pair id, value)`` seen on switches of the compromised clusters."""
    compromised = set(compromised)
    layout = state.layout
    unknown = [c for c in compromised if not 0 <= c < layout.L]
    if unknown:
        raise UnknownCluster(f"unknown cluster ids {sorted(unknown)}")
    return frozenset(
        (tx.pair, tx.value)
        for tx in state.transcript
        if tx.locality is Locality.CROSS
        and (
            layout.cluster_of(tx.helper) in compromised
            or layout.cluster_of(tx.newcomer) in compromised
        )
    )


def data_collector_decode(state: SystemState, nodes: Iterable[int]) -> List[int]:
    layout = state.layout
    nodes = sorted(set(nodes))
    if len(nodes) < layout.n - 1:
        raise InsufficientNodes(f"need {layout.n - 1} nodes, got {len(nodes)}")
    values: Dict[int, int] = {}
    for u in nodes:
        if not state.active.get(u, False):
            raise InsufficientNodes(f"node {u} is not active")
        values.update(state.stores[u])
    s_part = [values[pid] for pid in layout.s_ids]
    t_message, _ = coset_decode(state.code, [values[pid] for pid in layout.t_ids])
    return s_part + t_message


# -- secrecy certificates --------------------------------------------------


class SecrecyMode(enum.Enum):
    ALGEBRAIC = "algebraic"
    EXHAUSTIVE = "exhaustive"


EXHAUSTIVE_LIMIT = 10**7


@dataclass(frozen=True)
class SecrecyCertificate:
    mode: SecrecyMode
    n: int
    L: int
    L_c: int
    q: int
    N: int
    mu: int
    checked: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]  # (clusters, T coordinates)
    all_mu_subsets: bool = False
    mutual_information: float = 0.0

    def to_text(self) -> str:
        lines = [
            f"mode {self.mode.value}",
            f"params n={self.n} L={self.L} Lc={self.L_c} q={self.q} N={self.N} mu={self.mu}",
            f"all_mu_subsets {str(self.all_mu_subsets).lower()}",
        ]
        if self.mode is SecrecyMode.EXHAUSTIVE:
            lines.append(f"mutual_information {self.mutual_information!r}")
        for clusters, coords in self.checked:
            lines.append(
                "checked clusters=" + ",".join(map(str, clusters))
                + " coords=" + ",".join(map(str, coords))
            )
        lines.append("result pass")
        return "\n".join(lines) + "\n"


def observation_sets(layout: CodeLayout, L_c: int) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """For each L_c-cluster choice, the T coordinates (codeword indices) it exposes."""
    position = {pid: idx for idx, pid in enumerate(layout.t_ids)}
    out = []
    for clusters in combinations(range(layout.L), L_c):
        coords = tuple(sorted(position[pid] for pid in exposed_pairs(layout, clusters)))
        out.append((clusters, coords))
    return out


def _check_rank(code: CosetCode, coords: Sequence[int], clusters) -> None:
    if len(coords) > code.mu:
        raise SecrecyViolation(
            f"{len(coords)} coordinates observed but the code only hides {code.mu}",
            clusters, tuple(coords),
        )
    if not coords:
        return
    sub = gf.columns(code.randomness_rows, coords)
    if gf.rank(sub, code.q) < len(coords):
        raise SecrecyViolation(
            f"randomness rows are rank deficient on coordinates {list(coords)}",
            clusters, tuple(coords),
        )


def mutual_information(joint: Dict[Tuple, Counter]) -> float:
    """I(M; O) in bits for uniform messages, from per-message observation counts."""
    total = sum(sum(c.values()) for c in joint.values())
    p_obs: Counter = Counter()
    for counts in joint.values():
        p_obs.update(counts)
    mi = 0.0
    for counts in joint.values():
        p_m = sum(counts.values()) / total
        for obs, c in counts.items():
            p_mo = c / total
            mi += p_mo * log(p_mo / (p_m * p_obs[obs] / total), 2)
    return mi


def verify_perfect_secrecy(
    layout: CodeLayout,
    L_c: int,
    code: CosetCode,
    mode: SecrecyMode = SecrecyMode.ALGEBRAIC,
    all_mu_subsets: bool = False,
) -> SecrecyCertificate:
    """Certify that no L_c-cluster choice learns anything about the message.

    Algebraic mode checks that the randomness rows have full column rank on
    each observed coordinate set (and on every ``mu``-subset when
    ``all_mu_subsets``). Exhaustive mode enumerates every message and
    randomness vector and compares observation distributions.
    """
    sets = observation_sets(layout, L_c)
    if mode is SecrecyMode.ALGEBRAIC:
        for clusters, coords in sets:
            _check_rank(code, coords, clusters)
        if all_mu_subsets:
            for coords in combinations(range(code.N), code.mu):
                _check_rank(code, coords, None)
        return SecrecyCertificate(
            mode, layout.n, layout.L, L_c, code.q, code.N, code.mu, tuple(sets), all_mu_subsets
        )
    if code.q**code.N > EXHAUSTIVE_LIMIT:
        raise ValueError(f"q^N = {code.q**code.N} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}")
    worst = 0.0
    for clusters, coords in sets:
        mi = _exhaustive_mi(code, coords, clusters)
        worst = max(worst, mi)
    return SecrecyCertificate(
        mode, layout.n, layout.L, L_c, code.q, code.N, code.mu, tuple(sets), False, worst
    )


def _exhaustive_mi(code: CosetCode, coords: Sequence[int], clusters) -> float:
    joint: Dict[Tuple, Counter] = {}
    for m in product(range(code.q), repeat=code.k_message):
        counts: Counter = Counter()
        for r in product(range(code.q), repeat=code.mu):
            word = coset_encode(code, m, r)
            counts[tuple(word[c] for c in coords)] += 1
        joint[m] = counts
    reference = next(iter(joint.values()))
    for m, counts in joint.items():
        if counts != reference:
            raise SecrecyViolation(
                f"observation distribution depends on the message (message {list(m)})",
                clusters, tuple(coords),
            )
    return mutual_information(joint)


def exhaustive_observation_check(code: CosetCode, coords: Sequence[int]) -> float:
    """Mutual information between message and ``coords`` by full enumeration."""
    return _exhaustive_mi(code, coords, None)
