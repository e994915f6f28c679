"""Closed-form storage capacity and secrecy-capacity upper bounds.

Every evaluator returns a :class:`BoundResult` whose ``per_term`` keeps the
individual ``min{bandwidth term, alpha}`` summands in summation order, so
that tests can compare against a min-cut term by term.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import IndexOutOfRange, InvalidAdversary, InvalidL, InvalidLc
from .topology import (
    AdversaryModel,
    AdversarySpec,
    Amount,
    BandwidthKind,
    BandwidthModel,
    ClusterTopology,
    as_amount,
)


class Regime(enum.Enum):
    BANDWIDTH_LIMITED = "bandwidth-limited"
    STORAGE_LIMITED = "storage-limited"
    MIXED = "mixed"


@dataclass(frozen=True)
class BoundResult:
    value: Fraction
    per_term: Tuple[Fraction, ...]
    regime: Regime

    def __float__(self):
        return float(self.value)


class _Accumulator:
    """Collects ``min{x, alpha}`` terms and tracks which side won."""

    def __init__(self, alpha: Amount):
        self.alpha = alpha
        self.terms: List[Fraction] = []
        self.bw_side = 0
        self.storage_side = 0

    def add(self, x: Fraction) -> None:
        if x <= self.alpha:
            self.terms.append(Fraction(x))
            self.bw_side += 1
        else:
            self.terms.append(Fraction(self.alpha))
            self.storage_side += 1

    def result(self) -> BoundResult:
        if self.storage_side and self.bw_side:
            regime = Regime.MIXED
        elif self.storage_side:
            regime = Regime.STORAGE_LIMITED
        else:
            regime = Regime.BANDWIDTH_LIMITED
        return BoundResult(sum(self.terms, Fraction(0)), tuple(self.terms), regime)


def _alpha(alpha) -> Amount:
    alpha = as_amount(alpha)
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return alpha


def _require_symmetric(bw: BandwidthModel) -> Fraction:
    if bw.kind is not BandwidthKind.SYMMETRIC:
        raise TypeError("this bound needs a symmetric bandwidth model")
    return bw.beta


def storage_capacity(t: ClusterTopology, bw: BandwidthModel, alpha) -> BoundResult:
    """Capacity without an eavesdropper: sum_{i=1..k} min{(n-i) beta, alpha}."""
    beta = _require_symmetric(bw)
    acc = _Accumulator(_alpha(alpha))
    for i in range(1, t.k + 1):
        acc.add((t.n - i) * beta)
    return acc.result()


def unclustered_secrecy_upper(n: int, k: int, d: int, l: int, beta, alpha) -> BoundResult:
    """Classic node-eavesdropper bound sum_{i=l+1..k} min{(d-i+1) beta, alpha}.

    ``d`` is a free argument here, unlike everywhere else in the package.
    """
    if not 0 <= l <= k:
        raise InvalidL(f"need 0 <= l <= k, got l={l}, k={k}")
    beta = Fraction(beta)
    acc = _Accumulator(_alpha(alpha))
    for i in range(l + 1, k + 1):
        acc.add((d - i + 1) * beta)
    return acc.result()


def node_restricted_upper(
    t: ClusterTopology, bw: BandwidthModel, L_c: int, alpha
) -> BoundResult:
    beta = _require_symmetric(bw)
    if not 0 <= L_c <= t.L:
        raise InvalidLc(f"need 0 <= L_c <= L={t.L}, got {L_c}")
    acc = _Accumulator(_alpha(alpha))
    n, n_I, k = t.n, t.n_I, t.k
    if n_I * L_c < k:
        for _ in range(L_c):
            for i in range(1, n_I + 1):
                acc.add((n_I - i) * beta)
        for i in range(n_I * L_c + 1, k + 1):
            acc.add((n - i) * beta)
    else:
        for _ in range(k // n_I):
            for i in range(1, n_I + 1):
                acc.add((n_I - i) * beta)
        for i in range(1, k % n_I + 1):
            acc.add((n_I - i) * beta)
    return acc.result()


def cluster_restricted_symmetric_upper(
    t: ClusterTopology, bw: BandwidthModel, l: int, alpha
) -> BoundResult:
    """Symmetric-repair cluster-restricted bound; it does not depend on L_c."""
    beta = _require_symmetric(bw)
    if not 0 <= l <= t.k:
        raise InvalidL(f"need 0 <= l <= k={t.k}, got {l}")
    acc = _Accumulator(_alpha(alpha))
    for i in range(l + 1, t.k + 1):
        acc.add((t.n - i) * beta)
    return acc.result()


class FCase(enum.Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"


@dataclass(frozen=True)
class SecureNodeCoefficients:
    f_of_i: int
    g_of_i: int
    x_of_i: Fraction
    y_star: Fraction
    l_prime: int
    case_tag: FCase


def _check_adversary(t: ClusterTopology, l: int, L_c: int) -> None:
    AdversarySpec(AdversaryModel.CLUSTER_RESTRICTED, L_c, l).validate(t)


def f_case(t: ClusterTopology, l: int, L_c: int) -> FCase:
    q, r = divmod(t.k, t.n_I)
    if L_c <= q:
        return FCase.F1
    if l <= r * (q + 1):
        return FCase.F2
    return FCase.F3


def row_counts(i: int, t: ClusterTopology, l: int, L_c: int) -> Tuple[int, int, FCase]:
    """Eavesdropped count ``f(i)`` and failed count ``g(i)`` in row ``i``.

    Row ``i`` collects the ``i``-th failure of every failed cluster. The F2
    remainder uses ``floor(k/n_I) + 1`` clusters per row, which is what makes
    ``sum_i f(i) == l``.
    """
    if not 1 <= i <= t.n_I:
        raise IndexOutOfRange(f"row index i={i} outside 1..{t.n_I}")
    _check_adversary(t, l, L_c)
    q, r = divmod(t.k, t.n_I)
    g = q + 1 if i <= r else q
    case = f_case(t, l, L_c)
    if l == 0:
        return 0, g, case
    if case is FCase.F1:
        full_rows = l // L_c
        if i <= full_rows:
            f = L_c
        elif i == full_rows + 1:
            f = l - L_c * full_rows
        else:
            f = 0
    elif case is FCase.F2:
        full_rows = l // (q + 1)
        if i <= full_rows:
            f = g
        elif i == full_rows + 1:
            f = l - (q + 1) * full_rows
        else:
            f = 0
    else:
        l_prime = l - r * (q + 1)
        full_rows = l_prime // q + r
        if i <= full_rows:
            f = g
        elif i == full_rows + 1:
            f = l_prime - q * (l_prime // q)
        else:
            f = 0
    return f, g, case


def fg_table(t: ClusterTopology, l: int, L_c: int) -> List[Tuple[int, int]]:
    """``[(f(1), g(1)), ..., (f(n_I), g(n_I))]``."""
    return [row_counts(i, t, l, L_c)[:2] for i in range(1, t.n_I + 1)]


def l_prime(t: ClusterTopology, l: int) -> int:
    q, r = divmod(t.k, t.n_I)
    return l - r * (q + 1)


def secure_node_shares(
    i: int, j: int, t: ClusterTopology, l: int, table: Sequence[Tuple[int, int]]
) -> Tuple[Fraction, Fraction]:
    """Intra share ``x(i)`` and cross share ``y*(i, j)`` of a secure node.

    Degenerate shapes: with one node per cluster ``x`` is 0 (no intra
    helpers), and with a single cluster ``y*`` is 0 (no cross helpers).
    """
    n, n_I = t.n, t.n_I
    if not 1 <= i <= n_I:
        raise IndexOutOfRange(f"row index i={i} outside 1..{n_I}")
    f_i, g_i = table[i - 1]
    if not f_i < j <= g_i:
        raise IndexOutOfRange(f"column j={j} outside {f_i + 1}..{g_i}")
    x = Fraction(n_I - i, n_I - 1) if n_I > 1 else Fraction(0)
    if n == n_I:
        return x, Fraction(0)
    prefix = sum(g - f for f, g in table[: i - 1])
    y = 1 - Fraction((l - i) + (prefix + j - f_i), n - n_I)
    return x, y


def secure_node_coefficients(
    t: ClusterTopology, l: int, L_c: int
) -> List[SecureNodeCoefficients]:
    """Every (i, j) coefficient set contributing to the asymmetric bound."""
    table = fg_table(t, l, L_c)
    case = f_case(t, l, L_c)
    lp = l_prime(t, l)
    out = []
    for i in range(1, t.n_I + 1):
        f_i, g_i = table[i - 1]
        for j in range(f_i + 1, g_i + 1):
            x, y = secure_node_shares(i, j, t, l, table)
            out.append(SecureNodeCoefficients(f_i, g_i, x, y, lp, case))
    return out


def cluster_restricted_asymmetric_upper(
    t: ClusterTopology, bw: BandwidthModel, l: int, L_c: int, alpha
) -> BoundResult:
    _check_adversary(t, l, L_c)
    acc = _Accumulator(_alpha(alpha))
    table = fg_table(t, l, L_c)
    for i in range(1, t.n_I + 1):
        f_i, g_i = table[i - 1]
        for j in range(f_i + 1, g_i + 1):
            x, y = secure_node_shares(i, j, t, l, table)
            acc.add(x * bw.gamma_I + y * bw.gamma_c)
    return acc.result()


def secrecy_upper(
    t: ClusterTopology, bw: BandwidthModel, adv: AdversarySpec, alpha
) -> BoundResult:
    """Dispatch to the bound matching the adversary and repair model."""
    adv.validate(t)
    if adv.model is AdversaryModel.NODE_RESTRICTED:
        if not bw.symmetric:
            raise InvalidAdversary("no closed-form node-restricted bound for asymmetric repair")
        return node_restricted_upper(t, bw, adv.L_c, alpha)
    if bw.symmetric:
        return cluster_restricted_symmetric_upper(t, bw, adv.l, alpha)
    return cluster_restricted_asymmetric_upper(t, bw, adv.l, adv.L_c, alpha)
