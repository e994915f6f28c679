"""Clustered DSS parameter sets, repair-bandwidth models and adversary specs.

All amounts of data are carried as :class:`fractions.Fraction`. The storage
size ``alpha`` may additionally be ``math.inf``, meaning the
bandwidth-limited regime where ``min{., alpha}`` always picks the first
argument.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    ClusterDSSError,
    InvalidAdversary,
    InvalidK,
    InvalidL,
    InvalidLc,
    NegativeBandwidth,
    NonDivisible,
    OrderViolation,
)

Amount = Union[Fraction, float]  # float only ever for math.inf
INF = math.inf


def as_amount(value) -> Amount:
    """Coerce ``value`` to an exact Fraction, keeping ``inf`` as-is.

    Strings are parsed exactly ("0.05" is 1/20, not the nearest double).
    """
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "+inf", "infinity"):
            return INF
        return Fraction(value.strip())
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        if math.isnan(value) or math.isinf(value):
            raise ValueError(f"not a data amount: {value!r}")
    return Fraction(value)


def is_inf(value) -> bool:
    return isinstance(value, float) and math.isinf(value)


@dataclass(frozen=True)
class ClusterTopology:
    """Static shape of a clustered DSS with ``d = n - 1`` helpers.

    Nodes are numbered ``0 .. n-1`` and node ``u`` lives in cluster
    ``u // n_I``.
    """

    n: int
    L: int
    k: int

    def __post_init__(self):
        for name in ("n", "L", "k"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise TypeError(f"{name} must be an int, got {value!r}")
        if self.n < 1 or self.L < 1:
            raise NonDivisible("n and L must be positive")
        if self.n % self.L:
            raise NonDivisible(f"L must divide n (n={self.n}, L={self.L})")
        if not 1 <= self.k < self.n:
            raise InvalidK(f"k must satisfy 1 <= k < n (k={self.k}, n={self.n})")

    @property
    def n_I(self) -> int:
        return self.n // self.L

    @property
    def d(self) -> int:
        return self.n - 1

    def cluster_of(self, node: int) -> int:
        if not 0 <= node < self.n:
            raise IndexError(f"node {node} outside 0..{self.n - 1}")
        return node // self.n_I

    def cluster_nodes(self, cluster: int) -> range:
        return range(cluster * self.n_I, (cluster + 1) * self.n_I)


def make_topology(n: int, L: int, k: int) -> ClusterTopology:
    return ClusterTopology(n, L, k)


class BandwidthKind(enum.Enum):
    SYMMETRIC = "symmetric"
    ASYMMETRIC = "asymmetric"


@dataclass(frozen=True)
class BandwidthModel:
    """Repair traffic parameters.

    For the symmetric model ``beta`` is canonical and ``beta_I == beta_c ==
    beta``; ``gamma`` is kept alongside so it is never recomputed from a
    rounded value.
    """

    kind: BandwidthKind
    gamma: Fraction
    beta_I: Fraction
    beta_c: Fraction
    gamma_I: Fraction
    gamma_c: Fraction

    @property
    def beta(self) -> Fraction:
        if self.kind is not BandwidthKind.SYMMETRIC:
            raise AttributeError("beta is only defined for the symmetric model")
        return self.beta_I

    @property
    def symmetric(self) -> bool:
        return self.kind is BandwidthKind.SYMMETRIC

    def edge_capacity(self, same_cluster: bool) -> Fraction:
        return self.beta_I if same_cluster else self.beta_c


def symmetric_bandwidth(t: ClusterTopology, gamma) -> BandwidthModel:
    gamma = Fraction(gamma)
    if gamma < 0:
        raise NegativeBandwidth(f"gamma must be >= 0, got {gamma}")
    beta = gamma / t.d
    return BandwidthModel(
        kind=BandwidthKind.SYMMETRIC,
        gamma=gamma,
        beta_I=beta,
        beta_c=beta,
        gamma_I=(t.n_I - 1) * beta,
        gamma_c=(t.n - t.n_I) * beta,
    )


def asymmetric_bandwidth(t: ClusterTopology, beta_I, beta_c) -> BandwidthModel:
    beta_I, beta_c = Fraction(beta_I), Fraction(beta_c)
    if beta_c < 0 or beta_I < 0:
        raise NegativeBandwidth("per-helper bandwidths must be >= 0")
    if beta_c > beta_I:
        raise OrderViolation(f"need beta_I >= beta_c, got {beta_I} < {beta_c}")
    gamma_I = (t.n_I - 1) * beta_I
    gamma_c = (t.n - t.n_I) * beta_c
    return BandwidthModel(
        kind=BandwidthKind.ASYMMETRIC,
        gamma=gamma_I + gamma_c,
        beta_I=beta_I,
        beta_c=beta_c,
        gamma_I=gamma_I,
        gamma_c=gamma_c,
    )


def asymmetric_from_totals(t: ClusterTopology, gamma_I, gamma_c) -> BandwidthModel:
    """Asymmetric model given the intra/cross totals instead of per-helper values."""
    gamma_I, gamma_c = Fraction(gamma_I), Fraction(gamma_c)
    if t.n_I == 1 and gamma_I:
        raise ClusterDSSError("gamma_I must be 0 when clusters hold one node")
    if t.L == 1 and gamma_c:
        raise ClusterDSSError("gamma_c must be 0 with a single cluster")
    beta_I = gamma_I / (t.n_I - 1) if t.n_I > 1 else Fraction(0)
    beta_c = gamma_c / (t.n - t.n_I) if t.L > 1 else Fraction(0)
    if t.n_I == 1:
        # no intra-cluster helpers exist; keep the ordering invariant
        beta_I = beta_c
    return asymmetric_bandwidth(t, beta_I, beta_c)


class AdversaryModel(enum.Enum):
    NODE_RESTRICTED = "node-restricted"
    CLUSTER_RESTRICTED = "cluster-restricted"


@dataclass(frozen=True)
class AdversarySpec:
    model: AdversaryModel
    L_c: int
    l: Optional[int] = None

    def validate(self, t: ClusterTopology) -> "AdversarySpec":
        if not 0 <= self.L_c <= t.L:
            raise InvalidLc(f"L_c must satisfy 0 <= L_c <= L={t.L}, got {self.L_c}")
        if self.model is AdversaryModel.CLUSTER_RESTRICTED:
            if self.l is None:
                raise InvalidAdversary("cluster-restricted adversary needs l")
            if not 0 <= self.l <= t.k:
                raise InvalidL(f"l must satisfy 0 <= l <= k={t.k}, got {self.l}")
            if self.l > t.n_I * self.L_c:
                raise InvalidAdversary(
                    f"l={self.l} nodes do not fit in L_c={self.L_c} clusters of {t.n_I}"
                )
        return self


def node_restricted(t: ClusterTopology, L_c: int) -> AdversarySpec:
    return AdversarySpec(AdversaryModel.NODE_RESTRICTED, L_c).validate(t)


def cluster_restricted(t: ClusterTopology, l: int, L_c: int) -> AdversarySpec:
    return AdversarySpec(AdversaryModel.CLUSTER_RESTRICTED, L_c, l).validate(t)
