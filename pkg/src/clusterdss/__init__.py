"""Secrecy-capacity bounds for clustered distributed storage.

Closed-form bounds for node-restricted and cluster-restricted
eavesdroppers, exact min-cut evaluation of information flow graphs, an
exhaustive oracle for small systems, and an RSKR repetition code with
wiretap-II coset coding that meets the node-restricted bound.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .bounds import (
    BoundResult,
    cluster_restricted_asymmetric_upper,
    cluster_restricted_symmetric_upper,
    unclustered_secrecy_upper,
    node_restricted_upper,
    secrecy_upper,
    storage_capacity,
    row_counts,
    secure_node_shares,
)
from .flowgraph import (
    FlowGraph,
    RepairSchedule,
    apply_eavesdropper,
    build_flow_graph,
    build_worst_case_graph,
    min_cut,
)
from .oracle import OracleReport, SearchLimits, exhaustive_min_secure_flow, validate_bound_grid
from .topology import (
    AdversaryModel,
    AdversarySpec,
    BandwidthModel,
    ClusterTopology,
    asymmetric_bandwidth,
    cluster_restricted,
    make_topology,
    node_restricted,
    symmetric_bandwidth,
)

__version__ = "0.1.0"
