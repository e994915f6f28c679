"""Integer max-flow kernels.

``max_flow`` is the compiled Cython kernel when the extension was built and
the pure-Python one otherwise. Set ``CLUSTERDSS_PURE_PYTHON=1`` to force the
fallback. ``BACKEND`` names the active choice.
"""

import os

from ._maxflow_py import max_flow as max_flow_py

INT64_SAFE = 2**62

try:
    if os.environ.get("CLUSTERDSS_PURE_PYTHON"):
        raise ImportError("pure-Python kernel forced")
    from ._maxflow_c import max_flow as max_flow_c
except ImportError:
    max_flow_c = None


def max_flow(num_vertices, tails, heads, caps, source, sink):
    """Max-flow value with non-negative integer capacities.

    The compiled kernel works in int64; totals that could overflow are routed
    to the arbitrary-precision fallback.
    """
    if max_flow_c is not None and sum(caps) < INT64_SAFE:
        return max_flow_c(num_vertices, tails, heads, caps, source, sink)
    return max_flow_py(num_vertices, tails, heads, caps, source, sink)


BACKEND = "cython" if max_flow_c is not None else "python"
