import os
import subprocess
import sys
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from clusterdss import _kernels
from clusterdss._kernels import max_flow, max_flow_c, max_flow_py


def cut_by_enumeration(nv, tails, heads, caps, s, t):
    inner = [v for v in range(nv) if v not in (s, t)]
    best = None
    for size in range(len(inner) + 1):
        for side in combinations(inner, size):
            S = {s, *side}
            val = sum(c for u, v, c in zip(tails, heads, caps) if u in S and v not in S)
            best = val if best is None else min(best, val)
    return best


@st.composite
def graphs(draw):
    nv = draw(st.integers(2, 7))
    m = draw(st.integers(0, 18))
    ends = st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1))
    edges = draw(st.lists(st.tuples(ends, st.integers(0, 40)), min_size=m, max_size=m))
    tails = [u for (u, _), _ in edges]
    heads = [v for (_, v), _ in edges]
    caps = [c for _, c in edges]
    return nv, tails, heads, caps


class TestPurePython:
    def test_two_paths(self):
        # s=0 -> 1 -> 3 and s -> 2 -> 3, bottlenecks 3 and 4
        assert max_flow_py(4, [0, 1, 0, 2], [1, 3, 2, 3], [5, 3, 4, 9], 0, 3) == 7

    def test_disconnected(self):
        assert max_flow_py(3, [0], [1], [5], 0, 2) == 0

    def test_antiparallel_edges(self):
        assert max_flow_py(3, [0, 1, 1, 2], [1, 0, 2, 1], [4, 4, 2, 2], 0, 2) == 2

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            max_flow_py(2, [0], [1], [1], 0, 0)
        with pytest.raises(ValueError):
            max_flow_py(2, [0], [1], [-1], 0, 1)

    def test_big_integers(self):
        big = 10**30
        assert max_flow_py(3, [0, 1], [1, 2], [big, big + 1], 0, 2) == big


@settings(max_examples=300, deadline=None)
@given(graphs())
def test_python_kernel_matches_cut_enumeration(g):
    nv, tails, heads, caps = g
    assert max_flow_py(nv, tails, heads, caps, 0, nv - 1) == cut_by_enumeration(
        nv, tails, heads, caps, 0, nv - 1
    )


@pytest.mark.skipif(max_flow_c is None, reason="compiled kernel not built")
class TestCompiled:
    @settings(max_examples=300, deadline=None)
    @given(graphs())
    def test_agrees_with_python(self, g):
        nv, tails, heads, caps = g
        assert max_flow_c(nv, tails, heads, caps, 0, nv - 1) == max_flow_py(
            nv, tails, heads, caps, 0, nv - 1
        )

    def test_dispatch_routes_large_totals_to_python(self):
        big = 2**62
        assert max_flow(3, [0, 1], [1, 2], [big, big], 0, 2) == big


def test_backend_name():
    assert _kernels.BACKEND in ("cython", "python")
    assert (_kernels.BACKEND == "cython") == (max_flow_c is not None)


def test_env_forces_fallback():
    env = dict(os.environ, CLUSTERDSS_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import clusterdss._kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
