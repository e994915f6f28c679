"""Compare the compiled and pure-Python max-flow kernels on oracle workloads.

    python benchmarks/bench_maxflow.py [--n 8] [--repeat 3]

Graphs are the eavesdropped flow graphs the node-restricted oracle visits,
pre-scaled to integer capacities so only the kernel is timed.
"""

import argparse
import time

from clusterdss._kernels import max_flow_c, max_flow_py
from clusterdss.flowgraph import COLLECTOR, SOURCE, apply_eavesdropper, build_flow_graph, integer_capacities
from clusterdss.oracle import _candidates, SearchLimits
from clusterdss.topology import make_topology, node_restricted, symmetric_bandwidth


def workload(n, L, k, L_c, alpha):
    t = make_topology(n, L, k)
    bw = symmetric_bandwidth(t, t.d)
    adv = node_restricted(t, L_c)
    jobs = []
    for sched, placement in _candidates(t, adv, SearchLimits()):
        g = apply_eavesdropper(build_flow_graph(t, bw, sched, alpha), adv, placement)
        caps, _, _ = integer_capacities(g.edges)
        jobs.append((len(g.vertices), [e.tail for e in g.edges], [e.head for e in g.edges], caps))
    return jobs


def run(kernel, jobs):
    start = time.perf_counter()
    values = [kernel(nv, tails, heads, caps, SOURCE, COLLECTOR) for nv, tails, heads, caps in jobs]
    return time.perf_counter() - start, values


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jobs = []
    for L in [x for x in range(2, args.n) if args.n % x == 0]:
        jobs += workload(args.n, L, args.n - 1, 1, args.n - 1)
    print(f"{len(jobs)} graphs, n={args.n}")
    kernels = [("python", max_flow_py)]
    if max_flow_c is not None:
        kernels.append(("cython", max_flow_c))
    else:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    results = {}
    for name, kernel in kernels:
        best = min(run(kernel, jobs)[0] for _ in range(args.repeat))
        results[name] = run(kernel, jobs)[1]
        print(f"{name:>7}: {best * 1e3:9.2f} ms total, {best / len(jobs) * 1e6:8.1f} us/graph")
    if len(results) == 2:
        assert results["python"] == results["cython"], "kernels disagree"
        print("kernels agree on every graph")


if __name__ == "__main__":
    main()
