"""Dinic's algorithm on integer capacities, pure Python."""

from collections import deque


def _residual(num_vertices, tails, heads, caps):
    # arc 2e is the forward copy of edge e, arc 2e+1 its reverse
    m = len(tails)
    to = [0] * (2 * m)
    cap = [0] * (2 * m)
    adj = [[] for _ in range(num_vertices)]
    for e in range(m):
        u, v, c = tails[e], heads[e], caps[e]
        if c < 0:
            raise ValueError("negative capacity")
        to[2 * e], cap[2 * e] = v, c
        to[2 * e + 1], cap[2 * e + 1] = u, 0
        adj[u].append(2 * e)
        adj[v].append(2 * e + 1)
    return to, cap, adj


def max_flow(num_vertices, tails, heads, caps, source, sink):
    if source == sink:
        raise ValueError("source and sink coincide")
    to, cap, adj = _residual(num_vertices, tails, heads, caps)
    big = sum(caps) + 1
    total = 0
    while True:
        level = [-1] * num_vertices
        level[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for a in adj[u]:
                if cap[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[u] + 1
                    queue.append(to[a])
        if level[sink] < 0:
            return total
        it = [0] * num_vertices

        def push(u, limit):
            if u == sink:
                return limit
            arcs = adj[u]
            while it[u] < len(arcs):
                a = arcs[it[u]]
                v = to[a]
                if cap[a] > 0 and level[v] == level[u] + 1:
                    pushed = push(v, min(limit, cap[a]))
                    if pushed:
                        cap[a] -= pushed
                        cap[a ^ 1] += pushed
                        return pushed
                it[u] += 1
            return 0

        while True:
            pushed = push(source, big)
            if not pushed:
                break
            total += pushed
