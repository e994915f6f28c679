# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Dinic's algorithm on int64 capacities."""

from libc.stdlib cimport malloc, free


cdef long long _push(int u, long long limit, int sink, int* to, long long* cap,
                     int* start, int* arcs, int* level, int* it) noexcept nogil:
    cdef int a, v
    cdef long long pushed, room
    if u == sink:
        return limit
    while it[u] < start[u + 1]:
        a = arcs[it[u]]
        v = to[a]
        if cap[a] > 0 and level[v] == level[u] + 1:
            room = cap[a] if cap[a] < limit else limit
            pushed = _push(v, room, sink, to, cap, start, arcs, level, it)
            if pushed:
                cap[a] -= pushed
                cap[a ^ 1] += pushed
                return pushed
        it[u] += 1
    return 0


def max_flow(int num_vertices, tails, heads, caps, int source, int sink):
    if source == sink:
        raise ValueError("source and sink coincide")
    cdef int m = len(tails)
    cdef int nv = num_vertices
    cdef int* to = <int*> malloc(2 * m * sizeof(int) + 1)
    cdef long long* cap = <long long*> malloc(2 * m * sizeof(long long) + 1)
    cdef int* start = <int*> malloc((nv + 1) * sizeof(int))
    cdef int* fill = <int*> malloc((nv + 1) * sizeof(int))
    cdef int* arcs = <int*> malloc(2 * m * sizeof(int) + 1)
    cdef int* level = <int*> malloc(nv * sizeof(int))
    cdef int* it = <int*> malloc(nv * sizeof(int))
    cdef int* queue = <int*> malloc(nv * sizeof(int))
    cdef int e, u, v, a, head, tail_q
    cdef long long c, total = 0, pushed, big = 0
    try:
        for u in range(nv + 1):
            start[u] = 0
        for e in range(m):
            u = tails[e]
            v = heads[e]
            c = caps[e]
            if c < 0:
                raise ValueError("negative capacity")
            if u < 0 or u >= nv or v < 0 or v >= nv:
                raise IndexError("edge endpoint out of range")
            to[2 * e] = v
            cap[2 * e] = c
            to[2 * e + 1] = u
            cap[2 * e + 1] = 0
            start[u + 1] += 1
            start[v + 1] += 1
            big += c
        big += 1
        for u in range(nv):
            start[u + 1] += start[u]
            fill[u] = start[u]
        for e in range(m):
            u = to[2 * e + 1]
            v = to[2 * e]
            arcs[fill[u]] = 2 * e
            fill[u] += 1
            arcs[fill[v]] = 2 * e + 1
            fill[v] += 1
        with nogil:
            while True:
                for u in range(nv):
                    level[u] = -1
                level[source] = 0
                head = 0
                tail_q = 0
                queue[tail_q] = source
                tail_q += 1
                while head < tail_q:
                    u = queue[head]
                    head += 1
                    for a in range(start[u], start[u + 1]):
                        v = to[arcs[a]]
                        if cap[arcs[a]] > 0 and level[v] < 0:
                            level[v] = level[u] + 1
                            queue[tail_q] = v
                            tail_q += 1
                if level[sink] < 0:
                    break
                for u in range(nv):
                    it[u] = start[u]
                while True:
                    pushed = _push(source, big, sink, to, cap, start, arcs, level, it)
                    if pushed == 0:
                        break
                    total += pushed
        return total
    finally:
        free(to)
        free(cap)
        free(start)
        free(fill)
        free(arcs)
        free(level)
        free(it)
        free(queue)
