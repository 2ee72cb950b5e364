"""Union-find sweep kernels shared by the percolation routines.

The kernels release the GIL so sample chunks can run on a thread pool;
results land in caller-owned arrays indexed by sample, which keeps output
independent of the worker count.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@njit(cache=True, nogil=True)
def sweep_thresholds(nv, eu, ev, orders, labels, side_a, side_b, out_th, out_flags):
    """Per sample: insert edges in the given order, record the label of the
    edge whose insertion first connects side_a to side_b (1.0 if never)."""
    ns, ne = orders.shape
    va = nv
    vb = nv + 1
    parent = np.empty(nv + 2, np.int64)
    for s in range(ns):
        for i in range(nv + 2):
            parent[i] = i
        for i in range(side_a.size):
            ra = _find(parent, va)
            rb = _find(parent, side_a[i])
            if ra != rb:
                parent[rb] = ra
        for i in range(side_b.size):
            ra = _find(parent, vb)
            rb = _find(parent, side_b[i])
            if ra != rb:
                parent[rb] = ra
        th = 1.0
        hit = False
        for k in range(ne):
            e = orders[s, k]
            ru = _find(parent, eu[e])
            rv = _find(parent, ev[e])
            if ru != rv:
                parent[rv] = ru
                if _find(parent, va) == _find(parent, vb):
                    th = labels[s, e]
                    hit = True
                    break
        out_th[s] = th
        out_flags[s] = 0 if hit else 1


@njit(cache=True, nogil=True)
def sweep_cluster_sizes(nv, eu, ev, labels, p, origin, out):
    """Per sample: size of the open component of `origin` at parameter p."""
    ns, ne = labels.shape
    parent = np.empty(nv, np.int64)
    size = np.empty(nv, np.int64)
    for s in range(ns):
        for i in range(nv):
            parent[i] = i
            size[i] = 1
        for e in range(ne):
            if labels[s, e] < p:
                ru = _find(parent, eu[e])
                rv = _find(parent, ev[e])
                if ru != rv:
                    parent[rv] = ru
                    size[ru] += size[rv]
        out[s] = size[_find(parent, origin)]
