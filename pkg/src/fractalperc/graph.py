"""Multigraph storage, union-find connectivity and small-graph isomorphism.

Every graph in this package is a finite multigraph with dense integer
vertex ids and dense integer edge ids (the edge id is the position in the
edge list).  Parallel edges are allowed and preserved; self-loops are
rejected everywhere because no construction here produces one, so a
self-loop always signals a caller bug.

Multigraph values are immutable after construction and safe to share
between threads.  DisjointSet instances are single-owner scratch state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ISO_VERTEX_GUARD = 10_000


class CapabilityError(RuntimeError):
    """Raised when an input exceeds a documented size guard."""


@dataclass(frozen=True)
class TerminalSpec:
    """Two disjoint nonempty vertex sets whose connection defines a crossing."""

    side_a: frozenset
    side_b: frozenset

    def __post_init__(self):
        object.__setattr__(self, "side_a", frozenset(self.side_a))
        object.__setattr__(self, "side_b", frozenset(self.side_b))
        if not self.side_a or not self.side_b:
            raise ValueError("terminal sides must be nonempty")
        if self.side_a & self.side_b:
            raise ValueError("terminal sides must be disjoint")

    def validate(self, vertex_count):
        for v in self.side_a | self.side_b:
            if not (0 <= v < vertex_count):
                raise ValueError(f"terminal vertex {v} out of range")


@dataclass(frozen=True)
class Multigraph:
    """Immutable multigraph; edge id i is edges[i] = (u, v) with u != v."""

    vertex_count: int
    edges: tuple = field(repr=False)
    labels: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        for eid, (u, v) in enumerate(edges):
            if u == v:
                raise ValueError(f"edge {eid} is a self-loop ({u},{v})")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge {eid} endpoint out of range")
        if self.labels is not None:
            object.__setattr__(self, "labels", dict(self.labels))

    @property
    def edge_count(self):
        return len(self.edges)

    def endpoint_arrays(self):
        """(u, v) endpoint arrays (int64), suitable for the sweep kernels."""
        eu = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=len(self.edges))
        ev = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=len(self.edges))
        return eu, ev

    def degrees(self):
        deg = [0] * self.vertex_count
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def multi_adjacency(self):
        """adj[v] = {neighbour: edge multiplicity}."""
        adj = [dict() for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u][v] = adj[u].get(v, 0) + 1
            adj[v][u] = adj[v].get(u, 0) + 1
        return adj

    def validate_edge_ids(self, edge_ids):
        for e in edge_ids:
            if not (0 <= e < len(self.edges)):
                raise ValueError(f"edge id {e} out of range")


class DisjointSet:
    """Union-find over 0..n-1 with path compression and union by rank."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return ra

    def partition(self):
        """Classes as lists ordered by smallest member."""
        groups = {}
        for v in range(len(self.parent)):
            groups.setdefault(self.find(v), []).append(v)
        return [groups[r] for r in sorted(groups, key=lambda r: groups[r][0])]


def connected(g: Multigraph, open_edges, t: TerminalSpec) -> bool:
    """True iff some path of open edges joins side_a to side_b."""
    t.validate(g.vertex_count)
    open_edges = list(open_edges)
    g.validate_edge_ids(open_edges)
    ds = DisjointSet(g.vertex_count + 2)
    va, vb = g.vertex_count, g.vertex_count + 1
    for a in t.side_a:
        ds.union(va, a)
    for b in t.side_b:
        ds.union(vb, b)
    if ds.find(va) == ds.find(vb):  # guarded by disjointness above
        return True
    for e in open_edges:
        u, v = g.edges[e]
        ds.union(u, v)
        if ds.find(va) == ds.find(vb):
            return True
    return False


def components(g: Multigraph, open_edges=None):
    """Vertex partition into connected components under the open edge set."""
    ds = DisjointSet(g.vertex_count)
    edge_ids = range(len(g.edges)) if open_edges is None else open_edges
    for e in edge_ids:
        u, v = g.edges[e]
        ds.union(u, v)
    return ds.partition()


def quotient(g: Multigraph, classes) -> Multigraph:
    """Merge each vertex class to a single vertex, keeping every edge id.

    classes must partition 0..vertex_count-1.  The class at position i
    becomes vertex i of the result.  An edge whose endpoints fall in one
    class would become a self-loop and is rejected.
    """
    classes = [list(c) for c in classes]
    class_of = [-1] * g.vertex_count
    for ci, members in enumerate(classes):
        if not members:
            raise ValueError(f"class {ci} is empty")
        for v in members:
            if not (0 <= v < g.vertex_count):
                raise ValueError(f"class member {v} out of range")
            if class_of[v] != -1:
                raise ValueError(f"vertex {v} appears in more than one class")
            class_of[v] = ci
    missing = class_of.count(-1)
    if missing:
        raise ValueError(f"partition does not cover {missing} vertices")

    new_edges = []
    for eid, (u, v) in enumerate(g.edges):
        cu, cv = class_of[u], class_of[v]
        if cu == cv:
            raise ValueError(f"edge {eid} collapses to a self-loop under the partition")
        new_edges.append((cu, cv))

    new_labels = None
    if g.labels:
        new_labels = {}
        for ci, members in enumerate(classes):
            for v in members:
                if v in g.labels:
                    new_labels[ci] = g.labels[v]
                    break
    out = Multigraph(len(classes), tuple(new_edges), new_labels)
    assert out.edge_count == g.edge_count
    return out


def _refine_colors(adj, colors):
    """One round of neighbourhood color refinement; returns canonical ints."""
    table = {}
    new = [0] * len(colors)
    for v, nbrs in enumerate(adj):
        sig = (colors[v], tuple(sorted((colors[w], m) for w, m in nbrs.items())))
        if sig not in table:
            table[sig] = len(table)
        new[v] = table[sig]
    return new


def _stable_coloring(adj, n):
    colors = [sum(adj[v].values()) for v in range(n)]
    for _ in range(n):
        new = _refine_colors(adj, colors)
        if len(set(new)) == len(set(colors)) and new == colors:
            break
        colors = new
    return colors


def are_isomorphic(g1: Multigraph, g2: Multigraph) -> bool:
    """True iff some vertex bijection preserves edge multiplicities.

    Degree/color prefiltering plus multiplicity-aware backtracking; only
    meant for generator cross-checks (guarded at 10^4 vertices).
    """
    if max(g1.vertex_count, g2.vertex_count) > ISO_VERTEX_GUARD:
        raise CapabilityError("isomorphism check limited to 10^4 vertices")
    n = g1.vertex_count
    if n != g2.vertex_count or g1.edge_count != g2.edge_count:
        return False
    if n == 0:
        return True
    adj1, adj2 = g1.multi_adjacency(), g2.multi_adjacency()
    if sorted(map(sorted, (a.values() for a in adj1))) != sorted(
        map(sorted, (a.values() for a in adj2))
    ):
        return False

    # joint color refinement keeps the color names comparable between graphs
    joint = [dict(a) for a in adj1] + [
        {w + n: m for w, m in a.items()} for a in adj2
    ]
    colors = [sum(joint[v].values()) for v in range(2 * n)]
    for _ in range(2 * n):
        new = _refine_colors(joint, colors)
        if new == colors:
            break
        colors = new
    c1, c2 = colors[:n], colors[n:]
    if sorted(c1) != sorted(c2):
        return False

    by_color = {}
    for v, c in enumerate(c2):
        by_color.setdefault(c, []).append(v)

    # connectivity-guided static order: always extend next to a vertex with
    # as many already-placed neighbours as possible (ties: rarer color)
    placed = [False] * n
    order = []
    placed_nbrs = [0] * n
    anchor_of = {}
    for _ in range(n):
        v = min(
            (x for x in range(n) if not placed[x]),
            key=lambda x: (-placed_nbrs[x], len(by_color[c1[x]]), -sum(adj1[x].values()), x),
        )
        order.append(v)
        placed[v] = True
        anchor_of[v] = next((u for u in adj1[v] if placed[u] and u != v), -1)
        for u in adj1[v]:
            placed_nbrs[u] += 1

    mapping = [-1] * n
    pre_image = [-1] * n
    used = [False] * n

    def candidates(v):
        u0 = anchor_of[v]
        if u0 != -1:
            pool = (w for w in adj2[mapping[u0]] if c2[w] == c1[v])
        else:
            pool = iter(by_color[c1[v]])
        for w in pool:
            if used[w]:
                continue
            ok = True
            for u, m in adj1[v].items():
                mu = mapping[u]
                if mu != -1 and adj2[w].get(mu, 0) != m:
                    ok = False
                    break
            if ok:
                for u2, m2 in adj2[w].items():
                    if used[u2] and adj1[v].get(pre_image[u2], 0) != m2:
                        ok = False
                        break
            if ok:
                yield w

    # iterative backtracking (graphs can exceed the recursion limit)
    cand_stack = [None] * n
    depth = 0
    cand_stack[0] = candidates(order[0])
    while True:
        v = order[depth]
        if mapping[v] != -1:  # release the previous candidate at this depth
            used[mapping[v]] = False
            pre_image[mapping[v]] = -1
            mapping[v] = -1
        w = next(cand_stack[depth], None)
        if w is None:
            depth -= 1
            if depth < 0:
                return False
            continue
        mapping[v] = w
        pre_image[w] = v
        used[w] = True
        if depth == n - 1:
            return True
        depth += 1
        cand_stack[depth] = candidates(order[depth])


def graph_json_dict(
    g: Multigraph,
    family: str,
    level: int,
    terminals: TerminalSpec = None,
    coords=None,
    faces=None,
    extra=None,
):
    """Graph JSON schema shared by every generator (field names are fixed)."""
    doc = {
        "family": family,
        "level": int(level),
        "vertex_count": g.vertex_count,
        "labels": {str(k): v for k, v in sorted((g.labels or {}).items())},
        "edges": [[eid, u, v] for eid, (u, v) in enumerate(g.edges)],
        "terminals": {
            "side_a": sorted(terminals.side_a) if terminals else [],
            "side_b": sorted(terminals.side_b) if terminals else [],
        },
    }
    if coords is not None:
        doc["coords"] = [[float(x), float(y)] for x, y in coords]
    if faces is not None:
        doc["faces"] = [[int(a), int(b), int(c)] for a, b, c in faces]
    if extra:
        doc.update(extra)
    return doc


def multigraph_from_json_dict(doc):
    edges = [None] * len(doc["edges"])
    for eid, u, v in doc["edges"]:
        if edges[eid] is not None:
            raise ValueError(f"duplicate edge id {eid}")
        edges[eid] = (u, v)
    if any(e is None for e in edges):
        raise ValueError("edge ids are not dense")
    labels = {int(k): v for k, v in doc.get("labels", {}).items()} or None
    return Multigraph(doc["vertex_count"], tuple(edges), labels)
