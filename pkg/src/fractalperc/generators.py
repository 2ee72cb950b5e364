"""Deterministic generators for the four graph families.

Families
--------
* diamond          -- level-l hierarchical graph: every edge of the previous
                      level is replaced by m parallel paths of n edges.
* tri              -- iterated barycentric subdivision of a unit equilateral
                      triangle, with planar coordinates and oriented faces.
* gasket           -- triangle-cell complex in which every cell owns three
                      private edges, so interior "spoke" edges come in
                      parallel pairs and vertex degree grows with the level.
* gasket-quotient  -- the gasket after identifying the paired midpoints of
                      every parallel edge pair (collapse_pi), which
                      reproduces the subdivided triangle with doubled
                      interior edges.

Vertex ids are dense and assigned in a documented deterministic order
(per face: edge midpoints first, deduplicated by parent edge, then the
barycenter), so edge ids and percolation environments are reproducible.

Sub-triangle labelling: the children of every face are indexed 0..5
walking around the face boundary starting at the child that contains the
face's first corner and the midpoint of its first edge.  Labels here are
0-based throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .graph import CapabilityError, Multigraph, TerminalSpec, quotient

SIZE_GUARD = 10_000_000
EMBED_MAX_LEVEL = 7


@dataclass(frozen=True)
class DiamondParams:
    """m branches, n subdivisions, recursion level."""

    m: int
    n: int
    level: int

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise ValueError("diamond parameters require m, n >= 2")
        if self.level < 0:
            raise ValueError("level must be nonnegative")

    def edge_count(self):
        return (self.m * self.n) ** self.level


@dataclass(frozen=True)
class Triangulation:
    """A triangulated disc: multigraph plus oriented faces and coordinates."""

    graph: Multigraph
    faces: tuple = field(repr=False)
    coords: tuple = field(default=None, repr=False)
    boundary_edges: frozenset = field(default_factory=frozenset, repr=False)
    level: int = 0

    def __post_init__(self):
        object.__setattr__(self, "faces", tuple(tuple(f) for f in self.faces))
        if self.coords is not None:
            object.__setattr__(
                self, "coords", tuple((float(x), float(y)) for x, y in self.coords)
            )
        object.__setattr__(self, "boundary_edges", frozenset(self.boundary_edges))

    def edge_id_by_pair(self):
        """{frozenset({u,v}): edge_id}; valid because the graph is simple."""
        index = {}
        for eid, (u, v) in enumerate(self.graph.edges):
            key = (u, v) if u < v else (v, u)
            if key in index:
                raise ValueError("triangulation graph is not simple")
            index[key] = eid
        return index

    def edge_faces(self):
        """incident face ids per edge id (length 1 on the boundary, else 2)."""
        index = self.edge_id_by_pair()
        inc = [[] for _ in range(self.graph.edge_count)]
        for fid, (a, b, c) in enumerate(self.faces):
            for u, v in ((a, b), (b, c), (c, a)):
                key = (u, v) if u < v else (v, u)
                inc[index[key]].append(fid)
        return [tuple(x) for x in inc]

    def face_areas(self):
        if self.coords is None:
            raise ValueError("triangulation has no coordinates")
        out = []
        for a, b, c in self.faces:
            (xa, ya), (xb, yb), (xc, yc) = self.coords[a], self.coords[b], self.coords[c]
            out.append(abs((xb - xa) * (yc - ya) - (xc - xa) * (yb - ya)) / 2.0)
        return out

    def edge_lengths(self):
        if self.coords is None:
            raise ValueError("triangulation has no coordinates")
        out = []
        for u, v in self.graph.edges:
            (xu, yu), (xv, yv) = self.coords[u], self.coords[v]
            out.append(math.hypot(xu - xv, yu - yv))
        return out

    def corner_ids(self):
        return (0, 1, 2)

    def boundary_side_vertices(self, i, j):
        """Vertices on the boundary path between corners i and j, inclusive.

        The path is the subdivided original side (i, j); it never passes the
        third corner.
        """
        if {i, j} - {0, 1, 2} or i == j:
            raise ValueError("sides are addressed by two distinct corners")
        nbr = {}
        for eid in self.boundary_edges:
            u, v = self.graph.edges[eid]
            nbr.setdefault(u, []).append(v)
            nbr.setdefault(v, []).append(u)
        third = ({0, 1, 2} - {i, j}).pop()
        # two directions leave corner i; keep the walk that reaches j
        # without passing the third corner
        for start in nbr[i]:
            path = [i, start]
            while path[-1] not in (i, j, third):
                step = [w for w in nbr[path[-1]] if w != path[-2]]
                path.append(step[0])
            if path[-1] == j:
                return path
        raise ValueError("boundary walk failed")


@dataclass(frozen=True)
class GasketComplex:
    """Gasket approximation: every triangle owns its three edges.

    midpoint_merges lists the vertex pairs that the collapse map
    identifies: the two midpoints created when the two members of a
    parallel edge pair were subdivided, accumulated over all generations.
    """

    graph: Multigraph
    triangles: tuple = field(repr=False)  # edge-id triples
    triangle_vertices: tuple = field(repr=False)  # matching vertex triples
    level: int = 0
    midpoint_merges: tuple = field(default=(), repr=False)

    def __post_init__(self):
        object.__setattr__(self, "triangles", tuple(tuple(t) for t in self.triangles))
        object.__setattr__(
            self, "triangle_vertices", tuple(tuple(t) for t in self.triangle_vertices)
        )
        object.__setattr__(self, "midpoint_merges", tuple(tuple(p) for p in self.midpoint_merges))
        seen = set()
        for tri in self.triangles:
            for e in tri:
                if e in seen:
                    raise ValueError("triangle edge sets must be pairwise disjoint")
                seen.add(e)


def gen_diamond(params: DiamondParams):
    """Build the level-l diamond; returns (graph, terminals A={0}, B={1})."""
    if params.edge_count() > SIZE_GUARD:
        raise CapabilityError(f"diamond would exceed {SIZE_GUARD} edges")
    edges = [(0, 1)]
    nv = 2
    for _ in range(params.level):
        new_edges = []
        for u, v in edges:
            for _branch in range(params.m):
                prev = u
                for step in range(params.n - 1):
                    new_edges.append((prev, nv))
                    prev = nv
                    nv += 1
                new_edges.append((prev, v))
        edges = new_edges
    g = Multigraph(nv, tuple(edges), {0: "A", 1: "B"})
    return g, TerminalSpec(frozenset({0}), frozenset({1}))


def diamond_vertex_count(m, n, level):
    """V_l = V_{l-1} + m(n-1)(mn)^{l-1}, V_0 = 2."""
    v = 2
    for l in range(1, level + 1):
        v += m * (n - 1) * (m * n) ** (l - 1)
    return v


@dataclass(frozen=True)
class SubdivisionInfo:
    """Bookkeeping for one barycentric subdivision step."""

    face_barycenter: tuple  # parent face id -> new barycenter vertex id
    edge_midpoint: tuple  # parent edge id -> new midpoint vertex id
    parent_edge_faces: tuple  # parent edge id -> incident parent face ids


def _triangle_zero():
    s3 = math.sqrt(3.0)
    graph = Multigraph(3, ((0, 1), (1, 2), (2, 0)), {0: "v0", 1: "v1", 2: "v2"})
    coords = ((0.0, 0.0), (0.5, s3 / 2.0), (1.0, 0.0))
    return Triangulation(graph, ((0, 1, 2),), coords, frozenset({0, 1, 2}), 0)


def subdivide(tri: Triangulation):
    """One barycentric subdivision; returns (refined, SubdivisionInfo)."""
    pair_index = tri.edge_id_by_pair()
    edge_faces = tri.edge_faces()
    nv = tri.graph.vertex_count
    coords = list(tri.coords) if tri.coords is not None else None

    midpoint = [-1] * tri.graph.edge_count
    barycenter = [-1] * len(tri.faces)
    for fid, (a, b, c) in enumerate(tri.faces):
        for u, v in ((a, b), (b, c), (c, a)):
            eid = pair_index[(u, v) if u < v else (v, u)]
            if midpoint[eid] == -1:
                midpoint[eid] = nv
                nv += 1
                if coords is not None:
                    (xu, yu), (xv, yv) = coords[u], coords[v]
                    coords.append(((xu + xv) / 2.0, (yu + yv) / 2.0))
        barycenter[fid] = nv
        nv += 1
        if coords is not None:
            xs = [coords[w][0] for w in (a, b, c)]
            ys = [coords[w][1] for w in (a, b, c)]
            coords.append((sum(xs) / 3.0, sum(ys) / 3.0))

    new_edges = []
    new_edge_index = {}
    new_faces = []
    new_boundary = set()

    def add_edge(u, v, boundary=False):
        key = (u, v) if u < v else (v, u)
        eid = new_edge_index.get(key)
        if eid is None:
            eid = len(new_edges)
            new_edge_index[key] = eid
            new_edges.append(key)
            if boundary:
                new_boundary.add(eid)
        return eid

    for fid, (a, b, c) in enumerate(tri.faces):
        y = barycenter[fid]
        walk = []
        for u, v in ((a, b), (b, c), (c, a)):
            eid = pair_index[(u, v) if u < v else (v, u)]
            walk.append((u, midpoint[eid], eid in tri.boundary_edges))
        pts = []
        for u, mid, on_boundary in walk:
            pts.append((u, on_boundary))
            pts.append((mid, on_boundary))
        for i in range(6):
            p, p_boundary = pts[i]
            q, _ = pts[(i + 1) % 6]
            add_edge(p, q, boundary=p_boundary)
            add_edge(p, y)
            add_edge(q, y)
            new_faces.append((p, q, y))

    labels = dict(tri.graph.labels or {})
    if tri.level == 0:
        # first subdivision introduces the classical side midpoints and center
        labels[midpoint[pair_index[(0, 1)]]] = "b01"
        labels[midpoint[pair_index[(1, 2)]]] = "b12"
        labels[midpoint[pair_index[(0, 2)]]] = "b02"
        labels[barycenter[0]] = "b"

    refined = Triangulation(
        Multigraph(nv, tuple(new_edges), labels),
        tuple(new_faces),
        tuple(coords) if coords is not None else None,
        frozenset(new_boundary),
        tri.level + 1,
    )
    info = SubdivisionInfo(tuple(barycenter), tuple(midpoint), tuple(edge_faces))
    return refined, info


def gen_barycentric(level: int) -> Triangulation:
    """level-fold barycentric subdivision of the unit equilateral triangle."""
    if level < 0:
        raise ValueError("level must be nonnegative")
    if 6**level > SIZE_GUARD:
        raise CapabilityError(f"triangulation would exceed {SIZE_GUARD} faces")
    tri = _triangle_zero()
    for _ in range(level):
        tri, _ = subdivide(tri)
    return tri


def triangulation_counts(level):
    """(V, E, F) from the subdivision recurrences."""
    v, e, f = 3, 3, 1
    for _ in range(level):
        v, e, f = v + e + f, 2 * e + 6 * f, 6 * f
    return v, e, f


def gen_gasket(level: int) -> GasketComplex:
    """Gasket approximation with private per-triangle edges.

    Each subdivision step replaces a triangle cell (a, b, c) with six
    children around a fresh barycenter.  The six spokes of a cell are
    created twice (once per adjacent child), which is where the parallel
    edge pairs come from.  Midpoints of the two members of a doubled pair
    of the *identified* previous level are recorded in midpoint_merges; the
    pairing of edges is tracked alongside so the doubling structure of the
    identified graph stays known at every generation.
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    if 6**level > SIZE_GUARD:
        raise CapabilityError(f"gasket would exceed {SIZE_GUARD} triangles")

    edges = [(0, 1), (1, 2), (2, 0)]
    nv = 3
    triangles = [(0, 1, 2)]
    tri_vertices = [(0, 1, 2)]
    partner = {}  # edge id -> paired edge id in the identified current level
    merges = []
    # union-find over vertices merged so far, used to orient partner pairs
    parent = list(range(3))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for _ in range(level):
        new_edges = []
        new_triangles = []
        new_tri_vertices = []
        new_partner = {}
        midpoint = {}  # old edge id -> midpoint vertex id
        halves = {}  # old edge id -> ((outer vertex, half edge id) x 2)

        for (e_ab, e_bc, e_ca), (a, b, c) in zip(triangles, tri_vertices):
            mids = {}
            for eid in (e_ab, e_bc, e_ca):
                mids[eid] = nv
                midpoint[eid] = nv
                parent.append(nv)
                nv += 1
            y = nv
            parent.append(nv)
            nv += 1

            walk = [a, mids[e_ab], b, mids[e_bc], c, mids[e_ca]]
            spoke_first = {}
            boundary_half = {}
            for j in range(6):
                p, q = walk[j], walk[(j + 1) % 6]
                half_id = len(new_edges)
                new_edges.append((p, q))
                # remember which half of which old edge this is, keyed by
                # the endpoint inherited from the old level
                parent_eid = (e_ab, e_ab, e_bc, e_bc, e_ca, e_ca)[j]
                outer = p if j % 2 == 0 else q
                boundary_half.setdefault(parent_eid, []).append((outer, half_id))
                for x in (p, q):
                    sid = len(new_edges)
                    new_edges.append((x, y))
                    if x in spoke_first:  # second copy of the cell spoke
                        new_partner[spoke_first[x]] = sid
                        new_partner[sid] = spoke_first[x]
                    else:
                        spoke_first[x] = sid
                # edge triple follows the (ab, bc, ca) convention of the
                # vertex triple (p, q, y)
                new_triangles.append((half_id, half_id + 2, half_id + 1))
                new_tri_vertices.append((p, q, y))
            for eid, ends in boundary_half.items():
                halves[eid] = tuple(ends)

        # midpoints of the two members of each doubled pair get identified;
        # the matching half edges become the next generation's pairs
        for eid, mate in partner.items():
            if mate < eid:
                continue
            m1, m2 = midpoint[eid], midpoint[mate]
            merges.append((m1, m2))
            parent[find(m2)] = find(m1)
            cls1 = {find(v): h for v, h in halves[eid]}
            cls2 = {find(v): h for v, h in halves[mate]}
            if len(cls1) != 2 or set(cls1) != set(cls2):  # construction invariant
                raise AssertionError("partner halves do not align by vertex class")
            for root, h1 in cls1.items():
                h2 = cls2[root]
                new_partner[h1] = h2
                new_partner[h2] = h1

        edges = new_edges
        triangles = new_triangles
        tri_vertices = new_tri_vertices
        partner = new_partner

    labels = {0: "v0", 1: "v1", 2: "v2"}
    graph = Multigraph(nv, tuple(edges), labels)
    return GasketComplex(graph, tuple(triangles), tuple(tri_vertices), level, tuple(merges))


@dataclass(frozen=True)
class CollapseResult:
    """Output of the midpoint-identification quotient.

    s_tilde keeps every gasket edge (ids preserved) on the merged vertex
    set; tri is the simple graph with one edge per parallel class, carrying
    the image faces; edge_pairs[t_edge] lists the 1 or 2 gasket edge ids in
    the class; vertex_class maps gasket vertices to quotient vertices.
    """

    s_tilde: Multigraph
    tri: Triangulation
    edge_pairs: tuple
    vertex_class: tuple


def collapse_pi(s: GasketComplex) -> CollapseResult:
    """Identify paired midpoints; derive the simple quotient triangulation."""
    if s.level < 1:
        raise ValueError("collapse requires level >= 1 (no midpoints exist at level 0)")
    from .graph import DisjointSet

    ds = DisjointSet(s.graph.vertex_count)
    for a, b in s.midpoint_merges:
        ds.union(a, b)
    classes = ds.partition()
    s_tilde = quotient(s.graph, classes)

    groups = {}
    for eid, (u, v) in enumerate(s_tilde.edges):
        key = (u, v) if u < v else (v, u)
        groups.setdefault(key, []).append(eid)

    ordered = sorted(groups.items(), key=lambda kv: kv[1][0])
    simple_edges = []
    edge_pairs = []
    boundary = set()
    for key, members in ordered:
        if len(members) > 2:
            raise AssertionError("parallel class larger than 2 in identified gasket")
        t_eid = len(simple_edges)
        simple_edges.append(key)
        edge_pairs.append(tuple(members))
        if len(members) == 1:
            boundary.add(t_eid)

    class_of = [0] * s.graph.vertex_count
    for ci, members in enumerate(classes):
        for v in members:
            class_of[v] = ci
    faces = tuple(
        (class_of[a], class_of[b], class_of[c]) for a, b, c in s.triangle_vertices
    )
    tri = Triangulation(
        Multigraph(len(classes), tuple(simple_edges), s_tilde.labels),
        faces,
        None,
        frozenset(boundary),
        s.level,
    )
    return CollapseResult(s_tilde, tri, tuple(edge_pairs), tuple(class_of))


@dataclass(frozen=True)
class EmbeddingCertificate:
    """Witness that the (2,2) diamond at level k-1 is a subgraph of tri level k."""

    k: int
    diamond: Multigraph
    terminals: TerminalSpec
    vertex_map: tuple  # diamond vertex id -> host vertex id
    edge_map: tuple  # diamond edge id -> host edge id
    host_terminals: TerminalSpec


def embed_diamond_in_T(k: int, host: Triangulation = None):
    """Certificate for the copy of the level-(k-1) diamond rooted at corner v0.

    Starts from the single host edge (v0, center) at level 1 and, per
    subdivision, replaces each embedded edge by the two 2-paths through the
    barycenters of its two adjacent faces -- which is exactly the (2,2)
    diamond recursion, run in lockstep with gen_diamond's vertex order.
    Returns (certificate, host_triangulation).
    """
    if not (2 <= k <= EMBED_MAX_LEVEL):
        raise ValueError(f"embedding level must lie in [2, {EMBED_MAX_LEVEL}]")

    tri = gen_barycentric(1)
    center = next(v for v, lbl in tri.graph.labels.items() if lbl == "b")
    vmap = [0, center]  # diamond A -> v0, diamond B -> center of level 1
    emb_edges = [(0, center)]

    for _ in range(k - 1):
        pair_index = tri.edge_id_by_pair()
        edge_faces = tri.edge_faces()
        tri, info = subdivide(tri)
        new_emb = []
        for u, v in emb_edges:
            eid = pair_index[(u, v) if u < v else (v, u)]
            faces = edge_faces[eid]
            if len(faces) != 2:
                raise AssertionError("embedded edge is not interior")
            for fid in faces:  # branch order follows face id order
                w = info.face_barycenter[fid]
                vmap.append(w)
                new_emb.append((u, w))
                new_emb.append((w, v))
        emb_edges = new_emb

    diamond, terminals = gen_diamond(DiamondParams(2, 2, k - 1))
    if len(vmap) != diamond.vertex_count:
        raise AssertionError("lockstep vertex count mismatch")
    host_pairs = tri.edge_id_by_pair()
    edge_map = []
    for (du, dv), (hu, hv) in zip(diamond.edges, emb_edges):
        if (vmap[du], vmap[dv]) != (hu, hv):
            raise AssertionError("lockstep edge order mismatch")
        edge_map.append(host_pairs[(hu, hv) if hu < hv else (hv, hu)])

    cert = EmbeddingCertificate(
        k,
        diamond,
        terminals,
        tuple(vmap),
        tuple(edge_map),
        TerminalSpec(frozenset({0}), frozenset({vmap[1]})),
    )
    _check_certificate(cert, tri)
    return cert, tri


def _check_certificate(cert: EmbeddingCertificate, host: Triangulation):
    if len(set(cert.vertex_map)) != len(cert.vertex_map):
        raise AssertionError("vertex map is not injective")
    if len(set(cert.edge_map)) != len(cert.edge_map):
        raise AssertionError("edge map is not injective")
    for (du, dv), heid in zip(cert.diamond.edges, cert.edge_map):
        hu, hv = host.graph.edges[heid]
        if {cert.vertex_map[du], cert.vertex_map[dv]} != {hu, hv}:
            raise AssertionError("edge map does not respect endpoints")


def image_subgraph(cert: EmbeddingCertificate) -> Multigraph:
    """The embedded image as a standalone multigraph on dense ids."""
    verts = sorted(set(cert.vertex_map))
    dense = {v: i for i, v in enumerate(verts)}
    edges = tuple(
        (dense[cert.vertex_map[du]], dense[cert.vertex_map[dv]])
        for du, dv in cert.diamond.edges
    )
    return Multigraph(len(verts), edges)
