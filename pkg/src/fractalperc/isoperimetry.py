"""Face regions of the subdivided triangle and the dual boundary bound.

A region is a set of faces of the level-n triangulation, equivalently a
set of vertices of the level-n pre-dual.  Its boundary count |dJ| is the
number of edges separating in-region from out-of-region: dual edges with
one endpoint in the region, plus outer-triangle edges owned by an
in-region face (those have no dual edge at finite level but bound the
polygon, which is how the perimeter argument counts them).

The verified inequality is |dJ| >= C * |J|**(1/2 + a) with
a = log_6(sqrt(3)/(2*sqrt(2))) (negative; the exponent is about 0.2263)
and C = (3 * 3**(1/4) / 8) * sqrt(pi).  Note 6**(1/2 + a) = 3/2 exactly,
so triangle-shaped regions sit on the bound's growth rate.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox

from .generators import Triangulation, gen_barycentric
from .graph import CapabilityError, Multigraph

BOUNDARY_ALPHA = math.log(math.sqrt(3.0) / (2.0 * math.sqrt(2.0)), 6)
BOUNDARY_EXPONENT = 0.5 + BOUNDARY_ALPHA
BOUNDARY_CONSTANT = (3.0 * 3.0**0.25 / 8.0) * math.sqrt(math.pi)
ISO_MAX_LEVEL = 5


@dataclass(frozen=True)
class FaceRegion:
    """Nonempty set of face indices of one subdivision level."""

    face_ids: frozenset
    level: int

    def __post_init__(self):
        object.__setattr__(self, "face_ids", frozenset(int(f) for f in self.face_ids))
        if not self.face_ids:
            raise ValueError("region must be nonempty")
        top = 6**self.level
        if any(not (0 <= f < top) for f in self.face_ids):
            raise ValueError("face index out of range for the level")


def _check_region(tri: Triangulation, region: FaceRegion):
    if region.level != tri.level:
        raise ValueError("region level does not match the triangulation")
    if len(tri.faces) != 6**tri.level:
        raise ValueError("triangulation face count is not 6^level")


def region_area(tri: Triangulation, region: FaceRegion) -> float:
    """Count-based area; cross-checked against the coordinate polygon sum."""
    _check_region(tri, region)
    count_based = (math.sqrt(3.0) / 4.0) * 6.0 ** (-region.level) * len(region.face_ids)
    if tri.coords is not None:
        areas = tri.face_areas()
        polygon = sum(areas[f] for f in region.face_ids)
        if abs(polygon - count_based) > 1e-10 * count_based:
            raise AssertionError("count-based and coordinate areas disagree")
    return count_based


def region_boundary_edge_ids(tri: Triangulation, region: FaceRegion, edge_faces=None):
    """Edges with exactly one incident face inside the region."""
    _check_region(tri, region)
    if edge_faces is None:
        edge_faces = tri.edge_faces()
    inside = region.face_ids
    out = []
    for eid, faces in enumerate(edge_faces):
        k = sum(1 for f in faces if f in inside)
        if k == 1:
            out.append(eid)
    return out


def boundary_edge_count(tri: Triangulation, region: FaceRegion, edge_faces=None) -> int:
    return len(region_boundary_edge_ids(tri, region, edge_faces))


def dual_boundary_counts(tri: Triangulation, region: FaceRegion, edge_faces=None):
    """(augmented, interior_only) boundary edge counts.

    `augmented` adds the outer-triangle edges of in-region faces to the
    dual-edge count, matching the perimeter accounting; `interior_only`
    counts only edges that have a dual edge.
    """
    _check_region(tri, region)
    if edge_faces is None:
        edge_faces = tri.edge_faces()
    inside = region.face_ids
    augmented = 0
    interior_only = 0
    for faces in edge_faces:
        k = sum(1 for f in faces if f in inside)
        if k == 1:
            augmented += 1
            if len(faces) == 2:
                interior_only += 1
    return augmented, interior_only


def region_perimeter(tri: Triangulation, region: FaceRegion, edge_faces=None) -> float:
    """Total length of the edges on the topological boundary of the region."""
    lengths = tri.edge_lengths()
    return sum(lengths[e] for e in region_boundary_edge_ids(tri, region, edge_faces))


def face_adjacency(tri: Triangulation):
    """Faces sharing an edge; this is also the pre-dual's adjacency."""
    adj = [[] for _ in range(len(tri.faces))]
    for faces in tri.edge_faces():
        if len(faces) == 2:
            a, b = faces
            adj[a].append(b)
            adj[b].append(a)
    return [sorted(set(x)) for x in adj]


def random_connected_region(adjacency, size, rng) -> frozenset:
    """Grow a connected face set by repeatedly annexing a uniform frontier face."""
    n = len(adjacency)
    if not (1 <= size <= n):
        raise ValueError("region size out of range")
    start = int(rng.integers(n))
    region = {start}
    frontier = list(adjacency[start])
    in_frontier = set(frontier)
    while len(region) < size:
        idx = int(rng.integers(len(frontier)))
        v = frontier.pop(idx)
        in_frontier.discard(v)
        if v in region:
            continue
        region.add(v)
        for w in adjacency[v]:
            if w not in region and w not in in_frontier:
                frontier.append(w)
                in_frontier.add(w)
    return frozenset(region)


def enumerate_connected_regions(adjacency, max_size):
    """Every connected face set of size <= max_size, each exactly once."""
    n = len(adjacency)

    def grow(region, ext, banned):
        yield frozenset(region)
        if len(region) == max_size:
            return
        for i, v in enumerate(ext):
            child_banned = banned | set(ext[:i])
            rest = ext[i + 1 :]
            rest_set = set(rest)
            new = [
                w
                for w in adjacency[v]
                if w > root and w not in region and w not in child_banned and w not in rest_set
            ]
            yield from grow(region | {v}, rest + sorted(new), child_banned)

    for root in range(n):
        ext0 = [w for w in adjacency[root] if w > root]
        yield from grow({root}, ext0, frozenset())


@dataclass(frozen=True)
class IsoperimetryReport:
    """Sampled-region check of the dual boundary lower bound at one level."""

    level: int
    exponent: float
    constant: float
    trials: int
    rows: tuple = field(repr=False)  # (level, size, boundary, bound, ratio)
    min_ratio: float = 0.0
    failures: int = 0


def bound_value(size) -> float:
    return BOUNDARY_CONSTANT * float(size) ** BOUNDARY_EXPONENT


def isoperimetric_check(level, trials, seed, tri: Triangulation = None) -> IsoperimetryReport:
    """Sample random connected regions and verify |dJ| >= C*|J|^(1/2+a)."""
    if not (0 <= level <= ISO_MAX_LEVEL):
        raise CapabilityError(f"isoperimetry level must lie in [0, {ISO_MAX_LEVEL}]")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if tri is None:
        tri = gen_barycentric(level)
    edge_faces = tri.edge_faces()
    adjacency = face_adjacency(tri)
    rng = Generator(Philox(key=int(seed)))
    nf = len(tri.faces)

    rows = []
    failures = 0
    min_ratio = math.inf
    for _ in range(trials):
        size = int(rng.integers(1, nf + 1))
        region = FaceRegion(random_connected_region(adjacency, size, rng), level)
        boundary, _ = dual_boundary_counts(tri, region, edge_faces)
        bound = bound_value(len(region.face_ids))
        ratio = boundary / bound
        min_ratio = min(min_ratio, ratio)
        if boundary < bound:
            failures += 1
        rows.append((level, len(region.face_ids), boundary, bound, ratio))
    report = IsoperimetryReport(
        level, BOUNDARY_EXPONENT, BOUNDARY_CONSTANT, trials, tuple(rows), min_ratio, failures
    )
    if failures:
        raise AssertionError(
            f"{failures} regions violated the boundary bound at level {level}"
        )
    return report


def exhaustive_check(level, max_size, tri: Triangulation = None):
    """Verify the bound over every connected region of size <= max_size."""
    if tri is None:
        tri = gen_barycentric(level)
    edge_faces = tri.edge_faces()
    adjacency = face_adjacency(tri)
    checked = 0
    min_ratio = math.inf
    for faces in enumerate_connected_regions(adjacency, max_size):
        region = FaceRegion(faces, level)
        boundary, _ = dual_boundary_counts(tri, region, edge_faces)
        bound = bound_value(len(faces))
        if boundary < bound:
            raise AssertionError(f"region {sorted(faces)} violates the boundary bound")
        min_ratio = min(min_ratio, boundary / bound)
        checked += 1
    return checked, min_ratio


def graph_ball_counts(g: Multigraph, r_max):
    """max_v |B(v, r)| for r = 1..r_max, by breadth-first search."""
    adj = [[] for _ in range(g.vertex_count)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    best = [0] * (r_max + 1)
    for v0 in range(g.vertex_count):
        dist = {v0: 0}
        q = deque([v0])
        counts = [1] + [0] * r_max
        while q:
            v = q.popleft()
            d = dist[v]
            if d == r_max:
                continue
            for w in adj[v]:
                if w not in dist:
                    dist[w] = d + 1
                    counts[d + 1] += 1
                    q.append(w)
        running = 0
        for r in range(r_max + 1):
            running += counts[r]
            if running > best[r]:
                best[r] = running
    return best


def fitted_growth_constant(g: Multigraph, r_max):
    """Smallest K with max_v |B(v, r)| <= K r^2 over r = 1..r_max."""
    best = graph_ball_counts(g, r_max)
    return max(best[r] / r**2 for r in range(1, r_max + 1)), best
