"""Planar pre-dual of a triangulated disc and exact crossing complementarity.

The pre-dual places one vertex in each bounded face and one edge across
each interior primal edge; the outer face contributes nothing.  For the
complementarity check the outer face is split instead into two auxiliary
"arc" vertices at the two boundary arcs determined by a pair of corners,
extending the edge correspondence to every primal edge.  In that extended
dual, for any open edge set exactly one of the following holds: the
corners are joined by open primal edges, or the arc vertices are joined by
duals of closed primal edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .generators import Triangulation
from .graph import Multigraph, TerminalSpec, connected


@dataclass(frozen=True)
class DualMap:
    """Dual graph plus the primal-edge -> dual-edge correspondence."""

    primal: Triangulation
    dual: Multigraph
    edge_bijection: dict = field(repr=False)
    outer_arc_vertices: tuple = None


def pre_dual(t: Triangulation) -> DualMap:
    """Dual over bounded faces only; boundary primal edges have no image."""
    if not t.faces:
        raise ValueError("triangulation has no faces")
    dual_edges = []
    bijection = {}
    for eid, faces in enumerate(t.edge_faces()):
        if len(faces) == 2:
            bijection[eid] = len(dual_edges)
            dual_edges.append((faces[0], faces[1]))
    dual = Multigraph(len(t.faces), tuple(dual_edges))
    return DualMap(t, dual, bijection, None)


def dual_with_arcs(t: Triangulation, s, u) -> DualMap:
    """Dual with the outer face split at corners s and u into two arc vertices.

    Boundary edges on the subdivided original side (s, u) attach to the
    first arc vertex; the remaining boundary edges (the path through the
    third corner) attach to the second.  Every primal edge then has exactly
    one dual edge, with matching ids.
    """
    if not t.faces:
        raise ValueError("triangulation has no faces")
    corners = set(t.corner_ids())
    if s == u or s not in corners or u not in corners:
        raise ValueError("arc split requires two distinct corner vertices")

    direct_side = t.boundary_side_vertices(s, u)
    direct_pairs = {
        frozenset(p) for p in zip(direct_side, direct_side[1:])
    }
    nf = len(t.faces)
    arc_a, arc_b = nf, nf + 1

    dual_edges = []
    bijection = {}
    for eid, faces in enumerate(t.edge_faces()):
        if len(faces) == 2:
            dual_edges.append((faces[0], faces[1]))
        else:
            uu, vv = t.graph.edges[eid]
            arc = arc_a if frozenset((uu, vv)) in direct_pairs else arc_b
            dual_edges.append((faces[0], arc))
        bijection[eid] = eid
    dual = Multigraph(nf + 2, tuple(dual_edges))
    return DualMap(t, dual, bijection, (arc_a, arc_b))


def complementarity_check(t: Triangulation, s, u, open_edges) -> bool:
    """XOR of primal corner crossing (open edges) and dual arc crossing
    (duals of closed edges); planar duality makes this always true."""
    dm = dual_with_arcs(t, s, u)
    open_edges = set(open_edges)
    t.graph.validate_edge_ids(open_edges)
    primal = connected(t.graph, open_edges, TerminalSpec(frozenset({s}), frozenset({u})))
    closed_duals = {
        dm.edge_bijection[e] for e in range(t.graph.edge_count) if e not in open_edges
    }
    arc_a, arc_b = dm.outer_arc_vertices
    blocked = connected(
        dm.dual, closed_duals, TerminalSpec(frozenset({arc_a}), frozenset({arc_b}))
    )
    return primal != blocked


def arc_terminals(dm: DualMap) -> TerminalSpec:
    if dm.outer_arc_vertices is None:
        raise ValueError("dual map has no arc vertices")
    a, b = dm.outer_arc_vertices
    return TerminalSpec(frozenset({a}), frozenset({b}))


EXHAUSTIVE_EDGE_GUARD = 20


def exhaustive_complementarity(t: Triangulation, s, u) -> int:
    """Run the XOR check on every open edge subset; returns the subset count.

    Only feasible on tiny levels, hence the edge-count guard.
    """
    ne = t.graph.edge_count
    if ne > EXHAUSTIVE_EDGE_GUARD:
        from .graph import CapabilityError

        raise CapabilityError(f"exhaustive check limited to {EXHAUSTIVE_EDGE_GUARD} edges")
    dm = dual_with_arcs(t, s, u)
    st = TerminalSpec(frozenset({s}), frozenset({u}))
    at = arc_terminals(dm)
    for mask in range(1 << ne):
        open_edges = [e for e in range(ne) if mask >> e & 1]
        closed_duals = [dm.edge_bijection[e] for e in range(ne) if not mask >> e & 1]
        primal = connected(t.graph, open_edges, st)
        blocked = connected(dm.dual, closed_duals, at)
        if primal == blocked:
            raise AssertionError(f"complementarity failed for open set mask {mask}")
    return 1 << ne


def crossing_duality_thresholds(t: Triangulation, s, u, seed, samples):
    """Primal bottleneck p* and dual blocking threshold q* per environment.

    p* is the minimax label over open corner-to-corner paths; q* is the
    maximin label over closed dual arc-to-arc paths (edges inserted in
    decreasing label order).  Planar duality makes them the same edge
    label, so crossing at p (p* < p) and dual blocking at p (q* >= p) are
    complementary for every p.
    """
    from .percolation import thresholds_for_labels, label_block

    dm = dual_with_arcs(t, s, u)
    st = TerminalSpec(frozenset({s}), frozenset({u}))
    at = arc_terminals(dm)
    labels = label_block(seed, 0, samples, t.graph.edge_count)
    p_star, p_flags = thresholds_for_labels(t.graph, labels, st)
    # dual edge ids equal primal edge ids, so the same label matrix applies
    q_star, q_flags = thresholds_for_labels(dm.dual, labels, at, descending=True)
    if p_flags.any() or q_flags.any():
        raise AssertionError("crossing sweeps must connect when all edges are available")
    return p_star, q_star
