"""Uniform-label environments, bottleneck thresholds and crossing curves.

Labels are drawn from a counter-based generator: the label of edge e in
sample i under seed s is the e-th draw of the Philox stream with key s and
counter block (0, i, 0, 0).  Labels therefore depend only on
(seed, sample_index, edge_id), so any worker layout reproduces the same
environments, and all 53 bits of a double's mantissa are used, making ties
a measure-zero event (broken by edge id via the stable sort).

The open set at parameter p is {e : label(e) < p}, strictly.  The
bottleneck threshold of an environment is the minimax edge label over
terminal-joining paths: crossing happens at p iff threshold < p.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

from . import _sweep
from .generators import CollapseResult, DiamondParams, collapse_pi, gen_diamond, gen_gasket
from .graph import CapabilityError, Multigraph, TerminalSpec

MAX_SEED = 2**64


def _validate_seed(seed):
    seed = int(seed)
    if not (0 <= seed < MAX_SEED):
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


def derive_seed(seed, *tags):
    """Deterministic child seed for an auxiliary stream (e.g. per level)."""
    ss = SeedSequence((_validate_seed(seed),) + tuple(int(t) for t in tags))
    return int(ss.generate_state(1, np.uint64)[0])


def label_block(seed, start, count, edge_count):
    """Labels for samples start..start+count-1, shape (count, edge_count)."""
    seed = _validate_seed(seed)
    out = np.empty((count, edge_count), dtype=np.float64)
    for i in range(count):
        bg = Philox(key=seed, counter=[0, start + i, 0, 0])
        out[i] = Generator(bg).random(edge_count)
    return out


@dataclass(frozen=True)
class Environment:
    """One percolation sample: a deterministic label per edge id."""

    seed: int
    sample_index: int
    labels: np.ndarray = field(repr=False)

    @classmethod
    def generate(cls, seed, sample_index, edge_count):
        if sample_index < 0:
            raise ValueError("sample_index must be nonnegative")
        labels = label_block(seed, sample_index, 1, edge_count)[0]
        return cls(int(seed), int(sample_index), labels)

    def open_edges(self, p):
        return set(np.flatnonzero(self.labels < p).tolist())


@dataclass(frozen=True)
class ThresholdRecord:
    """Per-sample bottleneck value; flags is '' or 'disconnected'."""

    sample_index: int
    threshold: float
    flags: str = ""
    cluster_size_at: dict = None


@dataclass(frozen=True)
class ThetaCurve:
    """Empirical crossing frequencies over a shared environment set."""

    p_grid: np.ndarray
    values: np.ndarray
    sample_count: int
    stderr: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.values) < 0):
            raise AssertionError("theta curve must be nondecreasing on a shared environment set")


def _terminal_arrays(t: TerminalSpec):
    a = np.array(sorted(t.side_a), dtype=np.int64)
    b = np.array(sorted(t.side_b), dtype=np.int64)
    return a, b


def _sweep_block(g, labels, side_a, side_b):
    eu, ev = g.endpoint_arrays()
    orders = np.argsort(labels, axis=1, kind="stable")
    th = np.empty(labels.shape[0], dtype=np.float64)
    flags = np.empty(labels.shape[0], dtype=np.uint8)
    _sweep.sweep_thresholds(g.vertex_count, eu, ev, orders, labels, side_a, side_b, th, flags)
    return th, flags


def thresholds_for_labels(g: Multigraph, labels, t: TerminalSpec, descending=False):
    """Sweep thresholds for an explicit label matrix (samples x edges).

    Ascending order gives the minimax connection value; descending gives
    the maximin value (the label of the first connecting edge when edges
    arrive from the largest label down).
    """
    t.validate(g.vertex_count)
    labels = np.asarray(labels, dtype=np.float64)
    if labels.ndim != 2 or labels.shape[1] != g.edge_count:
        raise ValueError("label matrix shape must be (samples, edge_count)")
    side_a, side_b = _terminal_arrays(t)
    eu, ev = g.endpoint_arrays()
    orders = np.argsort(-labels if descending else labels, axis=1, kind="stable")
    th = np.empty(labels.shape[0], dtype=np.float64)
    flags = np.empty(labels.shape[0], dtype=np.uint8)
    _sweep.sweep_thresholds(g.vertex_count, eu, ev, orders, labels, side_a, side_b, th, flags)
    return th, flags


def bottleneck_threshold(g: Multigraph, env: Environment, t: TerminalSpec) -> float:
    """Label of the edge whose insertion first joins the terminal sides.

    Returns 1.0 when the sides never connect even with every edge open
    (the 'disconnected' case of threshold_sweep).
    """
    t.validate(g.vertex_count)
    if len(env.labels) != g.edge_count:
        raise ValueError("environment does not match the graph's edge count")
    side_a, side_b = _terminal_arrays(t)
    th, _ = _sweep_block(g, env.labels.reshape(1, -1), side_a, side_b)
    return float(th[0])


def threshold_sweep(g: Multigraph, t: TerminalSpec, seed, samples, workers=1):
    """Bottleneck thresholds for samples 0..samples-1; returns (values, flags)."""
    t.validate(g.vertex_count)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    side_a, side_b = _terminal_arrays(t)
    thresholds = np.empty(samples, dtype=np.float64)
    flags = np.empty(samples, dtype=np.uint8)
    chunk = max(1, min(samples, 4_194_304 // max(1, g.edge_count)))
    spans = [(lo, min(lo + chunk, samples)) for lo in range(0, samples, chunk)]

    def run(span):
        lo, hi = span
        labels = label_block(seed, lo, hi - lo, g.edge_count)
        th, fl = _sweep_block(g, labels, side_a, side_b)
        thresholds[lo:hi] = th
        flags[lo:hi] = fl

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, spans))
    else:
        for span in spans:
            run(span)
    return thresholds, flags


def threshold_records(g, t, seed, samples, workers=1):
    thresholds, flags = threshold_sweep(g, t, seed, samples, workers)
    return [
        ThresholdRecord(i, float(thresholds[i]), "disconnected" if flags[i] else "")
        for i in range(samples)
    ]


def empirical_theta(thresholds, p_grid):
    """Fraction of thresholds strictly below each grid point."""
    srt = np.sort(thresholds)
    counts = np.searchsorted(srt, p_grid, side="left")
    return counts / len(thresholds)


def theta_curve(g: Multigraph, t: TerminalSpec, seed, samples, p_grid, workers=1) -> ThetaCurve:
    """Monte Carlo crossing curve on a shared environment set."""
    p_grid = np.asarray(p_grid, dtype=np.float64)
    if p_grid.size == 0:
        raise ValueError("p grid must be nonempty")
    if np.any(p_grid < 0) or np.any(p_grid > 1) or np.any(np.diff(p_grid) < 0):
        raise ValueError("p grid must be sorted within [0, 1]")
    thresholds, _ = threshold_sweep(g, t, seed, samples, workers)
    values = empirical_theta(thresholds, p_grid)
    stderr = np.sqrt(values * (1.0 - values) / samples)
    return ThetaCurve(p_grid, values, samples, stderr)


@dataclass(frozen=True)
class LevelMedian:
    level: int
    median: float
    median_exact: float
    samples: int


def pc_estimate_diamond(m, n, max_level, samples, seed, workers=1):
    """Per-level sample medians of the bottleneck threshold, with the exact
    reference median (the p where the composed crossing polynomial is 1/2)."""
    from .diamond import exact_median

    if (m * n) ** max_level > 10_000_000:
        raise CapabilityError("diamond level guard exceeded")
    rows = []
    for level in range(max_level + 1):
        g, t = gen_diamond(DiamondParams(m, n, level))
        level_seed = derive_seed(seed, level)
        thresholds, _ = threshold_sweep(g, t, level_seed, samples, workers)
        rows.append(
            LevelMedian(level, float(np.median(thresholds)), exact_median(m, n, level), samples)
        )
    return rows


def origin_cluster_size(g: Multigraph, env: Environment, p, origin) -> int:
    """Size of the open component containing `origin` at parameter p."""
    if not (0 <= origin < g.vertex_count):
        raise ValueError("origin out of range")
    if len(env.labels) != g.edge_count:
        raise ValueError("environment does not match the graph's edge count")
    eu, ev = g.endpoint_arrays()
    out = np.empty(1, dtype=np.int64)
    _sweep.sweep_cluster_sizes(
        g.vertex_count, eu, ev, env.labels.reshape(1, -1), float(p), int(origin), out
    )
    return int(out[0])


def cluster_size_sweep(g: Multigraph, seed, samples, p, origin):
    """Open cluster sizes of `origin` across samples at one parameter."""
    if not (0 <= origin < g.vertex_count):
        raise ValueError("origin out of range")
    eu, ev = g.endpoint_arrays()
    sizes = np.empty(samples, dtype=np.int64)
    chunk = max(1, min(samples, 4_194_304 // max(1, g.edge_count)))
    for lo in range(0, samples, chunk):
        hi = min(lo + chunk, samples)
        labels = label_block(seed, lo, hi - lo, g.edge_count)
        out = np.empty(hi - lo, dtype=np.int64)
        _sweep.sweep_cluster_sizes(g.vertex_count, eu, ev, labels, float(p), int(origin), out)
        sizes[lo:hi] = out
    return sizes


@dataclass(frozen=True)
class CouplingReport:
    """Quotient-coupling experiment on the gasket at one level.

    theta_s_tilde and theta_t_pushed track the identified gasket and the
    simple quotient under min-of-pair labels (they agree exactly by
    construction); theta_t_2p is the simple quotient under uniformized
    pair labels evaluated at 2p.  Pathwise checks count violations of
    threshold(s_tilde) <= threshold(gasket) and of the 2p domination.
    """

    level: int
    p_grid: np.ndarray
    theta_s_tilde: np.ndarray
    theta_t_pushed: np.ndarray
    theta_t_2p: np.ndarray
    stderr: np.ndarray
    samples: int
    quotient_violations: int
    domination_violations: int
    pushed_mismatches: int
    single_edges: int
    doubled_edges: int


COUPLING_MAX_LEVEL = 5


def coupling_experiment(level, p_grid, samples, seed, workers=1) -> CouplingReport:
    """Push gasket environments through the midpoint collapse and compare
    crossing curves of the gasket, its quotient, and the doubled-rate curve."""
    if not (1 <= level <= COUPLING_MAX_LEVEL):
        raise CapabilityError(f"coupling level must lie in [1, {COUPLING_MAX_LEVEL}]")
    p_grid = np.asarray(p_grid, dtype=np.float64)
    if p_grid.size == 0:
        raise ValueError("p grid must be nonempty")
    if samples < 1:
        raise ValueError("samples must be >= 1")

    gasket = gen_gasket(level)
    col: CollapseResult = collapse_pi(gasket)
    corners = TerminalSpec(frozenset({0}), frozenset({1}))
    if col.vertex_class[0] != 0 or col.vertex_class[1] != 1:
        raise AssertionError("corner classes moved under the collapse")

    pair_sizes = np.array([len(p) for p in col.edge_pairs])
    singles = int(np.sum(pair_sizes == 1))
    doubles = int(np.sum(pair_sizes == 2))

    first = np.array([pair[0] for pair in col.edge_pairs], dtype=np.int64)
    second = np.array([pair[-1] for pair in col.edge_pairs], dtype=np.int64)
    is_double = pair_sizes == 2

    s_graph = gasket.graph
    st_graph = col.s_tilde
    t_graph = col.tri.graph
    sa, sb = _terminal_arrays(corners)
    eu_s, ev_s = s_graph.endpoint_arrays()

    th_s = np.empty(samples)
    th_st = np.empty(samples)
    th_tp = np.empty(samples)
    th_t2 = np.empty(samples)

    chunk = max(1, min(samples, 2_097_152 // max(1, s_graph.edge_count)))
    spans = [(lo, min(lo + chunk, samples)) for lo in range(0, samples, chunk)]

    def run(span):
        lo, hi = span
        labels = label_block(seed, lo, hi - lo, s_graph.edge_count)
        th_s[lo:hi] = _sweep_block(s_graph, labels, sa, sb)[0]
        th_st[lo:hi] = _sweep_block(st_graph, labels, sa, sb)[0]
        pushed = np.minimum(labels[:, first], labels[:, second])
        th_tp[lo:hi] = _sweep_block(t_graph, pushed, sa, sb)[0]
        # min of a doubled pair has cdf p(2-p); mapping through it yields
        # honest uniforms that the doubled-rate curve can be read from
        uniformized = np.where(is_double, pushed * (2.0 - pushed), pushed)
        th_t2[lo:hi] = _sweep_block(t_graph, uniformized, sa, sb)[0]

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, spans))
    else:
        for span in spans:
            run(span)

    theta_st = empirical_theta(th_st, p_grid)
    theta_tp = empirical_theta(th_tp, p_grid)
    theta_t2 = empirical_theta(th_t2, np.minimum(2.0 * p_grid, 1.0))
    stderr = np.sqrt(theta_st * (1.0 - theta_st) / samples)

    return CouplingReport(
        level=level,
        p_grid=p_grid,
        theta_s_tilde=theta_st,
        theta_t_pushed=theta_tp,
        theta_t_2p=theta_t2,
        stderr=stderr,
        samples=samples,
        quotient_violations=int(np.sum(th_st > th_s)),
        domination_violations=int(np.sum(th_t2 > 2.0 * th_st + 1e-15)),
        pushed_mismatches=int(np.sum(th_tp != th_st)),
        single_edges=singles,
        doubled_edges=doubles,
    )
