"""Coverage intervals along the route and the acyclic coverage graph.

The route is discretized at a fixed step; per-AP coverage becomes maximal
runs of covered grid points; intervals ordered by start form a DAG whose
edges are overlap windows wide enough for a make-before-break handoff.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .environment import AccessPoint, Obstacle, Route, pack_obstacles, rss_along

SOURCE = "S"
DEST = "D"


class ConfigurationError(Exception):
    """A required configuration entry is missing or inconsistent."""


@dataclass(frozen=True)
class CoverageInterval:
    """Maximal arclength run where one AP's deterministic RSS is above its
    sensitivity. A run of a single grid point is kept as a degenerate
    interval (start == end) so coverage stays complete."""

    ap_id: str
    start: float
    end: float
    mean_rss: float

    def __post_init__(self):
        if not 0.0 <= self.start <= self.end:
            raise ValueError(
                f"interval for {self.ap_id}: need 0 <= start <= end")


@dataclass(frozen=True)
class GraphNode:
    node_id: str
    ap_id: str
    start: float
    end: float
    mean_rss: float
    load: float | None = None
    residual_bw: float | None = None


@dataclass(frozen=True)
class CoverageGraph:
    """DAG of coverage intervals between source S and destination D."""

    nodes: tuple[GraphNode, ...]  # sorted by (start, ap_id)
    edges: tuple[tuple[str, str, tuple[float, float]], ...]
    route_length: float
    min_overlap: float

    def node(self, node_id: str) -> GraphNode:
        for n in self.nodes:
            if n.node_id == node_id:
                return n
        raise KeyError(node_id)

    def successors(self, node_id: str):
        return [(v, w) for u, v, w in self.edges if u == node_id]

    @property
    def annotated(self) -> bool:
        return all(n.load is not None for n in self.nodes)

    def topological_order(self) -> list[str]:
        """Node ids in interval-start order; raises if a cycle exists
        (it cannot, by construction)."""
        order = [SOURCE] + [n.node_id for n in self.nodes] + [DEST]
        index = {nid: i for i, nid in enumerate(order)}
        for u, v, _ in self.edges:
            if index[u] >= index[v]:
                raise ValueError(f"edge {u}->{v} violates topological order")
        return order


def route_grid(route: Route, step: float) -> np.ndarray:
    """Discretization arclengths: multiples of ``step`` plus the endpoint."""
    if step <= 0:
        raise ValueError("discretization step must be > 0")
    length = route.length_m
    n = int(np.floor(length / step + 1e-9))
    grid = np.arange(n + 1, dtype=np.float64) * step
    if grid[-1] < length - 1e-9:
        grid = np.append(grid, length)
    return grid


def coverage_intervals(route: Route, aps: list[AccessPoint],
                       obstacles: list[Obstacle] | None = None,
                       step: float = 1.0) -> list[CoverageInterval]:
    """Per-AP maximal covered runs of the discretized route.

    An AP can produce several disjoint intervals, e.g. when an obstacle
    shadows the middle of its footprint.
    """
    grid = route_grid(route, step)
    xs, ys = route.points_at(grid)
    packed = pack_obstacles(obstacles or [])
    intervals: list[CoverageInterval] = []
    for ap in sorted(aps, key=lambda a: a.id):
        rss = rss_along(ap, xs, ys, packed)
        mask = rss >= ap.sensitivity_dbm
        for lo, hi in _runs(mask):
            intervals.append(CoverageInterval(
                ap_id=ap.id,
                start=float(grid[lo]),
                end=float(grid[hi]),
                mean_rss=float(np.mean(rss[lo:hi + 1])),
            ))
    intervals.sort(key=lambda iv: (iv.start, iv.ap_id))
    return intervals


def _runs(mask: np.ndarray):
    """(first, last) index pairs of each maximal True run."""
    runs = []
    start = None
    for i, ok in enumerate(mask):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def build_graph(intervals: list[CoverageInterval], route_length: float,
                min_overlap: float = 5.0) -> CoverageGraph:
    """Build the interval DAG.

    Edge (u, v) exists iff v starts strictly after u, before u ends, and the
    overlap window is at least ``min_overlap`` long. S attaches to intervals
    containing arclength 0, D to intervals containing L.
    """
    ordered = sorted(intervals, key=lambda iv: (iv.start, iv.ap_id))
    per_ap_count: dict[str, int] = {}
    for iv in ordered:
        per_ap_count[iv.ap_id] = per_ap_count.get(iv.ap_id, 0) + 1
    seen: dict[str, int] = {}
    nodes = []
    for iv in ordered:
        k = seen.get(iv.ap_id, 0)
        seen[iv.ap_id] = k + 1
        node_id = iv.ap_id if per_ap_count[iv.ap_id] == 1 \
            else f"{iv.ap_id}#{k}"
        nodes.append(GraphNode(node_id=node_id, ap_id=iv.ap_id,
                               start=iv.start, end=iv.end,
                               mean_rss=iv.mean_rss))

    edges: list[tuple[str, str, tuple[float, float]]] = []
    for n in nodes:
        if n.start <= 0.0:
            edges.append((SOURCE, n.node_id, (0.0, 0.0)))
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if v.start <= u.start:
                continue
            if u.end <= v.start:
                continue
            w_start = v.start
            w_end = min(u.end, v.end)
            if w_end - w_start >= min_overlap:
                edges.append((u.node_id, v.node_id, (w_start, w_end)))
    for n in nodes:
        if n.end >= route_length:
            edges.append((n.node_id, DEST,
                          (route_length, route_length)))
    return CoverageGraph(nodes=tuple(nodes), edges=tuple(edges),
                         route_length=route_length, min_overlap=min_overlap)


def annotate(graph: CoverageGraph, load_snapshot) -> CoverageGraph:
    """Attach traffic annotations: load, residual bandwidth.

    ``load_snapshot`` maps ap_id to an object exposing ``load`` and
    ``capacity_bw_kbps`` (a netres NetworkState fits).
    """
    nodes = []
    for n in graph.nodes:
        if n.ap_id not in load_snapshot:
            raise ConfigurationError(
                f"no load entry for access point {n.ap_id}")
        state = load_snapshot[n.ap_id]
        load = float(state.load)
        if not 0.0 <= load <= 1.0:
            raise ConfigurationError(
                f"load for {n.ap_id} must be in [0, 1], got {load}")
        nodes.append(replace(
            n, load=load,
            residual_bw=state.capacity_bw_kbps * (1.0 - load)))
    return CoverageGraph(nodes=tuple(nodes), edges=graph.edges,
                         route_length=graph.route_length,
                         min_overlap=graph.min_overlap)


def dump_adjacency(graph: CoverageGraph) -> str:
    """Plain-text edge listing: `node_a node_b overlap_start overlap_end`."""
    lines = []
    for u, v, (a, b) in graph.edges:
        lines.append(f"{u} {v} {a:.3f} {b:.3f}")
    return "\n".join(lines) + ("\n" if lines else "")
