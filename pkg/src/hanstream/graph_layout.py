"""Deterministic force-directed layout with pinch-drag pinning.

Spring embedder with semi-implicit Euler integration and velocity damping:
pairwise inverse-square repulsion, Hooke springs on links, and a centering
pull toward (0.5, 0.5). O(n^2) repulsion is fine at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import EmptyGraph, SchemaError, UnknownNode

_GOLDEN_INV = 2.0 / (1.0 + math.sqrt(5.0))  # 1/phi
_CENTER = (0.5, 0.5)
_MIN_DIST = 1e-4  # repulsion singularity clamp


@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str | None = None


@dataclass(frozen=True)
class GraphLink:
    source: str
    target: str
    weight: float = 1.0


@dataclass(frozen=True)
class GraphData:
    nodes: tuple[GraphNode, ...]
    links: tuple[GraphLink, ...]


def parse_graph(obj: Any) -> GraphData:
    """Parse {"nodes":[{"id","label"?}], "links":[{"source","target","weight"?}]}.

    Rejects unknown endpoints, self loops, and negative weights.
    """
    if not isinstance(obj, dict) or not isinstance(obj.get("nodes"), list):
        raise SchemaError("graph document needs a nodes array", path="nodes")
    nodes = []
    ids = set()
    for n in obj["nodes"]:
        if not isinstance(n, dict) or "id" not in n:
            raise SchemaError("graph node needs an id", path="nodes")
        node_id = str(n["id"])
        if node_id in ids:
            raise SchemaError(f"duplicate node id {node_id!r}", path="nodes")
        ids.add(node_id)
        label = n.get("label")
        nodes.append(GraphNode(id=node_id, label=None if label is None else str(label)))
    links = []
    for l in obj.get("links", []):
        if not isinstance(l, dict) or "source" not in l or "target" not in l:
            raise SchemaError("graph link needs source and target", path="links")
        src, dst = str(l["source"]), str(l["target"])
        if src not in ids or dst not in ids:
            raise SchemaError(f"link references unknown node {src!r} or {dst!r}", path="links")
        if src == dst:
            raise SchemaError(f"self loop on {src!r} is not allowed", path="links")
        weight = float(l.get("weight", 1.0))
        if weight < 0.0:
            raise SchemaError(f"negative link weight on {src!r}->{dst!r}", path="links")
        links.append(GraphLink(source=src, target=dst, weight=weight))
    return GraphData(nodes=tuple(nodes), links=tuple(links))


@dataclass(frozen=True)
class LayoutParams:
    k_spring: float = 30.0
    rest_length: float = 0.15
    k_repulse: float = 0.0005
    k_center: float = 1.0
    damping: float = 0.85
    dt: float = 0.02
    energy_epsilon: float = 1e-6
    max_iterations: int = 2000

    def __post_init__(self) -> None:
        if min(self.k_spring, self.rest_length, self.k_repulse, self.k_center,
               self.dt, self.energy_epsilon) < 0.0:
            raise ValueError("layout constants must be non-negative")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must be in (0, 1)")


@dataclass
class LayoutState:
    ids: tuple[str, ...]
    positions: np.ndarray      # (n, 2) float64, world coords
    velocities: np.ndarray     # (n, 2) float64
    pinned: dict[str, tuple[float, float]] = field(default_factory=dict)
    # cached per-graph link index arrays; immutable, safe to share across copies
    _compiled: tuple[GraphData, tuple[np.ndarray, np.ndarray, np.ndarray]] | None = field(
        default=None, repr=False, compare=False
    )

    def index(self, node_id: str) -> int:
        try:
            return self.ids.index(node_id)
        except ValueError:
            raise UnknownNode(node_id) from None

    def position(self, node_id: str) -> tuple[float, float]:
        p = self.positions[self.index(node_id)]
        return (float(p[0]), float(p[1]))

    def kinetic_energy(self) -> float:
        return float(0.5 * np.sum(self.velocities * self.velocities))

    def copy(self) -> "LayoutState":
        return LayoutState(
            ids=self.ids,
            positions=self.positions.copy(),
            velocities=self.velocities.copy(),
            pinned=dict(self.pinned),
            _compiled=self._compiled,
        )


def init_layout(graph: GraphData) -> LayoutState:
    """Place node i on a circle of radius 0.3 about (0.5, 0.5) at angle
    i * 2*pi / phi (golden-angle spacing); zero velocities, no pins."""
    n = len(graph.nodes)
    if n == 0:
        raise EmptyGraph("graph has no nodes")
    pos = np.empty((n, 2), dtype=np.float64)
    for i in range(n):
        theta = i * 2.0 * math.pi * _GOLDEN_INV
        pos[i, 0] = 0.5 + 0.3 * math.cos(theta)
        pos[i, 1] = 0.5 + 0.3 * math.sin(theta)
    return LayoutState(
        ids=tuple(node.id for node in graph.nodes),
        positions=pos,
        velocities=np.zeros((n, 2), dtype=np.float64),
    )


def _link_arrays(state: LayoutState, graph: GraphData) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if state._compiled is not None and state._compiled[0] is graph:
        return state._compiled[1]
    idx = {node_id: i for i, node_id in enumerate(state.ids)}
    src = np.array([idx[l.source] for l in graph.links], dtype=np.intp)
    dst = np.array([idx[l.target] for l in graph.links], dtype=np.intp)
    wts = np.array([l.weight for l in graph.links], dtype=np.float64)
    state._compiled = (graph, (src, dst, wts))
    return src, dst, wts


def layout_step(state: LayoutState, graph: GraphData, params: LayoutParams) -> LayoutState:
    """One damped Euler step. Mutates and returns state.

    Per node: F = sum_pairs k_repulse/d^2 (separating direction, d clamped
    below by 1e-4) + sum_links -k_spring*w*(d - L) (along the link)
    + k_center*((0.5,0.5) - pos). Then v <- damping*(v + F*dt),
    pos <- pos + v*dt. Pinned nodes keep their pin exactly, zero velocity.
    Exactly coincident nodes exert no repulsion on each other (no direction).
    """
    pos = state.positions
    n = pos.shape[0]
    fx = np.zeros(n, dtype=np.float64)
    fy = np.zeros(n, dtype=np.float64)
    x = pos[:, 0]
    y = pos[:, 1]

    if n > 1 and params.k_repulse > 0.0:
        dx = x[:, None] - x[None, :]                      # (n, n)
        dy = y[:, None] - y[None, :]
        d2 = dx * dx
        d2 += dy * dy
        d = np.sqrt(d2)
        np.fill_diagonal(d, 1.0)
        denom = d2 * d                                     # unit dir / d^2, clamp below
        if d.min() < _MIN_DIST:
            clamped = np.maximum(d, _MIN_DIST)
            denom = d * clamped * clamped
            denom[denom == 0.0] = np.inf                   # coincident: no direction
        np.fill_diagonal(denom, np.inf)
        inv = params.k_repulse / denom
        dx *= inv
        dy *= inv
        fx += dx.sum(axis=1)
        fy += dy.sum(axis=1)

    if graph.links:
        src, dst, wts = _link_arrays(state, graph)
        dx = x[src] - x[dst]
        dy = y[src] - y[dst]
        d = np.sqrt(dx * dx + dy * dy)
        safe = np.where(d > 0.0, d, 1.0)
        mag = np.where(d > 0.0, -params.k_spring * wts * (d - params.rest_length) / safe, 0.0)
        sx = dx * mag
        sy = dy * mag
        fx += np.bincount(src, weights=sx, minlength=n)
        fx -= np.bincount(dst, weights=sx, minlength=n)
        fy += np.bincount(src, weights=sy, minlength=n)
        fy -= np.bincount(dst, weights=sy, minlength=n)

    fx += params.k_center * (_CENTER[0] - x)
    fy += params.k_center * (_CENTER[1] - y)

    vel = state.velocities
    vel[:, 0] += fx * params.dt
    vel[:, 1] += fy * params.dt
    vel *= params.damping
    pos += vel * params.dt

    for node_id, (px, py) in state.pinned.items():
        i = state.index(node_id)
        pos[i, 0] = px
        pos[i, 1] = py
        state.velocities[i, :] = 0.0
    return state


def run_until_stable(
    state: LayoutState, graph: GraphData, params: LayoutParams
) -> tuple[LayoutState, int, bool]:
    """Step until kinetic energy stays below energy_epsilon or the iteration
    cap is hit. Returns (state, iterations, converged).

    The energy test must hold on two consecutive steps: an underdamped
    oscillation passes through zero-velocity turning points where a single
    sample dips below epsilon while the system is still far from equilibrium.
    """
    below = 0
    for it in range(1, params.max_iterations + 1):
        layout_step(state, graph, params)
        if state.kinetic_energy() < params.energy_epsilon:
            below += 1
            if below >= 2:
                return state, it, True
        else:
            below = 0
    return state, params.max_iterations, False


def drag_node(state: LayoutState, node_id: str, x: float, y: float) -> LayoutState:
    """Pin a node at (x, y) with zero velocity; neighbors keep simulating."""
    i = state.index(node_id)
    state.pinned[node_id] = (float(x), float(y))
    state.positions[i, 0] = float(x)
    state.positions[i, 1] = float(y)
    state.velocities[i, :] = 0.0
    return state


def release_node(state: LayoutState, node_id: str) -> LayoutState:
    """Unpin; the node resumes free integration from its current position."""
    state.index(node_id)  # raises UnknownNode for bad ids
    state.pinned.pop(node_id, None)
    return state
