"""Relax a small graph with the spring embedder, then pinch-drag one node.

Prints convergence statistics and shows how pinning a node drags its
neighborhood while the rest of the layout keeps simulating.
"""

import numpy as np

from hanstream import LayoutParams, drag_node, init_layout, layout_step, parse_graph, release_node
from hanstream.graph_layout import run_until_stable

graph = parse_graph(
    {
        "nodes": [{"id": n} for n in "abcdefgh"],
        "links": [
            {"source": "a", "target": "b"}, {"source": "a", "target": "c"},
            {"source": "b", "target": "c"}, {"source": "b", "target": "d"},
            {"source": "c", "target": "e"}, {"source": "d", "target": "e"},
            {"source": "e", "target": "f"}, {"source": "f", "target": "g"},
            {"source": "f", "target": "h"}, {"source": "g", "target": "h"},
        ],
    }
)

params = LayoutParams()
state = init_layout(graph)
print("initial ring positions:")
for node_id in state.ids:
    x, y = state.position(node_id)
    print(f"  {node_id}: ({x:.3f}, {y:.3f})")

state, iters, converged = run_until_stable(state, graph, params)
print(f"\nconverged={converged} after {iters} steps, kinetic energy {state.kinetic_energy():.2e}")

edge_lengths = [
    float(np.linalg.norm(state.positions[state.index(l.source)] - state.positions[state.index(l.target)]))
    for l in graph.links
]
print(f"edge lengths: min {min(edge_lengths):.3f}  mean {np.mean(edge_lengths):.3f}  "
      f"max {max(edge_lengths):.3f} (rest length {params.rest_length})")

print("\npinch-drag node 'a' to the corner and keep simulating...")
drag_node(state, "a", 0.9, 0.1)
for _ in range(300):
    layout_step(state, graph, params)
print(f"  a stays pinned at {state.position('a')}")
print(f"  neighbor b followed to {tuple(round(v, 3) for v in state.position('b'))}")

release_node(state, "a")
state, iters, _ = run_until_stable(state, graph, params)
print(f"released: re-settled in {iters} steps; a now at "
      f"{tuple(round(v, 3) for v in state.position('a'))}")
