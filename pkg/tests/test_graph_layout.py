import math

import numpy as np
import pytest

from hanstream.errors import EmptyGraph, SchemaError, UnknownNode
from hanstream.graph_layout import (
    GraphData,
    LayoutParams,
    drag_node,
    init_layout,
    layout_step,
    parse_graph,
    release_node,
    run_until_stable,
)


def pair_graph():
    return parse_graph({"nodes": [{"id": "a"}, {"id": "b"}], "links": [{"source": "a", "target": "b"}]})


def star_graph(n=6):
    return parse_graph(
        {
            "nodes": [{"id": str(i)} for i in range(n)],
            "links": [{"source": "0", "target": str(i)} for i in range(1, n)],
        }
    )


def separation(state):
    return float(np.linalg.norm(state.positions[0] - state.positions[1]))


class TestParseGraph:
    def test_rejects_unknown_endpoint(self):
        with pytest.raises(SchemaError):
            parse_graph({"nodes": [{"id": "a"}], "links": [{"source": "a", "target": "zz"}]})

    def test_rejects_self_loop(self):
        with pytest.raises(SchemaError):
            parse_graph({"nodes": [{"id": "a"}], "links": [{"source": "a", "target": "a"}]})

    def test_rejects_duplicate_node(self):
        with pytest.raises(SchemaError):
            parse_graph({"nodes": [{"id": "a"}, {"id": "a"}], "links": []})

    def test_rejects_negative_weight(self):
        with pytest.raises(SchemaError):
            parse_graph({"nodes": [{"id": "a"}, {"id": "b"}],
                         "links": [{"source": "a", "target": "b", "weight": -1}]})

    def test_default_weight(self):
        g = pair_graph()
        assert g.links[0].weight == 1.0


class TestInitLayout:
    def test_deterministic(self):
        g = star_graph()
        a, b = init_layout(g), init_layout(g)
        assert np.array_equal(a.positions, b.positions)

    def test_positions_within_unit_square(self):
        g = star_graph(40)
        st = init_layout(g)
        assert np.all(st.positions >= 0.0) and np.all(st.positions <= 1.0)

    def test_single_node_at_angle_zero(self):
        g = parse_graph({"nodes": [{"id": "x"}], "links": []})
        st = init_layout(g)
        assert st.positions[0, 0] == pytest.approx(0.8)
        assert st.positions[0, 1] == pytest.approx(0.5)

    def test_golden_angle_spacing(self):
        g = star_graph(3)
        st = init_layout(g)
        phi_inv = 2.0 / (1.0 + math.sqrt(5.0))
        theta = 2.0 * math.pi * phi_inv
        assert st.positions[1, 0] == pytest.approx(0.5 + 0.3 * math.cos(theta))
        assert st.positions[1, 1] == pytest.approx(0.5 + 0.3 * math.sin(theta))

    def test_empty_graph(self):
        with pytest.raises(EmptyGraph):
            init_layout(GraphData(nodes=(), links=()))

    def test_zero_velocity_and_no_pins(self):
        st = init_layout(star_graph())
        assert np.all(st.velocities == 0.0)
        assert st.pinned == {}


class TestLayoutStep:
    def test_both_pinned_nothing_moves(self):
        g = pair_graph()
        st = init_layout(g)
        drag_node(st, "a", 0.2, 0.2)
        drag_node(st, "b", 0.8, 0.8)
        before = st.positions.copy()
        for _ in range(50):
            layout_step(st, g, LayoutParams())
        assert np.array_equal(st.positions, before)

    def test_equilibrium_pair_is_fixed_point(self):
        g = pair_graph()
        p = LayoutParams(k_repulse=0.0, k_center=0.0)
        st = init_layout(g)
        st.positions[0] = (0.4, 0.5)
        st.positions[1] = (0.4 + p.rest_length, 0.5)
        st.velocities[:] = 0.0
        before = st.positions.copy()
        layout_step(st, g, p)
        assert np.allclose(st.positions, before, atol=1e-15)

    def test_mirror_symmetry_preserved(self):
        # symmetric initial condition about x=0.5 stays symmetric over 100 steps
        g = parse_graph(
            {
                "nodes": [{"id": "l"}, {"id": "r"}, {"id": "c"}],
                "links": [{"source": "l", "target": "c"}, {"source": "r", "target": "c"}],
            }
        )
        st = init_layout(g)
        st.positions[0] = (0.3, 0.4)
        st.positions[1] = (0.7, 0.4)
        st.positions[2] = (0.5, 0.62)
        st.velocities[:] = 0.0
        p = LayoutParams()
        for _ in range(100):
            layout_step(st, g, p)
        assert st.positions[0, 0] == pytest.approx(1.0 - st.positions[1, 0], abs=1e-9)
        assert st.positions[0, 1] == pytest.approx(st.positions[1, 1], abs=1e-9)
        assert st.positions[2, 0] == pytest.approx(0.5, abs=1e-9)

    def test_determinism(self):
        g = star_graph()
        a, b = init_layout(g), init_layout(g)
        for _ in range(200):
            layout_step(a, g, LayoutParams())
            layout_step(b, g, LayoutParams())
        assert np.array_equal(a.positions, b.positions)

    def test_translation_equivariance_without_centering(self):
        g = star_graph()
        p = LayoutParams(k_center=0.0)
        a, b = init_layout(g), init_layout(g)
        shift = np.array([0.07, -0.04])
        b.positions += shift
        for _ in range(100):
            layout_step(a, g, p)
            layout_step(b, g, p)
        assert np.max(np.abs(b.positions - a.positions - shift)) < 1e-9


class TestRunUntilStable:
    def test_spring_only_pair_reaches_rest_length(self):
        g = pair_graph()
        p = LayoutParams(k_repulse=0.0, k_center=0.0)
        st, iters, converged = run_until_stable(init_layout(g), g, p)
        assert converged
        assert separation(st) == pytest.approx(p.rest_length, abs=1e-3)

    def test_repulsion_equilibrium_matches_bisection_oracle(self):
        g = pair_graph()
        p = LayoutParams(k_center=0.0)
        st, iters, converged = run_until_stable(init_layout(g), g, p)
        assert converged
        # independent root of k_spring*(d-L) = k_repulse/d^2
        def imbalance(d):
            return p.k_spring * (d - p.rest_length) - p.k_repulse / (d * d)
        lo, hi = p.rest_length, 1.0
        for _ in range(200):
            mid = (lo + hi) / 2.0
            if imbalance(mid) < 0.0:
                lo = mid
            else:
                hi = mid
        assert separation(st) == pytest.approx(lo, abs=1e-3)

    def test_energy_below_epsilon_at_convergence(self):
        g = pair_graph()
        p = LayoutParams()
        st, _, converged = run_until_stable(init_layout(g), g, p)
        assert converged
        assert st.kinetic_energy() < p.energy_epsilon

    def test_already_converged_state_does_not_move(self):
        g = pair_graph()
        p = LayoutParams(k_repulse=0.0, k_center=0.0)
        st, _, _ = run_until_stable(init_layout(g), g, p)
        frozen = st.positions.copy()
        st2, iters, converged = run_until_stable(st, g, p)
        assert converged
        assert iters <= 5
        # residual velocity is below sqrt(2*eps); movement bounded by v*dt*iters
        bound = math.sqrt(2.0 * p.energy_epsilon) * p.dt * iters
        assert np.max(np.abs(st2.positions - frozen)) <= bound


class TestDrag:
    def test_dragged_node_stays_exactly(self):
        g = pair_graph()
        st = init_layout(g)
        drag_node(st, "a", 0.123456789, 0.42)
        for _ in range(1000):
            layout_step(st, g, LayoutParams())
        i = st.index("a")
        assert st.positions[i, 0] == 0.123456789
        assert st.positions[i, 1] == 0.42
        assert np.all(st.velocities[i] == 0.0)

    def test_neighbor_follows_drag(self):
        g = pair_graph()
        p = LayoutParams(k_repulse=0.0, k_center=0.0)
        st = init_layout(g)
        drag_node(st, "a", 0.9, 0.9)
        st, _, _ = run_until_stable(st, g, p)
        # free node settles at rest length from the pin
        d = separation(st)
        assert d == pytest.approx(p.rest_length, abs=1e-3)
        bx, by = st.position("b")
        assert math.hypot(bx - 0.9, by - 0.9) == pytest.approx(p.rest_length, abs=1e-3)

    def test_release_resumes_motion(self):
        g = pair_graph()
        p = LayoutParams(k_repulse=0.0, k_center=0.0)
        st = init_layout(g)
        drag_node(st, "a", 0.9, 0.9)
        layout_step(st, g, p)
        release_node(st, "a")
        i = st.index("a")
        before = st.positions[i].copy()
        for _ in range(20):
            layout_step(st, g, p)
        assert not np.array_equal(st.positions[i], before)

    def test_unknown_node(self):
        st = init_layout(pair_graph())
        with pytest.raises(UnknownNode):
            drag_node(st, "zz", 0.5, 0.5)
        with pytest.raises(UnknownNode):
            release_node(st, "zz")
