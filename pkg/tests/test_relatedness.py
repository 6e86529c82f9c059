import io
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import smx
from smx.errors import ContractError, DivergenceError

from helpers import brute_unconstrained, random_taxonomy


def graph_of(text):
    return smx.parse_graph(io.BytesIO(text.encode("utf-8")))


def monte_carlo_hitting(model, u, v, rng, walks=20_000, cap=100_000):
    """Simulated average first-passage time, independent of the solver."""
    total_steps = 0
    for _ in range(walks):
        state = u
        steps = 0
        while state != v:
            transitions = model.transitions(state)
            pick = rng.random()
            acc = 0.0
            for target, p in transitions:
                acc += p
                if pick <= acc:
                    state = target
                    break
            else:
                state = transitions[-1][0]
            steps += 1
            if steps > cap:
                raise AssertionError("walk did not absorb")
        total_steps += steps
    return total_steps / walks


def random_strongly_connected(rng, max_nodes=15):
    """Hamiltonian cycle plus random chords keeps the digraph strongly
    connected by construction."""
    n = rng.randint(3, max_nodes)
    lines = []
    for i in range(n):
        lines.append(f"v{i}\tnext\tv{(i + 1) % n}")
    for _ in range(rng.randint(0, 2 * n)):
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            lines.append(f"v{a}\tlink\tv{b}")
    return graph_of("\n".join(sorted(set(lines))))


class TestWeightedShortestPath:
    def test_uniform_matches_taxonomy_distance(self, toy_graph, toy):
        wsp = smx.weighted_shortest_path(
            toy_graph, smx.PredicateWeightScheme(), toy_graph.node("E"), toy_graph.node("D")
        )
        assert wsp == 3.0

    def test_self_distance(self, toy_graph):
        e = toy_graph.node("E")
        assert smx.weighted_shortest_path(toy_graph, smx.PredicateWeightScheme(), e, e) == 0.0

    def test_predicate_weights_can_reroute(self):
        g = graph_of(
            "Cat\tsubClassOf\tAnimal\nMouse\tsubClassOf\tAnimal\nCat\thunts\tMouse\n"
        )
        scheme = smx.PredicateWeightScheme(weights={"subClassOf": 1.0, "hunts": 5.0})
        got = smx.weighted_shortest_path(g, scheme, g.node("Cat"), g.node("Mouse"))
        assert got == 2.0

    def test_explicit_edge_weights_multiply(self):
        g = graph_of("a\trel\tb\t4\nb\trel\tc\t1\n")
        scheme = smx.PredicateWeightScheme(weights={"rel": 0.5})
        assert smx.weighted_shortest_path(g, scheme, g.node("a"), g.node("c")) == 2.5

    def test_unreachable_returns_signal(self):
        g = graph_of("a\trel\tb\nc\trel\td\n")
        assert (
            smx.weighted_shortest_path(g, smx.PredicateWeightScheme(), g.node("a"), g.node("c"))
            is None
        )

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_symmetry_triangle_and_bfs_oracle(self, seed):
        rng = random.Random(seed)
        t, pairs = random_taxonomy(rng, max_nodes=30)
        g = t.graph
        scheme = smx.PredicateWeightScheme()
        nodes = sorted(g.classes)
        chosen = [rng.choice(nodes) for _ in range(3)]
        a, b, c = chosen
        dab = smx.weighted_shortest_path(g, scheme, a, b)
        dba = smx.weighted_shortest_path(g, scheme, b, a)
        dac = smx.weighted_shortest_path(g, scheme, a, c)
        dcb = smx.weighted_shortest_path(g, scheme, c, b)
        assert dab == dba
        assert dab <= dac + dcb + 1e-9
        assert dab == brute_unconstrained(pairs, g.label(a), g.label(b))


class TestHittingTime:
    def test_two_node_swap(self):
        g = graph_of("a\tgoes\tb\nb\tgoes\ta\n")
        model = smx.TransitionModel.from_graph(g)
        assert smx.hitting_time(model, g.node("a"), g.node("b")) == pytest.approx(1.0)
        assert smx.commute_time(model, g.node("a"), g.node("b")) == pytest.approx(2.0)

    def test_branching_walk_solves_linear_system(self):
        # a steps to b or c evenly; c always returns to a
        g = graph_of("a\tgoes\tb\na\tgoes\tc\nc\tgoes\ta\n")
        model = smx.TransitionModel.from_graph(g)
        assert smx.hitting_time(model, g.node("a"), g.node("b")) == pytest.approx(3.0)

    def test_self_hitting_time_is_zero(self):
        g = graph_of("a\tgoes\tb\nb\tgoes\ta\n")
        model = smx.TransitionModel.from_graph(g)
        assert smx.hitting_time(model, g.node("a"), g.node("a")) == 0.0

    def test_unreachable_target_diverges(self):
        g = graph_of("a\tgoes\tb\nc\tgoes\ta\n")
        model = smx.TransitionModel.from_graph(g)
        with pytest.raises(DivergenceError):
            smx.hitting_time(model, g.node("a"), g.node("c"))

    def test_escape_into_sink_diverges(self):
        # from a the walk may fall into sink b and never reach c
        g = graph_of("a\tgoes\tb\na\tgoes\tc\nc\tgoes\ta\n")
        model = smx.TransitionModel.from_graph(g)
        with pytest.raises(DivergenceError):
            smx.hitting_time(model, g.node("a"), g.node("c"))

    def test_transition_rows_are_stochastic(self):
        g = graph_of("a\tgoes\tb\t3\na\tgoes\tc\t1\nb\tgoes\ta\nc\tgoes\ta\n")
        model = smx.TransitionModel.from_graph(g)
        probs = dict(model.transitions(g.node("a")))
        assert probs[g.node("b")] == pytest.approx(0.75)
        assert probs[g.node("c")] == pytest.approx(0.25)

    @settings(max_examples=8, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_matches_monte_carlo_within_five_percent(self, seed):
        rng = random.Random(seed)
        g = random_strongly_connected(rng, max_nodes=8)
        model = smx.TransitionModel.from_graph(g)
        nodes = list(range(g.n_nodes))
        u, v = rng.sample(nodes, 2)
        exact = smx.hitting_time(model, u, v)
        simulated = monte_carlo_hitting(model, u, v, rng, walks=6000)
        assert simulated == pytest.approx(exact, rel=0.05)


class TestSimRank:
    def test_self_similarity(self, toy_graph):
        scores = smx.simrank(toy_graph, iterations=5)
        for node in range(toy_graph.n_nodes):
            assert scores.score(node, node) == 1.0

    def test_shared_parent_pair(self):
        g = graph_of("p\tfeeds\tx\np\tfeeds\ty\n")
        scores = smx.simrank(g, decay=0.8, iterations=20)
        assert scores.score(g.node("x"), g.node("y")) == pytest.approx(0.8)

    def test_no_in_edges_scores_zero(self):
        g = graph_of("a\trel\tb\nc\trel\td\n")
        scores = smx.simrank(g, iterations=10)
        assert scores.score(g.node("a"), g.node("c")) == 0.0

    def test_decay_contract(self, toy_graph):
        with pytest.raises(ContractError):
            smx.simrank(toy_graph, decay=1.0)
        with pytest.raises(ContractError):
            smx.simrank(toy_graph, decay=0.0)

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_iterates_monotone_and_bounded(self, seed):
        rng = random.Random(seed)
        g = random_strongly_connected(rng, max_nodes=10)
        previous = np.eye(g.n_nodes) * 0.0
        first = None
        for iterations in (1, 2, 4, 8):
            scores = smx.simrank(g, decay=0.8, iterations=iterations)
            table = scores.as_array()
            assert np.all(table >= -1e-12) and np.all(table <= 1.0 + 1e-12)
            if first is not None:
                assert np.all(table >= previous - 1e-12)
            previous = table
            first = True

    def test_deltas_shrink(self):
        g = graph_of("p\tfeeds\tx\np\tfeeds\ty\nx\tfeeds\tz\ny\tfeeds\tz\n")
        scores = smx.simrank(g, decay=0.8, iterations=40)
        deltas = scores.deltas
        assert all(b <= a + 1e-12 for a, b in zip(deltas, deltas[1:]))
        assert deltas[-1] < 1e-6
