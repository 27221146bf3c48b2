import itertools
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clebsch.graphs import (
    BudgetExhausted,
    Graph,
    GraphFormatError,
    InfeasibleError,
    build_cycle,
    build_Hn,
    build_PQ,
    complete_graph,
    cubic_completion,
    cut_of,
    dump_edge_list,
    gen_high_girth_cubic,
    girth,
    is_cut,
    is_cut_complement,
    is_cycle,
    load_graph,
    moore_bound,
    path_graph,
    petersen,
    read_graph,
    shortest_cycle,
    to_dot,
)

from .oracles import girth_bfs, is_cut_bruteforce

DATA = Path(__file__).parent / "data"


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph(n, chosen)


class TestParsing:
    def test_edge_list(self):
        G = load_graph("# triangle\n3 3\n0 1\n1 2\n2 0\n")
        assert (G.n, G.m) == (3, 3)
        assert G.edges == ((0, 1), (1, 2), (0, 2))

    def test_round_trip(self):
        G = petersen()
        assert load_graph(dump_edge_list(G)) == G

    def test_fixture_file(self):
        G = read_graph(DATA / "petersen.txt")
        assert G == petersen()

    @pytest.mark.parametrize(
        "text, line",
        [
            ("3 2\n0 1\n", 1),
            ("3 1\n0 0\n", 2),
            ("3 2\n0 1\n1 0\n", 3),
            ("3 1\n0 7\n", 2),
            ("3 1\n0 x\n", 2),
            ("3\n", 1),
        ],
    )
    def test_rejects(self, text, line):
        with pytest.raises(GraphFormatError) as err:
            load_graph(text)
        assert err.value.line == line

    def test_empty(self):
        with pytest.raises(GraphFormatError):
            load_graph("# nothing\n")

    def test_graph6(self):
        s = nx.to_graph6_bytes(nx.petersen_graph(), header=False).decode().strip()
        G = load_graph(s)
        assert (G.n, G.m) == (10, 15)
        assert girth(G) == 5

    def test_bad_graph6(self):
        with pytest.raises(GraphFormatError):
            load_graph("~~~~")

    def test_dot(self):
        assert "0 -- 1;" in to_dot(path_graph(2))


class TestGraph:
    def test_rejects_loops_and_duplicates(self):
        with pytest.raises(ValueError):
            Graph(2, [(0, 0)])
        with pytest.raises(ValueError):
            Graph(2, [(0, 1), (1, 0)])

    def test_edge_ids(self):
        G = build_cycle(5)
        assert G.edge_id(4, 0) == 4
        assert G.has_edge(1, 2) and not G.has_edge(0, 2)
        with pytest.raises(KeyError):
            G.edge_id(0, 2)

    def test_degrees(self):
        assert petersen().is_cubic()
        assert path_graph(3).degrees() == [1, 2, 1]
        assert path_graph(3).max_degree() == 2

    def test_components(self):
        G = Graph(5, [(0, 1), (3, 4)])
        assert sorted(map(sorted, G.components())) == [[0, 1], [2], [3, 4]]


class TestConstructions:
    def test_h3_is_two_k4(self):
        H = build_Hn(3)
        comps = H.components()
        assert len(comps) == 2
        for comp in comps:
            assert len(comp) == 4
            assert all(H.has_edge(u, v) for u, v in itertools.combinations(comp, 2))
            assert len({bin(x).count("1") % 2 for x in comp}) == 1

    def test_pq2_is_k4(self):
        P = build_PQ(2)
        assert (P.n, P.m) == (4, 6)

    def test_pq4_facts(self):
        P = build_PQ(4)
        assert (P.n, P.m) == (16, 40)
        assert set(P.degrees()) == {5}
        assert girth(P) == 4  # triangle-free

    def test_pq4_is_folded_cube(self):
        Q = nx.hypercube_graph(5)
        folded = nx.quotient_graph(Q, lambda x, y: tuple(1 - b for b in x) == y)
        P = nx.Graph(list(build_PQ(4).edges))
        assert nx.is_isomorphic(nx.Graph(folded), P)

    def test_pq_rejects_odd(self):
        with pytest.raises(ValueError):
            build_PQ(3)

    def test_cycle(self):
        C = build_cycle(7)
        assert girth(C) == 7 and set(C.degrees()) == {2}

    def test_moore_bound(self):
        assert moore_bound(5) == 10
        assert moore_bound(6) == 14
        assert moore_bound(17) == 1 + 3 * (2**8 - 1)


class TestGirth:
    def test_known(self):
        assert girth(petersen()) == 5
        assert girth(complete_graph(4)) == 3
        assert girth(build_Hn(4)) == 4  # weight-3 steps flip parity
        assert girth(path_graph(6)) == float("inf")

    @given(small_graphs())
    @settings(max_examples=150, deadline=None)
    def test_matches_bfs_oracle(self, G):
        assert girth(G) == girth_bfs(G.n, G.edges)

    def test_shortest_cycle(self):
        c = shortest_cycle(petersen())
        assert len(c) == 5 and is_cycle(petersen(), c)
        assert shortest_cycle(path_graph(4)) is None

    def test_is_cycle(self):
        G = petersen()
        assert is_cycle(G, [0, 1, 2, 3, 4])
        assert not is_cycle(G, [0, 1, 2])
        assert not is_cycle(G, [0, 1, 0, 1])


class TestCuts:
    def test_triangle_is_not_a_cut(self):
        res = is_cut(complete_graph(3), {0, 1, 2})
        assert not res.ok
        assert len(res.odd_cycle) == 3

    def test_even_cycle_edges(self):
        res = is_cut(build_cycle(4), {0, 1, 2, 3})
        assert res.ok
        assert cut_of(build_cycle(4), res.side) == frozenset(range(4))

    def test_empty_set(self):
        assert is_cut(petersen(), set()).ok
        assert is_cut_complement(petersen(), range(15)).ok

    @given(small_graphs(6), st.data())
    @settings(max_examples=150, deadline=None)
    def test_matches_bruteforce(self, G, data):
        S = data.draw(st.sets(st.integers(0, max(G.m - 1, 0)))) if G.m else set()
        res = is_cut(G, S)
        assert res.ok == is_cut_bruteforce(G.n, G.edges, S)
        if res.ok:
            assert cut_of(G, res.side) == frozenset(S)
        else:
            # the refutation is a cycle with an odd number of S-edges
            assert len(set(res.odd_cycle) & set(S)) % 2 == 1

    @given(small_graphs(), st.data())
    @settings(max_examples=100, deadline=None)
    def test_cut_of_is_cut(self, G, data):
        U = data.draw(st.sets(st.integers(0, G.n - 1)))
        assert is_cut(G, cut_of(G, U)).ok


class TestCompletion:
    def test_tree_with_k5(self):
        # each end of a single edge lacks two edges: deficiency 4, so H must be 4-regular
        C = cubic_completion(path_graph(2), complete_graph(5))
        assert C.is_cubic() and C.n == 10
        assert C.has_edge(0, 1)

    def test_star(self):
        star = Graph(4, [(0, 1), (0, 2), (0, 3)])
        C = cubic_completion(star, complete_graph(7))
        assert C.is_cubic() and C.n == 28

    def test_cubic_input_unchanged(self):
        G = petersen()
        assert cubic_completion(G, Graph(1, [])) is G

    def test_wrong_regularity(self):
        with pytest.raises(ValueError):
            cubic_completion(path_graph(2), build_cycle(5))

    def test_degree_four(self):
        with pytest.raises(ValueError):
            cubic_completion(complete_graph(5), complete_graph(5))


class TestGenerator:
    @pytest.mark.parametrize("n, g", [(10, 5), (30, 6), (60, 7), (200, 8)])
    def test_reaches_girth(self, n, g):
        G = gen_high_girth_cubic(n, g, seed=2)
        assert G.is_cubic() and G.n == n
        assert girth_bfs(G.n, G.edges) >= g

    def test_deterministic(self):
        assert gen_high_girth_cubic(100, 7, seed=5) == gen_high_girth_cubic(100, 7, seed=5)

    def test_infeasible(self):
        with pytest.raises(InfeasibleError):
            gen_high_girth_cubic(11, 4)
        with pytest.raises(InfeasibleError):
            gen_high_girth_cubic(12, 6)

    def test_budget(self):
        with pytest.raises(BudgetExhausted) as err:
            gen_high_girth_cubic(1000, 12, seed=0, budget=5)
        assert err.value.girth_reached < 12
