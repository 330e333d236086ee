"""Graph core: construction, statistics, predicates, generators."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sparsehalves as sh
from sparsehalves.errors import PreconditionError
from sparsehalves.graphs import (
    VertexSubset,
    bits,
    complement_components,
    edges_between,
    edges_within,
)

from conftest import random_graph


def test_build_triangle():
    G = sh.build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert G.edge_count == 3
    assert G.degree_table == (2, 2, 2)


def test_build_empty_and_duplicates():
    G = sh.build_graph(4, [])
    assert G.edge_count == 0
    G = sh.build_graph(3, [(0, 1), (1, 0), (0, 1)])
    assert G.edge_count == 1


def test_build_rejects_bad_edges():
    with pytest.raises(PreconditionError):
        sh.build_graph(3, [(0, 3)])
    with pytest.raises(PreconditionError):
        sh.build_graph(3, [(1, 1)])


def test_octahedron_counts():
    G = sh.turan_graph(3, 6)  # K_{2,2,2}
    assert G.edge_count == 12
    assert all(d == 4 for d in G.degree_table)
    assert G.density_c == Fraction(1, 3)


def test_density_exact_rational():
    G = sh.petersen_graph()
    assert G.density_c == Fraction(15, 100)
    assert G.density_c * G.n * G.n == G.edge_count


def test_edge_counts():
    K4 = sh.complete_graph(4)
    assert edges_within(K4, VertexSubset.from_ids([0, 1])) == 1
    G = sh.turan_graph(3, 6)
    S = VertexSubset.from_ids([0, 1, 2])  # one part plus one vertex
    assert edges_within(G, S) == 2
    C5 = sh.cycle_graph(5)
    S, T = VertexSubset.from_ids([0, 1, 2]), VertexSubset.from_ids([3, 4])
    assert sh.edge_counts(C5, S, T) == (2, 2)
    with pytest.raises(PreconditionError):
        edges_between(C5, S, VertexSubset.from_ids([2, 3]))


def test_clique_check():
    assert sh.clique_check(sh.petersen_graph(), 3) == (False, None)
    found, wit = sh.clique_check(sh.turan_graph(3, 9), 3)
    assert found and len(set(wit)) == 3
    assert not sh.clique_check(sh.turan_graph(3, 9), 4)[0]
    found, wit = sh.clique_check(sh.complete_graph(4), 4)
    assert found and wit == (0, 1, 2, 3)
    with pytest.raises(PreconditionError):
        sh.clique_check(sh.complete_graph(4), 5)


def test_triangle_stats():
    assert sh.triangle_stats(sh.complete_graph(3)).triangle_total == 1
    assert sh.triangle_stats(sh.petersen_graph()).triangle_total == 0
    stats = sh.triangle_stats(sh.turan_graph(3, 6))
    assert stats.triangle_total == 8
    assert all(stats.codegree[pair] == 2 for pair in stats.codegree)


def test_triangle_identity_small_random(rng):
    # t(G) = (1/3) sum_v e(N(v))
    for _ in range(40):
        G = random_graph(rng, rng.randint(1, 9), 0.5)
        total = sum(
            edges_within(G, VertexSubset(G.adj[v])) for v in range(G.n)
        )
        assert total == 3 * sh.triangle_stats(G).triangle_total


def test_generators():
    T = sh.turan_graph(3, 7)
    sizes = sorted(T.n - d for d in set(T.degree_table))
    assert sorted(sizes) == [2, 2, 3] or sizes == [2, 3]
    B = sh.blow_up(sh.cycle_graph(5), [2] * 5)
    assert B.n == 10 and B.edge_count == 20
    assert all(d == 4 for d in B.degree_table)
    assert not sh.clique_check(B, 3)[0]
    assert sh.blow_up(sh.petersen_graph(), [1] * 10) == sh.petersen_graph()
    assert sh.generate("turan", 3, 6) == sh.turan_graph(3, 6)
    assert sh.generate("c5") == sh.cycle_graph(5)


def test_handshake_identity(rng):
    # 2 e(S) + e(S, V-S) = sum of degrees over S
    for _ in range(60):
        G = random_graph(rng, rng.randint(1, 10), 0.4)
        mask = rng.getrandbits(G.n) & G.vertex_mask()
        S = VertexSubset(mask)
        T = VertexSubset(G.vertex_mask() & ~mask)
        lhs = 2 * edges_within(G, S) + edges_between(G, S, T)
        assert lhs == sum(G.degree_table[v] for v in bits(mask))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 16), st.data())
def test_handshake_property(n, data):
    edges = data.draw(
        st.sets(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda e: e[0] < e[1]
            ),
            max_size=n * 3,
        )
    )
    G = sh.build_graph(n, sorted(edges))
    mask = data.draw(st.integers(0, (1 << n) - 1))
    S = VertexSubset(mask)
    T = VertexSubset(G.vertex_mask() & ~mask)
    assert 2 * edges_within(G, S) + edges_between(G, S, T) == sum(
        G.degree_table[v] for v in S
    )


def test_maximalize_k4free():
    T = sh.turan_graph(3, 9)
    assert sh.maximalize_k4free(T) == T  # already maximal
    for G in (sh.build_graph(4, []), sh.cycle_graph(5), sh.petersen_graph()):
        M = sh.maximalize_k4free(G)
        assert not sh.clique_check(M, 4)[0]
        assert all((M.adj[u] & G.adj[u]) == G.adj[u] for u in range(G.n))
        # maximal: every absent edge closes a K4
        from sparsehalves.graphs import _edge_makes_k4

        for u in range(M.n):
            for v in range(u + 1, M.n):
                if not M.has_edge(u, v):
                    assert _edge_makes_k4(M.adj, u, v)
    with pytest.raises(PreconditionError):
        sh.maximalize_k4free(sh.complete_graph(4))


def test_join_decompose():
    J = sh.join_decompose(sh.turan_graph(3, 6))
    assert J.independent.size == 2
    assert J.rest_graph == sh.turan_graph(2, 4)
    assert sh.join_decompose(sh.cycle_graph(5)) is None
    star = sh.build_graph(5, [(0, i) for i in range(1, 5)])
    J = sh.join_decompose(star)
    # leaves are the larger independent side; the center is the rest
    assert J.independent.size == 4 and J.rest_graph.edge_count == 0
    # join invariants
    G = sh.turan_graph(3, 9)
    J = sh.join_decompose(G)
    assert edges_within(G, J.independent) == 0
    assert (
        edges_between(G, J.independent, J.rest)
        == J.independent.size * J.rest.size
    )


def test_complement_components():
    comps = complement_components(sh.turan_graph(3, 6))
    assert sorted(c.bit_count() for c in comps) == [2, 2, 2]
    assert len(complement_components(sh.cycle_graph(5))) == 1


def test_independent_set_search():
    assert sh.independent_set_search(sh.turan_graph(3, 6), 2).size == 2
    P = sh.petersen_graph()
    got = sh.independent_set_search(P, 4)
    assert got is not None and edges_within(P, got) == 0
    assert sh.independent_set_search(sh.complete_graph(4), 2) is None
    assert sh.independent_set_search(P, 5) is None  # independence number is 4
    big = sh.turan_graph(3, 60)  # heuristic regime
    got = sh.independent_set_search(big, 20, exact_threshold=40)
    assert got is not None and edges_within(big, got) == 0


def test_is_connected():
    assert sh.is_connected(sh.petersen_graph())
    assert not sh.is_connected(sh.build_graph(4, [(0, 1), (2, 3)]))
    assert sh.is_connected(sh.build_graph(1, []))


def test_induced_subgraph():
    G = sh.petersen_graph()
    H = G.induced([0, 1, 2, 3, 4])
    assert H == sh.cycle_graph(5)
