"""graph6 codec against the networkx reference implementation."""

import networkx as nx
import pytest

import sparsehalves as sh
from sparsehalves.errors import Graph6Error
from sparsehalves.graph6 import parse_graph6, to_graph6

from conftest import random_graph


def nx_encode(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(G.edges())
    return nx.to_graph6_bytes(H, header=False).decode().strip()


def nx_decode(line):
    H = nx.from_graph6_bytes(line.encode())
    return sh.build_graph(H.number_of_nodes(), list(H.edges()))


def test_singleton():
    assert to_graph6(sh.build_graph(1, [])) == "@"
    assert parse_graph6("@").n == 1


def test_round_trip_named():
    for G in (
        sh.petersen_graph(),
        sh.turan_graph(3, 12),
        sh.cycle_graph(7),
        sh.complete_graph(5),
        sh.build_graph(0, []),
    ):
        assert parse_graph6(to_graph6(G)) == G


def test_header_tolerated():
    G = sh.cycle_graph(5)
    assert parse_graph6(">>graph6<<" + to_graph6(G)) == G


def test_matches_networkx_exhaustive_small():
    # every labeled graph on up to 5 vertices
    for n in range(6):
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        for mask in range(1 << len(pairs)):
            edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
            G = sh.build_graph(n, edges)
            line = to_graph6(G)
            assert line == nx_encode(G)
            assert parse_graph6(line) == G


def test_matches_networkx_random(rng):
    for _ in range(60):
        G = random_graph(rng, rng.randint(1, 40), rng.random())
        line = to_graph6(G)
        assert line == nx_encode(G)
        assert nx_decode(line) == G


def test_large_n_prefix():
    G = sh.build_graph(100, [(0, 99)])
    assert parse_graph6(to_graph6(G)) == G


def test_malformed_inputs():
    with pytest.raises(Graph6Error):
        parse_graph6("")
    with pytest.raises(Graph6Error):
        parse_graph6("D")  # truncated body for n=5
    with pytest.raises(Graph6Error):
        parse_graph6("Dxxx")  # body too long
    with pytest.raises(Graph6Error):
        parse_graph6("~?")  # truncated size prefix
    # nonzero padding: n=2 needs one body byte with 5 trailing zero bits
    with pytest.raises(Graph6Error):
        parse_graph6("A!")  # '!' < 63
    with pytest.raises(Graph6Error):
        parse_graph6(chr(65) + chr(63 + 1))  # padding bit set
