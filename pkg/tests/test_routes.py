"""Route pipelines: medium, dense, the finder, and bipartization."""

from fractions import Fraction as F

import pytest

import sparsehalves as sh
from sparsehalves.errors import PreconditionError
from sparsehalves.graphs import edges_within
from sparsehalves.oracle import min_edges_k_subset
from sparsehalves.routes import (
    RouteInapplicable,
    dense_route,
    find_sparse_half,
    make_bipartite,
    medium_route,
    sparse_half_report,
)

from conftest import random_graph


class TestMedium:
    def test_turan_equality(self):
        for n in (6, 12):
            out = medium_route(sh.turan_graph(3, n))
            assert out.achieved == n * n // 18
            assert out.route.startswith("scheme(")

    def test_triangle_free_inapplicable(self):
        with pytest.raises(RouteInapplicable):
            medium_route(sh.blow_up(sh.cycle_graph(5), [2] * 5))

    def test_odd_n(self):
        out = medium_route(sh.turan_graph(3, 9))
        assert out.subset.size == 4
        assert out.achieved == min_edges_k_subset(sh.turan_graph(3, 9), 4).minimum

    def test_random_k4_free_bound_sanity(self, rng):
        for _ in range(25):
            G = random_graph(rng, rng.randint(4, 12), 0.5)
            if sh.clique_check(G, 4)[0]:
                continue
            if sh.triangle_stats(G).triangle_total == 0:
                continue
            out = medium_route(G)
            assert out.subset.size == G.n // 2
            assert out.achieved <= out.analytic_bound
            assert out.achieved >= min_edges_k_subset(G, G.n // 2).minimum


class TestDense:
    def test_turan_exact(self):
        for n in (6, 12, 18):
            out = dense_route(sh.turan_graph(3, n))
            assert out.achieved == n * n // 18
            assert out.guarantee_flag == "le_n2_over_18"

    def test_half_independent_join(self):
        out = dense_route(sh.turan_graph(2, 8))
        assert out.achieved == 0 and out.route == "join_inside"

    def test_heuristic_no_flag(self):
        out = dense_route(sh.petersen_graph())
        assert out.guarantee_flag is None

    def test_join_uniform_branch(self):
        # join of an independent set with a sparse triangle-free graph:
        # I of size 4 joined to C8 (alpha = 8/12 = 2/3, c_gamma = 8/64 < 2/9)
        base = sh.cycle_graph(8)
        edges = list(base.edges())
        for i in range(8, 12):
            edges += [(i, j) for j in range(8)]
        G = sh.build_graph(12, edges)
        out = dense_route(G)
        assert out.achieved <= 144 // 18
        assert out.route in ("join_uniform", "join_local", "join_star")

    def test_guarantee_on_corpus(self):
        # whenever the minimum-degree hypothesis holds, e(S) <= n^2/18
        for G in (
            sh.turan_graph(3, 12),
            sh.turan_graph(3, 15),
            sh.complete_graph(3),
        ):
            if F(G.min_degree()) >= F(59, 100) * G.n:
                out = dense_route(G)
                assert 18 * out.achieved <= G.n * G.n


class TestFinder:
    def test_t3_equality_flag(self):
        out = find_sparse_half(sh.turan_graph(3, 12))
        assert out.achieved == 8 and out.guarantee_flag == "equal"

    def test_petersen(self):
        out = find_sparse_half(sh.petersen_graph())
        assert out.achieved == 2 and out.guarantee_flag == "below"

    def test_bipartite_below(self):
        out = find_sparse_half(sh.turan_graph(2, 12))
        assert out.achieved == 0 and out.guarantee_flag == "below"

    def test_k4_rejected(self):
        with pytest.raises(PreconditionError):
            find_sparse_half(sh.complete_graph(4))

    def test_report_contents(self):
        rep = sparse_half_report(sh.petersen_graph())
        assert "oracle" in rep.outcomes and "sparse" in rep.outcomes
        assert "medium" in rep.route_errors  # triangle-free
        assert rep.oracle.minimum == 2
        assert not rep.conjecture_violated()

    def test_forced_route(self):
        rep = sparse_half_report(sh.turan_graph(3, 12), route="dense")
        assert set(rep.outcomes) == {"dense"}
        rep = sparse_half_report(sh.turan_graph(3, 12), route="medium")
        assert set(rep.outcomes) == {"medium"}  # forced despite c > 0.297

    def test_custom_half_size(self):
        out = find_sparse_half(sh.petersen_graph(), half_size=4)
        assert out.subset.size == 4
        assert out.guarantee_flag is None

    def test_no_route_above_oracle(self, rng):
        # outcomes can never beat the oracle
        for _ in range(20):
            G = random_graph(rng, rng.randint(2, 12), 0.4)
            if sh.clique_check(G, 4)[0]:
                continue
            rep = sparse_half_report(G)
            assert all(
                o.achieved >= rep.oracle.minimum for o in rep.outcomes.values()
            )


class TestMakeBipartite:
    def test_t3_12(self):
        A, B, removed = make_bipartite(sh.turan_graph(3, 12))
        assert A.size == B.size == 6
        assert removed == 16

    def test_already_bipartite(self):
        _, _, removed = make_bipartite(sh.turan_graph(2, 10))
        assert removed == 0

    def test_c5_blow_up(self):
        _, _, removed = make_bipartite(sh.blow_up(sh.cycle_graph(5), [2] * 5))
        assert removed == 4 <= 100 / 9

    def test_odd_n_rejected(self):
        with pytest.raises(PreconditionError):
            make_bipartite(sh.cycle_graph(5))

    def test_regular_identity(self, rng):
        # for regular G with |A| = n/2: e(B) = e(A), so removed = 2 e(A)
        for G in (sh.petersen_graph(), sh.turan_graph(3, 12)):
            A, B, removed = make_bipartite(G)
            assert edges_within(G, A) == edges_within(G, B)
            assert removed == 2 * edges_within(G, A)
