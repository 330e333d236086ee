"""Selectors: local density constructions, cuts, triangles, schemes, rounding."""

from fractions import Fraction as F

import pytest

import sparsehalves as sh
from sparsehalves.errors import PreconditionError
from sparsehalves.graphs import VertexSubset, edges_within
from sparsehalves.oracle import min_edges_k_subset
from sparsehalves.selectors import (
    DensityParams,
    FourPartition,
    blow_up_round,
    cut_floor,
    heaviest_triangle,
    max_cut_search,
    quarter_bound_select,
    regular_lower_bound_check,
    scheme_select,
    scheme_tables,
    sparse_half_from_cut,
    triangle_free_local_density,
    triangle_floor,
)

from conftest import random_graph


class TestLocalDensity:
    def test_precondition(self):
        with pytest.raises(PreconditionError):
            triangle_free_local_density(sh.cycle_graph(5), F(3, 5))
        with pytest.raises(PreconditionError):
            triangle_free_local_density(sh.complete_graph(3), F(9, 10))

    def test_blow_up_boundary(self):
        # alpha + c = 1 exactly; regular, so the bound is tight
        G = sh.blow_up(sh.cycle_graph(5), [2] * 5)
        out = triangle_free_local_density(G, F(4, 5))
        assert out.analytic_bound == 12
        assert out.achieved <= 12
        assert min_edges_k_subset(G, 8).minimum == 12

    def test_turan_4_5(self):
        G = sh.turan_graph(2, 10)
        out = triangle_free_local_density(G, F(4, 5))
        assert out.achieved <= out.analytic_bound == 15

    def test_alpha_one(self):
        G = sh.petersen_graph()
        out = triangle_free_local_density(G, F(1))
        assert out.achieved == G.edge_count

    def test_peeling_path(self, rng):
        # isolated vertices sit below the (1-alpha) n degree bar and get peeled
        G = sh.build_graph(8, [(0, i) for i in range(1, 6)])
        alpha = F(15, 16)
        assert alpha + G.density_c >= 1
        out = triangle_free_local_density(G, alpha)
        assert out.route in ("peel+neighborhood", "peel")
        bound = (2 * alpha - 1) * G.density_c * 64
        assert out.achieved <= bound

    def test_exhaustive_small_triangle_free(self, rng):
        # theorem check against the oracle on random triangle-free graphs
        for _ in range(60):
            G = random_graph(rng, rng.randint(1, 9), 0.3)
            if sh.clique_check(G, 3)[0]:
                continue
            n, c = G.n, G.density_c
            for k in range(n + 1):
                alpha = F(k, n)
                if alpha + c < 1:
                    continue
                out = triangle_free_local_density(G, alpha)
                bound = (2 * alpha - 1) * c * n * n
                assert out.achieved <= bound
                assert out.subset.size == k
                assert min_edges_k_subset(G, k).minimum <= out.achieved


class TestRegularLowerBound:
    def test_examples(self):
        assert regular_lower_bound_check(sh.cycle_graph(5), F(3, 5))
        assert regular_lower_bound_check(sh.petersen_graph(), F(3, 5))
        assert regular_lower_bound_check(sh.turan_graph(2, 4), F(1, 2))

    def test_rejects(self):
        with pytest.raises(PreconditionError):
            regular_lower_bound_check(sh.turan_graph(2, 5), F(2, 5))  # irregular
        with pytest.raises(PreconditionError):
            regular_lower_bound_check(sh.complete_graph(3), F(2, 3))  # triangle


class TestQuarterBound:
    def test_turan(self):
        out = quarter_bound_select(sh.turan_graph(2, 10), F(7, 10))
        assert out.achieved <= 10

    def test_edgeless(self):
        out = quarter_bound_select(sh.build_graph(6, []), F(2, 3))
        assert out.achieved == 0

    def test_c5(self):
        out = quarter_bound_select(sh.cycle_graph(5), F(4, 5))
        assert out.achieved <= 3

    def test_random_triangle_free(self, rng):
        for _ in range(40):
            G = random_graph(rng, rng.randint(3, 12), 0.3)
            if sh.clique_check(G, 3)[0]:
                continue
            denom = rng.choice((4, 5, 8, 10))
            k = rng.randint((3 * G.n + 4) // 5, G.n)
            alpha = F(k, G.n)
            if alpha < F(3, 5):
                continue
            out = quarter_bound_select(G, alpha)
            assert out.achieved <= (2 * alpha - 1) * G.n * G.n / 4


class TestMaxCut:
    def test_exact_small(self):
        assert max_cut_search(sh.cycle_graph(5)).cut == 4
        assert max_cut_search(sh.turan_graph(2, 10)).cut == 25
        assert max_cut_search(sh.turan_graph(3, 6)).cut == 8
        r = max_cut_search(sh.petersen_graph())
        assert r.cut == 12 and r.exact

    def test_exact_matches_brute(self, rng):
        for _ in range(20):
            G = random_graph(rng, rng.randint(2, 9), 0.5)
            r = max_cut_search(G)
            best = 0
            for mask in range(1 << (G.n - 1)):
                S = VertexSubset(mask << 1 | 0)
                T = VertexSubset(G.vertex_mask() & ~S.members)
                best = max(best, sh.edges_between(G, S, T))
            assert r.cut == best

    def test_local_search_regime(self):
        G = sh.turan_graph(2, 40)
        r = max_cut_search(G, exact_threshold=28)
        assert not r.exact
        assert r.cut == G.edge_count  # bipartite: local search must find it

    def test_floor_on_k4_free(self, rng):
        # certified lower bound holds wherever exact max cut is available
        for G in (
            sh.petersen_graph(),
            sh.cycle_graph(7),
            sh.blow_up(sh.cycle_graph(5), [2] * 5),
            sh.turan_graph(3, 9),
        ):
            r = max_cut_search(G)
            assert r.cut >= r.floor == cut_floor(G)

    def test_floor_coefficients_derive_from_certified_identity(self):
        # 4/13 is L/2 at L = 8/13 and 111/104 is the certified quadratic
        # minimum scaled by 16 L; the floor's constants are not free-standing
        lam = F(8, 13)
        quad_min = (88 * lam - 73 * lam ** 2 - 16) / (256 * lam ** 2)
        assert F(4, 13) == lam / 2
        assert F(111, 104) == quad_min * 16 * lam
        G = sh.turan_graph(3, 6)
        assert cut_floor(G) == (F(4, 13) * F(1, 3) + F(111, 104) * F(1, 9)) * 36


class TestCutHalf:
    def test_bipartite_side(self):
        G = sh.turan_graph(2, 10)
        out = sparse_half_from_cut(G, VertexSubset.from_ids(range(5)))
        assert out.achieved == 0

    def test_t36_part(self):
        G = sh.turan_graph(3, 6)
        out = sparse_half_from_cut(G, VertexSubset.from_ids([0, 1]))
        assert out.achieved == 2  # equals n^2/18; e(A,B)=8 <= 9c^2n^2/4=9

    def test_empty_side_reduces_to_uniform(self):
        G = sh.petersen_graph()
        out = sparse_half_from_cut(G, VertexSubset.empty())
        assert out.achieved <= 3


class TestHeaviestTriangle:
    def test_k3(self):
        tri, sets = heaviest_triangle(sh.complete_graph(3))
        assert sum(s.size for s in sets) == 3

    def test_t36(self):
        tri, sets = heaviest_triangle(sh.turan_graph(3, 6))
        assert sum(s.size for s in sets) == 6

    def test_k4_floor_still_holds(self):
        G = sh.complete_graph(4)
        tri, sets = heaviest_triangle(G)
        stats = sh.triangle_stats(G)
        assert sum(s.size for s in sets) * G.edge_count >= 9 * stats.triangle_total

    def test_triangle_free_rejected(self):
        with pytest.raises(PreconditionError):
            heaviest_triangle(sh.petersen_graph())

    def test_floor_random(self, rng):
        for _ in range(60):
            G = random_graph(rng, rng.randint(3, 9), 0.6)
            stats = sh.triangle_stats(G)
            if not stats.triangle_total:
                continue
            tri, sets = heaviest_triangle(G)
            lhs = sum(s.size for s in sets) * G.edge_count
            assert lhs >= 9 * stats.triangle_total


class TestSchemes:
    def test_t36_partition(self):
        G = sh.turan_graph(3, 6)
        P = FourPartition.from_heaviest_triangle(G)
        assert [p.size for p in P.parts] == [2, 2, 2, 0]
        assert P.g_c == 1  # c = 1/3
        rows = scheme_tables(P.x)
        assert len(rows) == 26
        outs = [o for o in (scheme_select(G, P, r) for r in rows) if o]
        best = min(outs, key=lambda o: o.sort_key())
        assert best.achieved == 2
        for o in outs:
            assert o.subset.size == 3
            assert o.achieved <= o.analytic_bound

    def test_infeasible_row_none(self):
        G = sh.turan_graph(3, 6)
        P = FourPartition.from_heaviest_triangle(G)
        from sparsehalves.selectors import SchemeRow

        row = SchemeRow((F(1), F(-1, 2), F(0), F(0)), 9, 9)
        assert scheme_select(G, P, row) is None

    def test_full_take_row(self):
        # quotas x1 + x2 = 1/2 with no randomness left
        G = sh.turan_graph(4, 8)  # parts of 2; x1 = x2 = 1/4
        found, tri = sh.clique_check(G, 4)
        assert found  # T4(8) has K4s; use a K4-free graph instead
        G = sh.turan_graph(3, 12)
        P = FourPartition.from_heaviest_triangle(G)
        from sparsehalves.selectors import SchemeRow

        row = SchemeRow((P.x[0], F(1, 2) - P.x[0], F(0), F(0)), 1, 1)
        out = scheme_select(G, P, row)
        assert out is not None and out.subset.size == 6


class TestBlowUpRound:
    def test_fixpoint(self):
        H, blocks = sh.blow_up_with_blocks(sh.cycle_graph(5), [2] * 5)
        S = VertexSubset(blocks[0].members | blocks[2].members)
        assert blow_up_round(H, blocks, S) == S

    def test_one_endpoint_per_block(self):
        # five fractional blocks collapse to at most one
        H, blocks = sh.blow_up_with_blocks(sh.cycle_graph(5), [2] * 5)
        S = VertexSubset.from_ids([0, 2, 4, 6, 8])
        out = blow_up_round(H, blocks, S)
        assert out.size == 5
        assert edges_within(H, out) <= edges_within(H, S) == 5
        frac = sum(
            0 < (out.members & b.members).bit_count() < b.size for b in blocks
        )
        assert frac <= 1

    def test_rounding_random(self, rng):
        for _ in range(80):
            base = random_graph(rng, rng.randint(2, 7), 0.5)
            sizes = [rng.randint(1, 4) for _ in range(base.n)]
            H, blocks = sh.blow_up_with_blocks(base, sizes)
            mask = rng.getrandbits(H.n) & H.vertex_mask()
            S = VertexSubset(mask)
            out = blow_up_round(H, blocks, S)
            assert out.size == S.size
            assert edges_within(H, out) <= edges_within(H, S)
            frac = sum(
                0 < (out.members & b.members).bit_count() < b.size for b in blocks
            )
            assert frac <= 1

    def test_invalid_blocks(self):
        G = sh.cycle_graph(5)
        with pytest.raises(PreconditionError):
            blow_up_round(
                G,
                [VertexSubset.from_ids([0, 1]), VertexSubset.from_ids(range(2, 5))],
                VertexSubset.from_ids([0]),
            )


def test_density_params():
    G = sh.petersen_graph()
    dp = DensityParams.from_graph(G)
    assert dp.c == F(3, 20)
    assert all(a * 2 * d == 1 for a, d in zip(dp.alpha_v, dp.d_v))
    assert all(cv == 0 for cv in dp.c_v)  # triangle-free neighborhoods


def test_triangle_floor_matches_turan():
    # T3(n): c = 1/3 gives floor n^3/27 = t(G) exactly
    for n in (6, 12):
        G = sh.turan_graph(3, n)
        t = sh.triangle_stats(G).triangle_total
        assert triangle_floor(G.density_c, n) == t
