"""Constructive subset selectors: local-density constructions, cut-based
sparse halves, exact/heuristic max cut, heaviest-triangle partitions, and the
quota-scheme selector they feed.

Every selector returns a :class:`SelectionOutcome` whose ``analytic_bound``
is the exact rational bound its construction guarantees (recomputed with
hypergeometric expectations, so floor-rounded sizes keep their guarantees).
Ties between equally good subsets resolve to the lexicographically smallest,
which makes parallel and sequential sweeps agree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .derandomize import (
    SelectionOutcome,
    conditional_expectation_select,
    derandomized_extension,
    derandomized_uniform_subset,
)
from .errors import CounterexampleCandidate, PreconditionError
from .graphs import (
    Graph,
    VertexSubset,
    bits,
    clique_check,
    edges_between,
    edges_within,
    independent_set_search,
    triangle_stats,
)


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, float):
        raise PreconditionError(
            "pass alpha as a Fraction or string like '3/5'; floats round"
        )
    return Fraction(alpha)


def _best(outcomes):
    return min(outcomes, key=SelectionOutcome.sort_key)


@dataclass(frozen=True)
class DensityParams:
    """Per-graph density data: c = e/n^2 and the per-vertex quantities
    d_v = d(v)/n, a_v = n/(2 d(v)), c_v = e(N(v))/d(v)^2 (None for isolated
    vertices)."""

    c: Fraction
    d_v: tuple
    alpha_v: tuple
    c_v: tuple

    @classmethod
    def from_graph(cls, G: Graph):
        d_v, alpha_v, c_v = [], [], []
        for v in range(G.n):
            d = G.degree_table[v]
            d_v.append(Fraction(d, G.n))
            if d == 0:
                alpha_v.append(None)
                c_v.append(None)
                continue
            alpha_v.append(Fraction(G.n, 2 * d))
            nb = VertexSubset(G.adj[v])
            c_v.append(Fraction(edges_within(G, nb), d * d))
        return cls(G.density_c, tuple(d_v), tuple(alpha_v), tuple(c_v))


def triangle_floor(c: Fraction, n: int) -> Fraction:
    """Minimum triangle count forced on a K4-free graph with no sparse half
    and degrees in [n/2, 9n/14]: c / (27 (1-2c)) * n^3."""
    return c / (27 * (1 - 2 * c)) * n ** 3


# -- local density in triangle-free graphs -----------------------------------


def _neighborhood_scan(G: Graph, t: int):
    """Best A_v = V minus N(v) extended inside N(v) to size t, over all v.

    Needs |V| - d(v) <= t for every vertex, which the callers guarantee via
    their minimum-degree condition.
    """
    best = None
    full = G.vertex_mask()
    for v in range(G.n):
        a_mask = full & ~G.adj[v]
        a_size = a_mask.bit_count()
        if a_size > t:
            raise AssertionError("scan called below its minimum-degree threshold")
        out = derandomized_extension(G, VertexSubset(a_mask), t - a_size)
        if best is None or out.sort_key() < best.sort_key():
            best = out
    return best


def triangle_free_local_density(G: Graph, alpha) -> SelectionOutcome:
    """Subset of size floor(alpha*n) spanning at most (2*alpha-1) * c * n^2
    edges in a triangle-free graph, provided alpha + c >= 1.

    Mirrors the existence proof: with minimum degree at least (1-alpha)n,
    scan every vertex v, take the non-neighborhood plus a derandomized
    extension into N(v), and keep the best; otherwise peel minimum-degree
    vertices (threshold measured against the original n) until the remainder
    clears the degree bar, scan there, and return peeled + scanned.
    """
    alpha = _as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise PreconditionError("alpha must lie in [0, 1]")
    tri, wit = clique_check(G, 3)
    if tri:
        raise PreconditionError(f"graph contains triangle {wit}")
    c = G.density_c
    if alpha + c < 1:
        raise PreconditionError(f"alpha + c = {alpha + c} < 1")
    n = G.n
    t = int(alpha * n)  # floor
    bound = (2 * alpha - 1) * c * n * n
    threshold = (1 - alpha) * n

    if all(d >= threshold for d in G.degree_table):
        best = _neighborhood_scan(G, t)
        return SelectionOutcome(best.subset, bound, best.achieved, "neighborhood")

    # peel low-degree vertices into A until the rest clears the bar
    remaining = G.vertex_mask()
    deg = list(G.degree_table)
    peeled = []
    while remaining:
        v = min(
            (u for u in bits(remaining) if deg[u] < threshold),
            key=lambda u: (deg[u], u),
            default=None,
        )
        if v is None:
            break
        remaining &= ~(1 << v)
        for u in bits(G.adj[v] & remaining):
            deg[u] -= 1
        peeled.append(v)
    assert remaining, "peeling cannot exhaust the graph when alpha + c >= 1"
    assert len(peeled) <= t, "peel count exceeds the quota despite |A| < alpha*n"
    if len(peeled) == t:
        # only possible for fractional alpha*n with a single vertex left
        sub = VertexSubset.from_ids(peeled)
        return SelectionOutcome(sub, bound, edges_within(G, sub), "peel")
    rest_ids = sorted(bits(remaining))
    H = G.induced(rest_ids)
    sub_t = t - len(peeled)
    best = _neighborhood_scan(H, sub_t)
    mask = 0
    for v in peeled:
        mask |= 1 << v
    for i in bits(best.subset.members):
        mask |= 1 << rest_ids[i]
    sub = VertexSubset(mask)
    return SelectionOutcome(sub, bound, edges_within(G, sub), "peel+neighborhood")


def regular_lower_bound_check(G: Graph, alpha, cap=30) -> bool:
    """For regular triangle-free G with alpha*n integral: does every
    alpha*n-subset span at least (2*alpha-1) c n^2 edges?  Answered by the
    exact oracle; must come out True."""
    from .oracle import min_edges_k_subset

    alpha = _as_fraction(alpha)
    if (alpha * G.n).denominator != 1:
        raise PreconditionError("alpha*n must be integral")
    if not G.is_regular():
        raise PreconditionError("graph is not regular")
    if clique_check(G, 3)[0]:
        raise PreconditionError("graph contains a triangle")
    k = int(alpha * G.n)
    res = min_edges_k_subset(G, k, cap=cap)
    bound = (2 * alpha - 1) * G.density_c * G.n * G.n
    return res.minimum >= bound


# -- the (2a-1)n^2/4 selector -------------------------------------------------


def _pad_to_size(G, mask, t):
    """Grow a set to size t, greedily adding the vertex with the fewest
    edges into it (ties: lowest id); shrink by dropping highest ids."""
    size = mask.bit_count()
    while size > t:
        drop = max(bits(mask))
        mask &= ~(1 << drop)
        size -= 1
    while size < t:
        add = min(
            (u for u in range(G.n) if not mask >> u & 1),
            key=lambda u: ((G.adj[u] & mask).bit_count(), u),
        )
        mask |= 1 << add
        size += 1
    return mask


def quarter_bound_select(G: Graph, alpha, oracle_threshold=26) -> SelectionOutcome:
    """Subset of size floor(alpha*n) spanning at most (2*alpha-1) n^2 / 4
    edges in a triangle-free graph, for alpha >= 3/5.

    Tries, in order: the local-density construction when alpha + c >= 1
    (whose (2a-1)cn^2 bound is at least as strong); an independent set of
    the complementary size plus a maximum matching on the rest; the exact
    oracle at desk scale.  A miss across all strategies raises
    CounterexampleCandidate, since the bound is a theorem.
    """
    alpha = _as_fraction(alpha)
    if not Fraction(3, 5) <= alpha <= 1:
        raise PreconditionError("alpha must lie in [3/5, 1]")
    tri, wit = clique_check(G, 3)
    if tri:
        raise PreconditionError(f"graph contains triangle {wit}")
    n = G.n
    t = int(alpha * n)
    target = (2 * alpha - 1) * n * n / 4
    candidates = []
    if alpha + G.density_c >= 1:
        candidates.append(triangle_free_local_density(G, alpha))
    ind = independent_set_search(G, n - t)
    if ind is not None:
        mask = _matching_extension(G, ind, t)
        sub = VertexSubset(mask)
        candidates.append(
            SelectionOutcome(sub, target, edges_within(G, sub), "matching")
        )
    if n <= oracle_threshold:
        from .oracle import min_edges_k_subset

        res = min_edges_k_subset(G, t)
        candidates.append(
            SelectionOutcome(res.witness, target, res.minimum, "oracle")
        )
    meeting = [o for o in candidates if o.achieved <= target]
    if not meeting:
        from .graph6 import to_graph6

        raise CounterexampleCandidate(
            f"no strategy met (2a-1)n^2/4 at alpha={alpha}; "
            f"this contradicts a known theorem and needs investigation",
            graph6=to_graph6(G),
            details={"alpha": str(alpha), "achieved": [o.achieved for o in candidates]},
        )
    return _best(meeting)


def _matching_extension(G, ind: VertexSubset, t):
    """ind plus the vertices of a maximum matching on the rest, resized to t."""
    import networkx as nx

    rest = [v for v in range(G.n) if v not in ind]
    H = nx.Graph()
    H.add_nodes_from(rest)
    for u in rest:
        for w in bits(G.adj[u]):
            if w > u and not (w in ind):
                H.add_edge(u, w)
    matching = nx.max_weight_matching(H, maxcardinality=True)
    mask = ind.members
    pairs = sorted(tuple(sorted(p)) for p in matching)
    for u, w in pairs:
        if mask.bit_count() + 2 > t:
            break
        mask |= (1 << u) | (1 << w)
    return _pad_to_size(G, mask, t)


# -- cut-based sparse halves ---------------------------------------------------


def sparse_half_from_cut(G: Graph, A: VertexSubset) -> SelectionOutcome:
    """Half-sized set built from a cut side A (|A| <= n/2): the better of a
    uniform choice inside B and extending A into B.  When e(A,B) exceeds
    (9/4) c^2 n^2 the result provably spans under n^2/18."""
    n = G.n
    if A.size > n // 2:
        raise PreconditionError("|A| must be at most n/2")
    target = n // 2
    B_mask = G.vertex_mask() & ~A.members
    b_ids = sorted(bits(B_mask))
    H = G.induced(b_ids)
    inner = derandomized_uniform_subset(H, target)
    mask = 0
    for i in bits(inner.subset.members):
        mask |= 1 << b_ids[i]
    sub_uniform = VertexSubset(mask)
    cand = [
        SelectionOutcome(
            sub_uniform, inner.analytic_bound, edges_within(G, sub_uniform), "cut"
        ),
        derandomized_extension(G, A, target - A.size),
    ]
    cand[1] = SelectionOutcome(
        cand[1].subset, cand[1].analytic_bound, cand[1].achieved, "cut"
    )
    return _best(cand)


@dataclass(frozen=True)
class CutResult:
    side_a: VertexSubset
    side_b: VertexSubset
    cut: int
    floor: Fraction
    exact: bool


def cut_floor(G: Graph) -> Fraction:
    """Certified lower bound on the max cut of a K4-free graph:
    ((4/13) c + (111/104) c^2) n^2."""
    c = G.density_c
    return (Fraction(4, 13) * c + Fraction(111, 104) * c * c) * G.n * G.n


def max_cut_search(G: Graph, exact_threshold=28, restarts=16, seed=9) -> CutResult:
    """Max cut: exact bit enumeration up to the threshold, deterministic
    multi-restart single-flip local search above it."""
    n = G.n
    if n <= 1:
        empty = VertexSubset.empty()
        return CutResult(empty, VertexSubset(G.vertex_mask()), 0, cut_floor(G), True)
    if n <= exact_threshold:
        mask, cut = _exact_max_cut(G)
        exact = True
    else:
        mask, cut = _local_search_max_cut(G, restarts, seed)
        exact = False
    side_a = VertexSubset(mask)
    side_b = VertexSubset(G.vertex_mask() & ~mask)
    if side_a.size > side_b.size:
        side_a, side_b = side_b, side_a
    return CutResult(side_a, side_b, cut, cut_floor(G), exact)


def _exact_max_cut(G):
    # vertex 0 pinned to one side kills the complement symmetry
    n = G.n
    edges = G.edges()
    total = 1 << (n - 1)
    block = 1 << min(20, n - 1)
    one = np.uint64(1)
    best_cut, best_mask = -1, 0
    for start in range(0, total, block):
        count = min(block, total - start)
        masks = np.arange(start, start + count, dtype=np.uint64)
        acc = np.zeros(count, dtype=np.int32)
        for u, v in edges:
            bv = ((masks >> np.uint64(v - 1)) & one).astype(np.int32)
            if u == 0:
                acc += bv
            else:
                acc += ((masks >> np.uint64(u - 1)) & one).astype(np.int32) ^ bv
        i = int(np.argmax(acc))
        if acc[i] > best_cut:
            best_cut = int(acc[i])
            best_mask = start + i
    # stored mask covers vertices 1..n-1; side A = complement
    side = 0
    for v in range(1, n):
        if best_mask >> (v - 1) & 1:
            side |= 1 << v
    return G.vertex_mask() & ~side, best_cut


def _cut_value(G, mask):
    return sum(
        (G.adj[v] & ~mask & G.vertex_mask()).bit_count() for v in bits(mask)
    )


def _local_search_max_cut(G, restarts, seed):
    rng = random.Random(seed)
    n = G.n
    best_mask, best_cut = 0, -1
    for attempt in range(restarts):
        if attempt == 0:
            mask = 0
            for v in range(n):  # greedy: side with more neighbors opposite
                left = (G.adj[v] & mask).bit_count()
                placed = ((1 << v) - 1)
                right = (G.adj[v] & placed & ~mask).bit_count()
                if right > left:
                    mask |= 1 << v
        else:
            mask = rng.getrandbits(n) & G.vertex_mask()
        improved = True
        while improved:
            improved = False
            for v in range(n):
                same = (
                    (G.adj[v] & mask).bit_count()
                    if mask >> v & 1
                    else (G.adj[v] & ~mask & G.vertex_mask()).bit_count()
                )
                other = G.degree_table[v] - same
                if same > other:
                    mask ^= 1 << v
                    improved = True
        cut = _cut_value(G, mask)
        if cut > best_cut:
            best_cut, best_mask = cut, mask
    return best_mask, best_cut


# -- heaviest triangle and scheme machinery -----------------------------------


def heaviest_triangle(G: Graph):
    """Triangle maximizing the codegree sum, plus the three pairwise common
    neighborhoods.  In a K4-free graph those are disjoint independent sets,
    and the winner's sum is at least 9 t(G) / e(G)."""
    stats = triangle_stats(G)
    if stats.triangle_total == 0:
        raise PreconditionError("graph is triangle-free")
    best = max(
        stats.triangles,
        key=lambda tri: (stats.codegree_sum(*tri), tuple(-x for x in tri)),
    )
    u, v, w = best
    return best, (
        VertexSubset(G.adj[u] & G.adj[v]),
        VertexSubset(G.adj[u] & G.adj[w]),
        VertexSubset(G.adj[v] & G.adj[w]),
    )


@dataclass(frozen=True)
class FourPartition:
    """V1, V2, V3 independent (sorted by size descending), V4 the rest."""

    parts: tuple
    x: tuple
    e_cross: dict
    e_last: int
    g_c: Fraction

    @classmethod
    def from_heaviest_triangle(cls, G: Graph):
        _, sets = heaviest_triangle(G)
        ordered = sorted(
            sets, key=lambda s: (-s.size, s.members & -s.members if s.members else 0)
        )
        union = 0
        for s in ordered:
            if union & s.members:
                raise PreconditionError(
                    "common neighborhoods overlap; graph is not K4-free"
                )
            union |= s.members
        v4 = VertexSubset(G.vertex_mask() & ~union)
        parts = (*ordered, v4)
        for s in ordered:
            if edges_within(G, s):
                raise PreconditionError(
                    "common neighborhood spans an edge; graph is not K4-free"
                )
        n = G.n
        x = tuple(Fraction(p.size, n) for p in parts)
        e_cross = {}
        for i in range(4):
            for j in range(i + 1, 4):
                e_cross[(i, j)] = edges_between(G, parts[i], parts[j])
        g_c = 1 / (3 * (1 - 2 * G.density_c))
        return cls(parts, x, e_cross, edges_within(G, parts[3]), g_c)


@dataclass(frozen=True)
class SchemeRow:
    """One quota row: fractions of n drawn from V1..V4, summing to 1/2."""

    quotas: tuple
    table_id: int
    row_id: int


def scheme_tables(x):
    """All quota rows of the four selection tables, for part fractions x."""
    x1, x2, x3, x4 = x
    H = Fraction(1, 2)
    tables = {
        1: [
            (x1, H - x1, 0, 0),
            (x1, 0, H - x1, 0),
            (0, x2, H - x2, 0),
            (H - x2, x2, 0, 0),
            (H - x3, 0, x3, 0),
            (0, H - x3, x3, 0),
        ],
        2: [
            (x1, x2, H - x1 - x2, 0),
            (x1, H - x1 - x3, x3, 0),
            (H - x2 - x3, x2, x3, 0),
            (x1, 0, 0, H - x1),
            (0, x2, 0, H - x2),
            (0, 0, x3, H - x3),
        ],
        3: [
            (x1, H - x1, 0, 0),
            (x1, 0, H - x1, 0),
            (H - x2 - x3, x2, x3, 0),
            (x1, 0, 0, H - x1),
            (H - x2 - x4, x2, 0, x4),
            (H - x3 - x4, 0, x3, x4),
        ],
        4: [
            (x1, H - x1, 0, 0),
            (x1, 0, H - x1, 0),
            (x1, H - x1 - x3, x3, 0),
            (H - x2 - x3, x2, x3, 0),
            (x1, 0, 0, H - x1),
            (0, x2, 0, H - x2),
            (H - x3 - x4, 0, x3, x4),
            (0, H - x3 - x4, x3, x4),
        ],
    }
    rows = []
    for tid, quota_list in tables.items():
        for rid, quotas in enumerate(quota_list, start=1):
            rows.append(SchemeRow(tuple(Fraction(q) for q in quotas), tid, rid))
    return rows


def resolve_quotas(row: SchemeRow, partition: FourPartition, n):
    """Integer per-part targets for a quota row, or None when infeasible.

    Fractional prescriptions are floored; any shortfall against floor(n/2)
    is distributed by largest remainder (ties to the lower index) among
    parts with headroom.  Quotas are exact multiples of 1/n for even n, so
    rounding only ever kicks in for odd n.
    """
    if any(q < 0 for q in row.quotas):
        return None
    sizes = [p.size for p in partition.parts]
    raw = [q * n for q in row.quotas]
    targets = [int(r) for r in raw]  # floors
    if any(t > s for t, s in zip(targets, sizes)):
        return None
    want = n // 2
    deficit = want - sum(targets)
    if deficit < 0:
        return None
    order = sorted(range(4), key=lambda i: (-(raw[i] - targets[i]), i))
    for i in order:
        if deficit == 0:
            break
        room = min(deficit, sizes[i] - targets[i])
        take = min(room, 1) if raw[i] - targets[i] > 0 else 0
        targets[i] += take
        deficit -= take
    if deficit > 0:  # spread beyond fractional parts, still capped by sizes
        for i in range(4):
            room = sizes[i] - targets[i]
            take = min(room, deficit)
            targets[i] += take
            deficit -= take
    if deficit > 0:
        return None
    return tuple(targets)


def scheme_select(G: Graph, partition: FourPartition, row: SchemeRow):
    """Derandomize one quota row against a four-part partition; None when
    the row is infeasible."""
    targets = resolve_quotas(row, partition, G.n)
    if targets is None:
        return None
    pre = 0
    pools, quotas = [], []
    for part, t in zip(partition.parts, targets):
        if t == part.size:
            pre |= part.members
        elif t > 0:
            pools.append(part)
            quotas.append(t)
        # zero-quota parts are simply never chosen
    chosen, bound = conditional_expectation_select(
        G, pools, quotas, pre_chosen=pre
    )
    sub = VertexSubset(chosen)
    return SelectionOutcome(
        sub,
        bound,
        edges_within(G, sub),
        f"scheme({row.table_id},{row.row_id})",
    )


# -- blow-up rounding ----------------------------------------------------------


def validate_blow_up_blocks(H: Graph, blocks):
    """Each block independent with identical external adjacency; blocks
    partition V(H)."""
    union = 0
    for b in blocks:
        if union & b.members:
            raise PreconditionError("blocks overlap")
        union |= b.members
    if union != H.vertex_mask():
        raise PreconditionError("blocks do not cover the graph")
    for b in blocks:
        rows = {H.adj[v] & ~b.members for v in bits(b.members)}
        if len(rows) > 1:
            raise PreconditionError("block members differ in external adjacency")
        if any(H.adj[v] & b.members for v in bits(b.members)):
            raise PreconditionError("block spans an edge")


def blow_up_round(H: Graph, blocks, S: VertexSubset) -> VertexSubset:
    """Round S to touch at most one block fractionally, never increasing
    e(S) and preserving |S|.

    Since block contents are interchangeable, e(S) depends only on the
    per-block counts, and along a mass shift between two blocks (their sum
    fixed) the count is linear or concave, so one endpoint is no worse.
    """
    validate_blow_up_blocks(H, blocks)
    k = len(blocks)
    sizes = [b.size for b in blocks]
    counts = [(S.members & blocks[i].members).bit_count() for i in range(k)]
    # block adjacency of the underlying pattern
    reps = [next(bits(b.members)) for b in blocks]
    adj = [
        [1 if H.adj[reps[i]] & blocks[j].members else 0 for j in range(k)]
        for i in range(k)
    ]

    def total(cnt):
        return sum(
            cnt[i] * cnt[j] * adj[i][j] for i in range(k) for j in range(i + 1, k)
        )

    def fractional():
        return [i for i in range(k) if 0 < counts[i] < sizes[i]]

    frac = fractional()
    while len(frac) >= 2:
        i, j = frac[0], frac[1]
        move_ij = min(counts[i], sizes[j] - counts[j])  # drain i into j
        move_ji = min(counts[j], sizes[i] - counts[i])  # drain j into i
        a = counts[:]
        a[i] -= move_ij
        a[j] += move_ij
        b = counts[:]
        b[i] += move_ji
        b[j] -= move_ji
        counts = a if total(a) <= total(b) else b
        frac = fractional()

    mask = 0
    for i in range(k):
        ids = sorted(bits(blocks[i].members))[: counts[i]]
        for v in ids:
            mask |= 1 << v
    out = VertexSubset(mask)
    assert out.size == S.size
    return out
