"""Immutable bitset graphs: construction, statistics, predicates, generators.

Vertices are dense ids 0..n-1.  Adjacency is one Python int per vertex (bit v
of row u is set iff uv is an edge), which keeps the set algebra the rest of
the package lives on — intersections, popcounts, subset masks — cheap and
allocation-free.  Graphs are immutable after construction and safe to share
across workers; every function here is a pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .errors import PreconditionError

#: Hard cap on vertex count; bit rows stay practical well below this.
MAX_VERTICES = 4096


def bits(mask):
    """Yield set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(ids):
    m = 0
    for v in ids:
        m |= 1 << v
    return m


class VertexSubset:
    """A set of vertex ids stored as a bit row, with cached cardinality."""

    __slots__ = ("members", "size")

    def __init__(self, members: int):
        if members < 0:
            raise ValueError("negative bit row")
        self.members = members
        self.size = members.bit_count()

    @classmethod
    def from_ids(cls, ids):
        return cls(mask_of(ids))

    @classmethod
    def empty(cls):
        return cls(0)

    def ids(self):
        return tuple(bits(self.members))

    def __contains__(self, v):
        return (self.members >> v) & 1 == 1

    def __iter__(self):
        return bits(self.members)

    def __len__(self):
        return self.size

    def __eq__(self, other):
        return isinstance(other, VertexSubset) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"VertexSubset({list(self.ids())})"


class Graph:
    """Immutable undirected simple graph with bitset adjacency rows.

    Carries the cached fields every consumer needs: per-vertex degrees, the
    edge count, and the exact density ``c = e(G)/n^2`` as a ``Fraction`` so
    threshold comparisons never flip on float rounding.
    """

    __slots__ = ("n", "adj", "degree_table", "edge_count", "density_c")

    def __init__(self, n, adj_rows):
        if not 0 <= n <= MAX_VERTICES:
            raise PreconditionError(f"vertex count {n} outside [0, {MAX_VERTICES}]")
        adj = tuple(adj_rows)
        if len(adj) != n:
            raise ValueError("adjacency row count != n")
        full = (1 << n) - 1
        for v, row in enumerate(adj):
            if row & ~full:
                raise ValueError(f"row {v} has bits outside 0..n-1")
            if (row >> v) & 1:
                raise PreconditionError(f"self-loop at vertex {v}")
        for v, row in enumerate(adj):
            for u in bits(row):
                if not (adj[u] >> v) & 1:
                    raise ValueError(f"asymmetric adjacency at ({v},{u})")
        self.n = n
        self.adj = adj
        self.degree_table = tuple(row.bit_count() for row in adj)
        self.edge_count = sum(self.degree_table) // 2
        self.density_c = Fraction(self.edge_count, n * n) if n else Fraction(0)

    # -- basic accessors -------------------------------------------------

    def degree(self, v):
        return self.degree_table[v]

    def neighbors(self, v) -> int:
        """Neighborhood of v as a bit row."""
        return self.adj[v]

    def has_edge(self, u, v):
        return (self.adj[u] >> v) & 1 == 1

    def edges(self):
        return tuple(
            (u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))
        )

    def vertex_mask(self):
        return (1 << self.n) - 1

    def min_degree(self):
        return min(self.degree_table) if self.n else 0

    def max_degree(self):
        return max(self.degree_table) if self.n else 0

    def is_regular(self):
        return self.n == 0 or self.min_degree() == self.max_degree()

    def induced(self, ids):
        """Induced subgraph on ``ids`` (ascending); new id = position in list."""
        ids = sorted(ids)
        pos = {v: i for i, v in enumerate(ids)}
        rows = []
        for v in ids:
            row = 0
            for u in bits(self.adj[v]):
                if u in pos:
                    row |= 1 << pos[u]
            rows.append(row)
        return Graph(len(ids), rows)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, e={self.edge_count})"


def build_graph(n, edges):
    """Build a graph from an edge list; duplicate pairs collapse silently."""
    rows = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise PreconditionError(f"edge ({u},{v}) out of range for n={n}")
        if u == v:
            raise PreconditionError(f"self-loop at {u}")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, rows)


# -- subset statistics ---------------------------------------------------


def _check_subset(G, S):
    if S.members & ~G.vertex_mask():
        raise PreconditionError("subset contains ids outside the graph")


def edges_within(G, S: VertexSubset) -> int:
    """Number of edges with both endpoints in S."""
    _check_subset(G, S)
    m = S.members
    return sum((G.adj[v] & m).bit_count() for v in bits(m)) // 2


def edges_between(G, S: VertexSubset, T: VertexSubset) -> int:
    """Number of edges with one endpoint in S and the other in T (disjoint)."""
    _check_subset(G, S)
    _check_subset(G, T)
    if S.members & T.members:
        raise PreconditionError("S and T overlap")
    t = T.members
    return sum((G.adj[v] & t).bit_count() for v in bits(S.members))


def edge_counts(G, S, T=None):
    """Return (e(S), e(S,T)); the second entry is None when T is omitted."""
    if T is None:
        return edges_within(G, S), None
    return edges_within(G, S), edges_between(G, S, T)


def codegree(G, u, v):
    """Number of common neighbors of u and v."""
    return (G.adj[u] & G.adj[v]).bit_count()


# -- cliques and triangles -------------------------------------------------


def clique_check(G, r):
    """Does G contain K_r (r in {3,4})?  Returns (found, witness_or_None)."""
    if r not in (3, 4):
        raise PreconditionError(f"unsupported clique size {r}")
    for u in range(G.n):
        row_u = G.adj[u] >> (u + 1) << (u + 1)
        for v in bits(row_u):
            common = G.adj[u] & G.adj[v]
            common >>= v + 1
            common <<= v + 1
            if r == 3:
                if common:
                    w = (common & -common).bit_length() - 1
                    return True, (u, v, w)
            else:
                for w in bits(common):
                    inner = common & G.adj[w]
                    inner >>= w + 1
                    inner <<= w + 1
                    if inner:
                        z = (inner & -inner).bit_length() - 1
                        return True, (u, v, w, z)
    return False, None


@dataclass(frozen=True)
class TriangleStats:
    """Exact triangle census: total count, the triples, and codegrees of
    adjacent pairs."""

    triangle_total: int
    triangles: tuple
    codegree: dict

    def codegree_sum(self, u, v, w):
        a, b, c = sorted((u, v, w))
        return self.codegree[(a, b)] + self.codegree[(a, c)] + self.codegree[(b, c)]


def triangle_stats(G) -> TriangleStats:
    triangles = []
    codeg = {}
    for u in range(G.n):
        row_u = G.adj[u] >> (u + 1) << (u + 1)
        for v in bits(row_u):
            common = G.adj[u] & G.adj[v]
            codeg[(u, v)] = common.bit_count()
            above = common >> (v + 1) << (v + 1)
            for w in bits(above):
                triangles.append((u, v, w))
    return TriangleStats(len(triangles), tuple(triangles), codeg)


# -- generators ------------------------------------------------------------


def complete_graph(n):
    full = (1 << n) - 1
    return Graph(n, [full & ~(1 << v) for v in range(n)])


def cycle_graph(n):
    if n < 3:
        raise PreconditionError("cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph():
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    return build_graph(10, edges)


def turan_parts(k, n):
    """Part sizes of the balanced complete k-partite graph on n vertices."""
    q, r = divmod(n, k)
    return [q + 1] * r + [q] * (k - r)


def turan_graph(k, n):
    """Balanced complete k-partite graph; any two part sizes differ by <= 1."""
    if k < 1:
        raise PreconditionError("need at least one part")
    sizes = turan_parts(k, n)
    rows = [0] * n
    full = (1 << n) - 1
    start = 0
    for s in sizes:
        part = ((1 << s) - 1) << start
        for v in range(start, start + s):
            rows[v] = full & ~part
        start += s
    return Graph(n, rows)


def blow_up_with_blocks(G, sizes):
    """Blow-up of G: vertex i becomes an independent block of sizes[i]
    vertices, each edge a complete bipartite bundle.  Returns (graph, blocks)."""
    if len(sizes) != G.n:
        raise PreconditionError("sizes length must equal |V(G)|")
    if any(s < 1 for s in sizes):
        raise PreconditionError("block sizes must be >= 1")
    offsets = [0]
    for s in sizes:
        offsets.append(offsets[-1] + s)
    n = offsets[-1]
    block_masks = [
        (((1 << sizes[i]) - 1) << offsets[i]) for i in range(G.n)
    ]
    rows = [0] * n
    for i in range(G.n):
        nbr = 0
        for j in bits(G.adj[i]):
            nbr |= block_masks[j]
        for v in range(offsets[i], offsets[i + 1]):
            rows[v] = nbr
    return Graph(n, rows), [VertexSubset(m) for m in block_masks]


def blow_up(G, sizes):
    return blow_up_with_blocks(G, sizes)[0]


def generate(kind, *params):
    """Named-generator dispatch used by the CLI: turan, blow_up, petersen,
    c5, complete."""
    kind = kind.replace("-", "_")
    if kind == "turan":
        k, n = (int(p) for p in params)
        return turan_graph(k, n)
    if kind == "complete":
        (n,) = (int(p) for p in params)
        return complete_graph(n)
    if kind == "petersen":
        return petersen_graph()
    if kind == "c5":
        return cycle_graph(5)
    if kind in ("blow_up", "blowup"):
        base, *rest = params
        G = base if isinstance(base, Graph) else generate(*str(base).split(":"))
        if len(rest) == 1 and "," in str(rest[0]):
            sizes = [int(s) for s in str(rest[0]).split(",")]
        elif len(rest) == 1:
            sizes = [int(rest[0])] * G.n
        else:
            sizes = [int(s) for s in rest]
        return blow_up(G, sizes)
    raise PreconditionError(f"unknown generator kind {kind!r}")


# -- connectivity and complement structure ----------------------------------


def is_connected(G):
    if G.n <= 1:
        return True
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= G.adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == G.vertex_mask()


def complement_components(G):
    """Connected components of the complement graph, as bit masks."""
    full = G.vertex_mask()
    unseen = full
    comps = []
    while unseen:
        start = unseen & -unseen
        comp = start
        frontier = start
        unseen ^= start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= ~G.adj[v] & full & ~(1 << v)
            frontier = nxt & unseen
            comp |= frontier
            unseen &= ~frontier
        comps.append(comp)
    return comps


@dataclass(frozen=True)
class JoinSplit:
    """A join decomposition G = I * rest with I independent in G."""

    independent: VertexSubset
    rest: VertexSubset
    rest_graph: Graph
    rest_ids: tuple


def join_decompose(G):
    """Split V = I + rest with every cross pair adjacent and I independent.

    Join factors are exactly the complement's connected components; any two
    vertices in different components are adjacent in G, so the independent
    side must be a single component that spans no edges.  Among qualifying
    components the largest is preferred (ties: smallest minimum id).
    Returns None when the complement is connected or no component is
    independent.
    """
    comps = complement_components(G)
    if len(comps) < 2:
        return None
    candidates = []
    for comp in comps:
        if all((G.adj[v] & comp) == 0 for v in bits(comp)):
            candidates.append(comp)
    if not candidates:
        return None
    best = max(candidates, key=lambda m: (m.bit_count(), -(m & -m)))
    rest_mask = G.vertex_mask() & ~best
    rest_ids = tuple(bits(rest_mask))
    return JoinSplit(
        independent=VertexSubset(best),
        rest=VertexSubset(rest_mask),
        rest_graph=G.induced(rest_ids),
        rest_ids=rest_ids,
    )


# -- K4-free maximalization --------------------------------------------------


def _edge_makes_k4(adj, u, v):
    # uv closes a K4 iff some edge lives inside the common neighborhood
    common = adj[u] & adj[v]
    for w in bits(common):
        if adj[w] & common & ~((1 << (w + 1)) - 1):
            return True
    return False


def maximalize_k4free(G):
    """Add non-edges in lexicographic order while staying K4-free.

    Skipped candidates stay skipped: once an edge would close a K4, more
    edges never un-close it, so a single pass yields a maximal supergraph.
    """
    found, wit = clique_check(G, 4)
    if found:
        raise PreconditionError(f"input already contains K4 {wit}")
    adj = list(G.adj)
    for u in range(G.n):
        for v in range(u + 1, G.n):
            if (adj[u] >> v) & 1:
                continue
            if not _edge_makes_k4(adj, u, v):
                adj[u] |= 1 << v
                adj[v] |= 1 << u
    return Graph(G.n, adj)


# -- independent sets ---------------------------------------------------------


def _exact_independent_set(G, target):
    """First independent set of the given size in lexicographic order, or
    None.  Branch and bound equivalent to clique search on the complement."""
    n = G.n

    def grow(chosen, chosen_count, candidates):
        if chosen_count == target:
            return chosen
        if chosen_count + candidates.bit_count() < target:
            return None
        v_bit = candidates & -candidates
        v = v_bit.bit_length() - 1
        taken = grow(chosen | v_bit, chosen_count + 1, candidates & ~v_bit & ~G.adj[v])
        if taken is not None:
            return taken
        return grow(chosen, chosen_count, candidates & ~v_bit)

    got = grow(0, 0, G.vertex_mask())
    return None if got is None else VertexSubset(got)


def _greedy_independent_set(G, target):
    """Min-degree greedy plus (1-out, 2-in) local swaps; heuristic only."""
    alive = G.vertex_mask()
    chosen = 0
    while alive:
        v = min(bits(alive), key=lambda u: ((G.adj[u] & alive).bit_count(), u))
        chosen |= 1 << v
        alive &= ~(G.adj[v] | (1 << v))

    def free_of(mask):
        blocked = 0
        for u in bits(mask):
            blocked |= G.adj[u]
        return G.vertex_mask() & ~mask & ~blocked

    improved = True
    while chosen.bit_count() < target and improved:
        improved = False
        f = free_of(chosen)
        if f:
            chosen |= f & -f
            improved = True
            continue
        for v in bits(chosen):
            rest = chosen & ~(1 << v)
            free = free_of(rest) & ~(1 << v)
            for a in bits(free):
                others = free & ~G.adj[a] & ~(1 << a)
                if others:
                    b = (others & -others).bit_length() - 1
                    chosen = rest | (1 << a) | (1 << b)
                    improved = True
                    break
            if improved:
                break
    if chosen.bit_count() >= target:
        ids = sorted(bits(chosen))[:target]
        return VertexSubset.from_ids(ids)
    return None


def independent_set_search(G, target, exact_threshold=40):
    """Find an independent set of exactly ``target`` vertices.

    Complete search for n <= exact_threshold (a None answer is then
    definitive); greedy plus local search above it (None only means "not
    found").
    """
    if target < 0:
        raise PreconditionError("target must be >= 0")
    if target == 0:
        return VertexSubset.empty()
    if target > G.n:
        return None
    if G.n <= exact_threshold:
        return _exact_independent_set(G, target)
    return _greedy_independent_set(G, target)
