"""Conditional-expectation derandomization of random subset choices.

The random model: inside each given part, a uniformly random quota-subset,
independently across parts.  The engine fixes vertices one at a time in
ascending id, always taking the branch whose conditional expected edge count
is no larger, so the expectation never increases and the final set spans at
most the initial expectation.  All expectations are exact ``Fraction``s;
ties go to inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import PreconditionError
from .graphs import Graph, VertexSubset, bits, edges_between, edges_within


@dataclass(frozen=True)
class SelectionOutcome:
    """A constructed subset together with the bound its construction promises."""

    subset: VertexSubset
    analytic_bound: Fraction
    achieved: int
    route: str
    guarantee_flag: str | None = None

    def with_flag(self, flag):
        return replace(self, guarantee_flag=flag)

    def sort_key(self):
        return (self.achieved, self.subset.ids())

    def to_json(self):
        b = Fraction(self.analytic_bound)
        return {
            "subset": list(self.subset.ids()),
            "size": self.subset.size,
            "achieved": self.achieved,
            "analytic_bound": {"num": b.numerator, "den": b.denominator},
            "route": self.route,
            "guarantee_flag": self.guarantee_flag,
        }


class _PartState:
    __slots__ = ("pool", "pool_size", "need")

    def __init__(self, pool, need):
        self.pool = pool
        self.pool_size = pool.bit_count()
        self.need = need


def _pair_prob(need, size):
    # P(two fixed pool vertices both drawn): hypergeometric pair probability
    if need < 2:
        return Fraction(0)
    return Fraction(need * (need - 1), size * (size - 1))


def _single_prob(need, size):
    return Fraction(need, size)


def conditional_expectation_select(
    G: Graph, parts, quotas, *, pre_chosen=0, trace=None
):
    """Derandomize the joint uniform-quota model over disjoint parts.

    ``pre_chosen`` is a bit mask of vertices fixed inside the set from the
    start (counted in full in every expectation).  Returns the chosen mask
    and the exact initial expectation; if ``trace`` is a list it receives the
    conditional expectation after every decision.
    """
    n = G.n
    if len(parts) != len(quotas):
        raise PreconditionError("parts and quotas differ in length")
    seen = pre_chosen
    states = []
    for part, quota in zip(parts, quotas):
        mask = part.members if isinstance(part, VertexSubset) else part
        if mask & seen:
            raise PreconditionError("parts (and pre-chosen set) must be disjoint")
        seen |= mask
        size = mask.bit_count()
        if not 0 <= quota <= size:
            raise PreconditionError(f"quota {quota} infeasible for part of size {size}")
        states.append(_PartState(mask, quota))
    if seen & ~G.vertex_mask():
        raise PreconditionError("parts contain ids outside the graph")

    adj = G.adj
    p = len(states)
    chosen = pre_chosen
    e_chosen = edges_within(G, VertexSubset(pre_chosen))
    # cross[i] = e(chosen, pool_i); within[i] = e(pool_i); between[i][j] = e(pool_i, pool_j)
    cross = [0] * p
    within = [0] * p
    between = [[0] * p for _ in range(p)]
    pools = [st.pool for st in states]
    for i in range(p):
        cross[i] = sum((adj[v] & pools[i]).bit_count() for v in bits(chosen))
        within[i] = sum((adj[v] & pools[i]).bit_count() for v in bits(pools[i])) // 2
        for j in range(i + 1, p):
            between[i][j] = sum((adj[v] & pools[j]).bit_count() for v in bits(pools[i]))

    def expectation():
        total = Fraction(e_chosen)
        probs = []
        for st in states:
            probs.append(
                _single_prob(st.need, st.pool_size) if st.pool_size else Fraction(0)
            )
        for i, st in enumerate(states):
            if st.pool_size:
                total += probs[i] * cross[i]
                total += _pair_prob(st.need, st.pool_size) * within[i]
            for j in range(i + 1, p):
                if st.pool_size and states[j].pool_size:
                    total += probs[i] * probs[j] * between[i][j]
        return total

    initial = expectation()

    order = sorted(bits(seen & ~pre_chosen))
    part_of = {}
    for i in range(p):
        for v in bits(states[i].pool):
            part_of[v] = i

    for v in order:
        i = part_of[v]
        st = states[i]
        row = adj[v]
        link_chosen = (row & chosen).bit_count()
        vbit = 1 << v
        # detach v from its pool
        st.pool &= ~vbit
        st.pool_size -= 1
        link_pool = [(row & pools_mask).bit_count() for pools_mask in (s.pool for s in states)]
        cross[i] -= link_chosen
        within[i] -= link_pool[i]
        for j in range(p):
            if j == i:
                continue
            a, b = min(i, j), max(i, j)
            between[a][b] -= link_pool[j]

        may_include = st.need > 0
        must_include = st.pool_size < st.need
        if must_include and not may_include:
            raise AssertionError("infeasible state; quotas were validated")

        def value_if(include):
            nonlocal chosen, e_chosen
            if include:
                st.need -= 1
                chosen_sav, e_sav = chosen, e_chosen
                chosen |= vbit
                e_chosen += link_chosen
                saved = cross[:]
                for j in range(p):
                    cross[j] += link_pool[j]
                val = expectation()
                cross[:] = saved
                chosen, e_chosen = chosen_sav, e_sav
                st.need += 1
            else:
                val = expectation()
            return val

        if must_include:
            include = True
        elif not may_include:
            include = False
        else:
            v_in = value_if(True)
            v_out = value_if(False)
            include = v_in <= v_out  # ties go to inclusion
        if include:
            st.need -= 1
            chosen |= vbit
            e_chosen += link_chosen
            for j in range(p):
                cross[j] += link_pool[j]
        if trace is not None:
            trace.append(expectation())

    for st in states:
        assert st.need == 0 and st.pool_size == 0
    assert e_chosen == edges_within(G, VertexSubset(chosen))
    return chosen, initial


def derandomized_uniform_subset(G: Graph, k, trace=None) -> SelectionOutcome:
    """Size-k subset spanning at most e(G) * k(k-1) / (n(n-1)) edges."""
    if not 0 <= k <= G.n:
        raise PreconditionError(f"k={k} outside 0..{G.n}")
    full = VertexSubset(G.vertex_mask())
    chosen, bound = conditional_expectation_select(G, [full], [k], trace=trace)
    sub = VertexSubset(chosen)
    return SelectionOutcome(sub, bound, edges_within(G, sub), "uniform")


def derandomized_extension(G: Graph, A: VertexSubset, k_extra, trace=None) -> SelectionOutcome:
    """Extend A by k_extra vertices of B = V minus A, spanning at most
    e(A) + (k/|B|) e(A,B) + (k(k-1)/(|B|(|B|-1))) e(B) edges."""
    if A.members & ~G.vertex_mask():
        raise PreconditionError("A contains ids outside the graph")
    B = VertexSubset(G.vertex_mask() & ~A.members)
    if not 0 <= k_extra <= B.size:
        raise PreconditionError(f"k_extra={k_extra} outside 0..{B.size}")
    chosen, bound = conditional_expectation_select(
        G, [B], [k_extra], pre_chosen=A.members, trace=trace
    )
    sub = VertexSubset(chosen)
    return SelectionOutcome(sub, bound, edges_within(G, sub), "extend")


def extension_bound(G: Graph, A: VertexSubset, k_extra) -> Fraction:
    """The exact-expectation bound of derandomized_extension, standalone."""
    B = VertexSubset(G.vertex_mask() & ~A.members)
    eA = edges_within(G, A)
    eAB = edges_between(G, A, B)
    eB = edges_within(G, B)
    out = Fraction(eA)
    if B.size:
        out += Fraction(k_extra, B.size) * eAB
    if B.size >= 2:
        out += Fraction(k_extra * (k_extra - 1), B.size * (B.size - 1)) * eB
    return out
