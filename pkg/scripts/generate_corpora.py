#!/usr/bin/env python3
"""Generate the exhaustive small-graph corpora used by the test suite.

Families:
  all  -- every graph up to 9 vertices (one representative per isomorphism
          class), grown level by level: each (k+1)-vertex graph arises from a
          k-vertex parent by attaching a new vertex to some neighborhood.
  tf   -- every triangle-free graph up to 10 vertices; same growth, with the
          new neighborhood restricted to independent sets of the parent.

Deduplication is exact: candidates are bucketed by an iterated-refinement
color invariant (degree + per-vertex triangle count, refined 3 rounds) and
resolved inside a bucket by a color-guided backtracking isomorphism test.
Class counts per level are asserted against the known sequences, which makes
silent generation bugs loud.

Levels are resumable: state is checkpointed so an interrupted level restarts
where it stopped.  Run repeatedly until exit code 0:

    python scripts/generate_corpora.py --family all
    python scripts/generate_corpora.py --family tf

Also builds data/regular_k4free_le24.g6 (curated, filtered) with --family reg.
"""

import argparse
import gzip
import pickle
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
WORK = DATA / "work"

sys.path.insert(0, str(ROOT / "src"))

from sparsehalves.graphs import Graph, bits  # noqa: E402
from sparsehalves.graph6 import to_graph6, parse_graph6  # noqa: E402

# Known class counts: all graphs (n=1..9) and triangle-free graphs (n=1..10).
# The triangle-free row is cross-validated for n <= 9 by filtering the
# A000088-validated all-graphs corpus.
COUNT_ALL = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346, 9: 274668}
COUNT_TF = {1: 1, 2: 2, 3: 3, 4: 7, 5: 14, 6: 38, 7: 107, 8: 410, 9: 1897, 10: 12172}

WL_ROUNDS = 3


def _component_sizes(rows, n):
    """Per-vertex size of the containing connected component."""
    unseen = (1 << n) - 1
    sizes = [0] * n
    while unseen:
        start = unseen & -unseen
        comp = start
        frontier = start
        unseen ^= start
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= rows[v]
            frontier = nxt & unseen
            comp |= frontier
            unseen &= ~frontier
        size = comp.bit_count()
        for v in bits(comp):
            sizes[v] = size
    return sizes


def wl_key(rows, n):
    """Isomorphism-invariant bucket key and refined colors.

    Initial colors carry degree, triangle count, and component size; the key
    adds the adjacent-pair codegree multiset.  Strong enough that bucket
    members are almost always isomorphic, which keeps the exact check cheap.
    """
    nbrs = [tuple(bits(r)) for r in rows]
    deg = [len(x) for x in nbrs]
    tri = []
    codeg = []
    for v in range(n):
        s = 0
        rv = rows[v]
        for u in nbrs[v]:
            cd = (rows[u] & rv).bit_count()
            s += cd
            if u > v:
                codeg.append(cd)
        tri.append(s // 2)
    csize = _component_sizes(rows, n)
    sigs = list(zip(deg, tri, csize))
    ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
    colors = [ranks[s] for s in sigs]
    for _ in range(WL_ROUNDS):
        sigs = [
            (colors[v], tuple(sorted(colors[u] for u in nbrs[v]))) for v in range(n)
        ]
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if new == colors:
            break
        colors = new
    key = (n, sum(deg) // 2, tuple(sorted(colors)), tuple(sorted(codeg)))
    return key, colors


def iso_context(colors, n):
    """Search order and color index reused across isomorphism tests."""
    class_size = {}
    for c in colors:
        class_size[c] = class_size.get(c, 0) + 1
    order = tuple(sorted(range(n), key=lambda v: (class_size[colors[v]], colors[v], v)))
    by_color = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)
    return order, by_color


def isomorphic(rows1, col1, order1, rows2, by_color2, n):
    """Exact isomorphism test; assumes identical sorted color multisets."""
    mapping = [-1] * n

    def place(i, used):
        if i == n:
            return True
        v = order1[i]
        for w in by_color2.get(col1[v], ()):
            if used >> w & 1:
                continue
            ok = True
            for j in range(i):
                a = order1[j]
                if (rows1[v] >> a & 1) != (rows2[w] >> mapping[a] & 1):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                if place(i + 1, used | (1 << w)):
                    return True
        return False

    return place(0, 0)


def independent_sets(rows, n):
    """All independent-set masks of the graph (including the empty set)."""
    out = []

    def grow(chosen, candidates):
        out.append(chosen)
        c = candidates
        while c:
            vb = c & -c
            c ^= vb
            v = vb.bit_length() - 1
            grow(chosen | vb, c & ~rows[v])

    grow(0, (1 << n) - 1)
    return out


def level_paths(family, k):
    return WORK / f"{family}_n{k}.g6", WORK / f"{family}_n{k}.state.pkl"


def load_level(family, k):
    path, _ = level_paths(family, k)
    if not path.exists():
        return None
    reps = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                reps.append(parse_graph6(line).adj)
    return reps


def run_level(family, k, parents, budget_s):
    """Extend (k-1)-vertex parents to level k; returns reps or None if the
    budget ran out (state checkpointed)."""
    out_path, state_path = level_paths(family, k)
    if out_path.exists():
        return load_level(family, k)
    start_parent = 0
    buckets = {}
    reps = []
    if state_path.exists():
        with open(state_path, "rb") as fh:
            start_parent, reps, buckets = pickle.load(fh)
        print(f"[{family} n={k}] resuming at parent {start_parent}, {len(reps)} classes so far")
    t0 = time.time()
    new_bit = 1 << (k - 1)
    for pi in range(start_parent, len(parents)):
        prows = parents[pi]
        if family == "tf":
            nb_masks = independent_sets(prows, k - 1)
        else:
            nb_masks = range(1 << (k - 1))
        for nb in nb_masks:
            rows = tuple(
                (prows[v] | new_bit) if (nb >> v & 1) else prows[v] for v in range(k - 1)
            ) + (nb,)
            key, colors = wl_key(rows, k)
            bucket = buckets.get(key)
            if bucket is None:
                order, by_color = iso_context(colors, k)
                buckets[key] = [(rows, colors, order, by_color)]
                reps.append(rows)
                continue
            order, by_color = iso_context(colors, k)
            if any(
                isomorphic(rows, colors, order, r2, bc2, k)
                for r2, _c2, _o2, bc2 in bucket
            ):
                continue
            bucket.append((rows, colors, order, by_color))
            reps.append(rows)
        if time.time() - t0 > budget_s:
            with open(state_path, "wb") as fh:
                pickle.dump((pi + 1, reps, buckets), fh, protocol=pickle.HIGHEST_PROTOCOL)
            done = pi + 1 - start_parent
            print(
                f"[{family} n={k}] budget hit: {pi + 1}/{len(parents)} parents, "
                f"{len(reps)} classes, {done / (time.time() - t0):.1f} parents/s"
            )
            return None
    expected = (COUNT_ALL if family == "all" else COUNT_TF)[k]
    if len(reps) != expected:
        raise AssertionError(
            f"{family} n={k}: generated {len(reps)} classes, expected {expected}"
        )
    with open(out_path, "w") as fh:
        for rows in reps:
            fh.write(to_graph6(Graph(k, rows)) + "\n")
    if state_path.exists():
        state_path.unlink()
    print(f"[{family} n={k}] done: {len(reps)} classes in {time.time() - t0:.1f}s")
    return reps


def assemble(family, max_n, out_name):
    lines = []
    for k in range(1, max_n + 1):
        path, _ = level_paths(family, k)
        lines.extend(path.read_text().splitlines())
    with gzip.open(DATA / out_name, "wt") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {DATA / out_name} ({len(lines)} graphs)")


def run_family(family, budget_s):
    max_n = 9 if family == "all" else 10
    WORK.mkdir(parents=True, exist_ok=True)
    reps = [(0,)]  # the single 1-vertex graph
    path1, _ = level_paths(family, 1)
    if not path1.exists():
        path1.write_text(to_graph6(Graph(1, (0,))) + "\n")
    deadline = time.time() + budget_s
    for k in range(2, max_n + 1):
        remaining = deadline - time.time()
        if remaining <= 5:
            print(f"[{family}] out of budget before level {k}")
            return 3
        got = run_level(family, k, reps, remaining)
        if got is None:
            return 3
        reps = got
    out = "graphs_all_le9.g6.gz" if family == "all" else "triangle_free_le10.g6.gz"
    if not (DATA / out).exists():
        assemble(family, max_n, out)
    return 0


def build_regular_corpus():
    """Curated regular K4-free graphs with n <= 24, verified by predicate."""
    from sparsehalves.graphs import (
        blow_up,
        build_graph,
        clique_check,
        cycle_graph,
        petersen_graph,
        turan_graph,
    )

    def circulant(n, conns):
        edges = []
        for i in range(n):
            for d in conns:
                edges.append((i, (i + d) % n))
        return build_graph(n, edges)

    def hypercube(d):
        return build_graph(
            1 << d,
            [(u, u ^ (1 << b)) for u in range(1 << d) for b in range(d) if u < u ^ (1 << b)],
        )

    candidates = []
    for n in (6, 9, 12, 15, 18, 21, 24):
        candidates.append((f"turan3_{n}", turan_graph(3, n)))
    for n in (4, 8, 12, 16, 20, 24):
        candidates.append((f"turan2_{n}", turan_graph(2, n)))
    for k in (1, 2, 3, 4):
        candidates.append((f"c5blow_{k}", blow_up(cycle_graph(5), [k] * 5)))
    candidates.append(("petersen", petersen_graph()))
    for n in (5, 8, 13, 21):
        candidates.append((f"cycle_{n}", cycle_graph(n)))
    for n in (7, 10, 13, 16, 19, 22):
        candidates.append((f"circ12_{n}", circulant(n, (1, 2))))
    candidates.append(("co_c7", circulant(7, (2, 3))))
    candidates.append(("paley13", circulant(13, (1, 3, 4))))
    candidates.append(("circ125_10", circulant(10, (1, 2, 5))))
    candidates.append(("mobius8", circulant(8, (1, 4))))
    candidates.append(("mobius12", circulant(12, (1, 6))))
    candidates.append(("cube3", hypercube(3)))
    candidates.append(("cube4", hypercube(4)))
    candidates.append(("triangle3", turan_graph(3, 3)))

    kept = []
    seen = set()
    for name, G in candidates:
        if G.n > 24 or not G.is_regular():
            print(f"  drop {name}: not regular or too big")
            continue
        if clique_check(G, 4)[0]:
            print(f"  drop {name}: contains K4")
            continue
        line = to_graph6(G)
        if line in seen:
            print(f"  drop {name}: duplicate encoding")
            continue
        seen.add(line)
        kept.append((name, line))
    path = DATA / "regular_k4free_le24.g6"
    with open(path, "w") as fh:
        for name, line in kept:
            fh.write(line + "\n")
    print(f"wrote {path} ({len(kept)} graphs): {', '.join(n for n, _ in kept)}")
    return 0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=("all", "tf", "reg"), required=True)
    ap.add_argument("--budget-seconds", type=float, default=480.0)
    args = ap.parse_args()
    DATA.mkdir(exist_ok=True)
    if args.family == "reg":
        return build_regular_corpus()
    return run_family(args.family, args.budget_seconds)


if __name__ == "__main__":
    sys.exit(main())
