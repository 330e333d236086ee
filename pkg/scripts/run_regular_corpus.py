#!/usr/bin/env python3
"""Sweep the regular K4-free corpus: routes vs oracle vs the n^2/18 line.

Prints one row per graph and a summary; exits nonzero if any instance beats
the conjectured threshold at oracle level (it never should).
"""

import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from sparsehalves.graph6 import parse_graph6  # noqa: E402
from sparsehalves.oracle import is_balanced_complete_multipartite  # noqa: E402
from sparsehalves.routes import make_bipartite, sparse_half_report  # noqa: E402

CORPUS = ROOT / "data" / "regular_k4free_le24.g6"


def main():
    if not CORPUS.exists():
        print("corpus missing; run scripts/generate_corpora.py --family reg")
        return 2
    rows = []
    violations = 0
    for line in CORPUS.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        G = parse_graph6(line)
        t0 = time.perf_counter()
        rep = sparse_half_report(G)
        elapsed = time.perf_counter() - t0
        removed = make_bipartite(G)[2] if G.n % 2 == 0 else None
        rows.append(
            (
                line,
                G.n,
                G.edge_count,
                float(G.density_c),
                rep.best.achieved,
                rep.best.route,
                rep.flag,
                rep.oracle.minimum if rep.oracle else None,
                removed,
                elapsed,
            )
        )
        if rep.flag == "above":
            violations += 1
    header = (
        "graph6",
        "n",
        "e",
        "c",
        "e(S)",
        "route",
        "flag",
        "oracle",
        "removed",
        "sec",
    )
    widths = [max(len(str(r[i])) for r in rows + [header]) for i in range(len(header))]
    for r in [header] + rows:
        print("  ".join(str(x).ljust(w) for x, w in zip(r, widths)))
    equal = sum(1 for r in rows if r[6] == "equal")
    print(
        f"\n{len(rows)} graphs; {equal} extremal (flag=equal), "
        f"{violations} above the n^2/18 line"
    )
    if violations:
        print("!! conjecture violation candidates above; investigate immediately")
        return 1
    # equality must coincide with the balanced 3-partite structure
    for r in rows:
        if r[6] == "equal":
            assert is_balanced_complete_multipartite(parse_graph6(r[0]), 3)
    return 0


if __name__ == "__main__":
    sys.exit(main())
