"""Shared fixtures: corpus access and deterministic random graphs."""

import gzip
import random
from pathlib import Path

import pytest

from sparsehalves.graph6 import parse_graph6
from sparsehalves.graphs import build_graph

DATA = Path(__file__).resolve().parent.parent / "data"


def corpus_lines(name):
    """Raw graph6 lines of a shipped corpus; skips if not generated yet."""
    path = DATA / name
    if not path.exists():
        pytest.skip(f"corpus {name} missing; run scripts/generate_corpora.py")
    opener = gzip.open if name.endswith(".gz") else open
    with opener(path, "rt") as fh:
        return [line.strip() for line in fh if line.strip()]


def corpus_graphs(name, max_n=None, predicate=None):
    """Parse a corpus lazily; yields (line, Graph)."""
    for line in corpus_lines(name):
        G = parse_graph6(line)
        if max_n is not None and G.n > max_n:
            continue
        if predicate is not None and not predicate(G):
            continue
        yield line, G


def random_graph(rng, n, p):
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return build_graph(n, edges)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
