"""graph6 text codec (one undirected graph per ASCII line).

Implements the standard dense encoding: an N(n) size prefix followed by the
upper triangle in column order, six bits per printable byte offset by 63.
The optional ``>>graph6<<`` header is tolerated on input and never emitted.
"""

from __future__ import annotations

from .errors import Graph6Error
from .graphs import Graph

HEADER = ">>graph6<<"


def _encode_n(n):
    if n < 0:
        raise Graph6Error("negative vertex count")
    if n <= 62:
        return bytes([n + 63])
    if n <= 258047:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    if n <= 68719476735:
        return bytes([126, 126] + [63 + (n >> s & 63) for s in (30, 24, 18, 12, 6, 0)])
    raise Graph6Error("vertex count too large for graph6")


def _decode_n(data):
    """Return (n, bytes_consumed); validates the length prefix."""
    if not data:
        raise Graph6Error("empty graph6 line")
    if data[0] != 126:
        n = data[0] - 63
        if not 0 <= n <= 62:
            raise Graph6Error(f"bad size byte {data[0]}")
        return n, 1
    if len(data) >= 2 and data[1] != 126:
        if len(data) < 4:
            raise Graph6Error("truncated 3-byte size prefix")
        chunk = data[1:4]
        if any(not 63 <= b <= 126 for b in chunk):
            raise Graph6Error("bad byte in size prefix")
        n = 0
        for b in chunk:
            n = n << 6 | (b - 63)
        if n <= 62:
            raise Graph6Error("non-canonical size prefix")
        return n, 4
    if len(data) < 8:
        raise Graph6Error("truncated 6-byte size prefix")
    chunk = data[2:8]
    if any(not 63 <= b <= 126 for b in chunk):
        raise Graph6Error("bad byte in size prefix")
    n = 0
    for b in chunk:
        n = n << 6 | (b - 63)
    if n <= 258047:
        raise Graph6Error("non-canonical size prefix")
    return n, 8


def to_graph6(G: Graph) -> str:
    out = bytearray(_encode_n(G.n))
    acc = 0
    nbits = 0
    for v in range(1, G.n):
        col = G.adj[v]
        for u in range(v):
            acc = acc << 1 | (col >> u & 1)
            nbits += 1
            if nbits == 6:
                out.append(acc + 63)
                acc = 0
                nbits = 0
    if nbits:
        out.append((acc << (6 - nbits)) + 63)
    return out.decode("ascii")


def parse_graph6(line) -> Graph:
    text = line.strip()
    if text.startswith(HEADER):
        text = text[len(HEADER):]
    data = text.encode("ascii")
    n, used = _decode_n(data)
    body = data[used:]
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    if len(body) != need:
        raise Graph6Error(f"expected {need} body bytes for n={n}, got {len(body)}")
    if any(not 63 <= b <= 126 for b in body):
        raise Graph6Error("byte outside graph6 range in body")
    rows = [0] * n
    idx = 0
    for b in body:
        val = b - 63
        for shift in range(5, -1, -1):
            if idx >= nbits:
                if (val >> shift) & 1:
                    raise Graph6Error("nonzero padding bits")
                continue
            if (val >> shift) & 1:
                # bit idx in column order: column v, row u
                v = _col_of(idx)
                u = idx - v * (v - 1) // 2
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            idx += 1
    return Graph(n, rows)


def _col_of(idx):
    # smallest v with v(v+1)/2 > idx, minus nothing: column of triangle index
    v = int(((2 * idx) ** 0.5))
    while v * (v - 1) // 2 > idx:
        v -= 1
    while (v + 1) * v // 2 <= idx:
        v += 1
    return v


def iter_graph6(lines):
    """Parse an iterable of graph6 lines, skipping blanks; yields
    (line_number, Graph)."""
    for i, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        yield i, parse_graph6(line)


def load_graph6_file(path):
    import gzip

    opener = gzip.open if str(path).endswith(".gz") else open
    with opener(path, "rt") as fh:
        return [g for _, g in iter_graph6(fh)]
