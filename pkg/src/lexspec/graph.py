"""Simple undirected graphs: representation, I/O, generators and the
explicit lexicographic product.

Vertices are numbered 1..n in every user-facing format (edge lists, README,
CLI) and stored 0-based internally.  The product H[G] places vertex (h, g)
at 1-based index (h - 1) * n + g, i.e. row-major with the H coordinate
outermost.  The matrix-free operators in :mod:`lexspec.lexpower` use the same
layout, so block structures line up with the dense oracle.
"""

from __future__ import annotations

import os
from itertools import combinations

import numpy as np

from .errors import GraphParseError, OracleTooLarge

DEFAULT_ORACLE_CAP = 20_000
FAMILIES = ("complete", "path", "cycle", "star", "complete_bipartite", "empty", "circulant")


def oracle_cap(cap=None):
    """Resolve the explicit-construction cap (argument, then LEXSPEC_CAP, then default)."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("LEXSPEC_CAP")
    if env:
        return int(env)
    return DEFAULT_ORACLE_CAP


class Graph:
    """Immutable simple graph stored as a dense symmetric 0/1 adjacency matrix."""

    __slots__ = ("_adj", "label")

    def __init__(self, adjacency, label=None):
        adj = np.array(adjacency, dtype=np.int64, copy=True)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"adjacency must be square, got shape {adj.shape}")
        if adj.shape[0] < 1:
            raise ValueError("a graph needs at least one vertex")
        if not np.isin(adj, (0, 1)).all():
            raise ValueError("adjacency entries must be 0 or 1")
        if not (adj == adj.T).all():
            raise ValueError("adjacency must be symmetric")
        if np.diag(adj).any():
            raise ValueError("adjacency must have a zero diagonal (no loops)")
        adj.setflags(write=False)
        self._adj = adj
        self.label = label

    @classmethod
    def from_edges(cls, n, edges, label=None, one_based=False):
        adj = np.zeros((n, n), dtype=np.int64)
        off = 1 if one_based else 0
        for u, v in edges:
            adj[u - off, v - off] = adj[v - off, u - off] = 1
        return cls(adj, label=label)

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def order(self) -> int:
        return self._adj.shape[0]

    def __len__(self):
        return self.order

    def edges(self):
        """Edges as 0-based pairs (i, j) with i < j, in row-major order."""
        i, j = np.nonzero(np.triu(self._adj, 1))
        return list(zip(i.tolist(), j.tolist()))

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.order == other.order and bool((self._adj == other._adj).all())

    def __hash__(self):
        return hash((self.order, self._adj.tobytes()))

    def __repr__(self):
        name = f" {self.label!r}" if self.label else ""
        return f"<Graph{name} n={self.order} m={edge_count(self)}>"


def edge_count(G: Graph) -> int:
    return int(G.adjacency.sum()) // 2


def is_regular(G: Graph):
    """Common degree k if G is k-regular, else None."""
    deg = G.degrees()
    if (deg == deg[0]).all():
        return int(deg[0])
    return None


# -- I/O ---------------------------------------------------------------------

def is_connected(G: Graph) -> bool:
    n = G.order
    if n == 0:
        return True
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        frontier = (G.adjacency[frontier].sum(axis=0) > 0) & ~seen
        seen |= frontier
    return bool(seen.all())


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list format.

    The first non-comment line holds the order n; each further line holds an
    edge ``u v`` with 1 <= u, v <= n.  Lines starting with ``#`` and blank
    lines are ignored; duplicate edges collapse.
    """
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1:
                raise GraphParseError(f"expected the vertex count, got {line!r}", lineno)
            try:
                n = int(parts[0])
            except ValueError:
                raise GraphParseError(f"vertex count is not an integer: {line!r}", lineno) from None
            if n < 1:
                raise GraphParseError(f"vertex count must be positive, got {n}", lineno)
            continue
        if len(parts) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex in {line!r}", lineno) from None
        for w in (u, v):
            if not 1 <= w <= n:
                raise GraphParseError(f"vertex {w} out of range 1..{n}", lineno)
        if u == v:
            raise GraphParseError(f"self-loop at vertex {u}", lineno)
        edges.add((min(u, v), max(u, v)))
    if n is None:
        raise GraphParseError("empty input: missing vertex count")
    return Graph.from_edges(n, sorted(edges), one_based=True)


def emit_edge_list(G: Graph) -> str:
    lines = [str(G.order)]
    lines += [f"{i + 1} {j + 1}" for i, j in G.edges()]
    return "\n".join(lines) + "\n"


def parse_graph6(text: str) -> Graph:
    """Decode a short-format graph6 string (order below 63)."""
    data = text.strip()
    if data.startswith(">>graph6<<"):
        data = data[len(">>graph6<<"):]
    if not data:
        raise GraphParseError("empty graph6 string")
    vals = []
    for pos, ch in enumerate(data):
        code = ord(ch) - 63
        if not 0 <= code <= 63:
            raise GraphParseError(f"invalid graph6 character {ch!r} at offset {pos}")
        vals.append(code)
    n = vals[0]
    if n == 63:
        raise GraphParseError("long-format graph6 (n >= 63) is not supported")
    if n < 1:
        raise GraphParseError("graph6 order must be positive")
    nbits = n * (n - 1) // 2
    nchars = -(-nbits // 6)
    body = vals[1:]
    if len(body) != nchars:
        raise GraphParseError(f"expected {nchars} data characters for n={n}, got {len(body)}")
    bits = [(b >> (5 - t)) & 1 for b in body for t in range(6)]
    if any(bits[nbits:]):
        raise GraphParseError("nonzero padding bits")
    adj = np.zeros((n, n), dtype=np.int64)
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                adj[i, j] = adj[j, i] = 1
            k += 1
    return Graph(adj)


def emit_graph6(G: Graph) -> str:
    n = G.order
    if n >= 63:
        raise ValueError("only the short graph6 format (n < 63) is supported")
    bits = [int(G.adjacency[i, j]) for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


# -- generators --------------------------------------------------------------

def generate(family: str, *params: int) -> Graph:
    """Build a named graph.

    Vertex numbering (1-based):

    * ``complete(n)``, ``empty(n)``: vertices 1..n.
    * ``path(n)``: the path 1-2-...-n.
    * ``cycle(n)``: 1-2-...-n-1, n >= 3.
    * ``star(k)``: K_{1,k}, center 1 and leaves 2..k+1.
    * ``complete_bipartite(m, n)``: parts {1..m} and {m+1..m+n}.
    * ``circulant(n, d1, d2, ...)``: i ~ i +/- d (mod n) for each jump d.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if any(p < 1 for p in params):
        raise ValueError(f"{family}: parameters must be positive, got {params}")
    expected = {"complete_bipartite": 2}.get(family, 1)
    if family == "circulant":
        if len(params) < 1:
            raise ValueError("circulant needs the order")
    elif len(params) != expected:
        raise ValueError(f"{family} takes {expected} parameter(s), got {len(params)}")

    label = f"{family}({','.join(map(str, params))})"
    if family == "complete":
        (n,) = params
        return Graph(np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64), label)
    if family == "empty":
        (n,) = params
        return Graph(np.zeros((n, n), dtype=np.int64), label)
    if family == "path":
        (n,) = params
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], label)
    if family == "cycle":
        (n,) = params
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], label)
    if family == "star":
        (k,) = params
        return Graph.from_edges(k + 1, [(0, i) for i in range(1, k + 1)], label)
    if family == "complete_bipartite":
        m, n = params
        return Graph.from_edges(m + n, [(i, m + j) for i in range(m) for j in range(n)], label)
    n, *jumps = params
    edges = {tuple(sorted((i, (i + d) % n))) for i in range(n) for d in jumps if d % n}
    return Graph.from_edges(n, sorted(edges), label)


def parse_family(text: str) -> Graph:
    """Parse ``family:p1,p2`` (e.g. ``star:2``, ``complete_bipartite:2,2``)."""
    name, _, args = text.partition(":")
    params = [int(a) for a in args.split(",") if a.strip()] if args else []
    return generate(name.strip(), *params)


def random_graph(n, rng, density=None) -> Graph:
    """Erdos-Renyi G(n, q); q is drawn uniformly from [0.2, 0.8] when not given."""
    q = rng.uniform(0.2, 0.8) if density is None else density
    upper = np.triu(rng.random((n, n)) < q, 1).astype(np.int64)
    return Graph(upper + upper.T)


def random_regular(rng, max_order=6) -> Graph:
    """A random regular graph from the circulant, complete and balanced
    complete bipartite families."""
    kind = rng.choice(["circulant", "complete", "complete_bipartite"])
    if kind == "complete":
        return generate("complete", int(rng.integers(1, max_order + 1)))
    if kind == "complete_bipartite":
        half = int(rng.integers(1, max_order // 2 + 1))
        return generate("complete_bipartite", half, half)
    n = int(rng.integers(1, max_order + 1))
    jumps = [d for d in range(1, n // 2 + 1) if rng.random() < 0.5]
    return generate("circulant", n, *jumps) if jumps else generate("empty", n)


# -- explicit product (oracle side) -----------------------------------------

def lex_product_explicit(H: Graph, G: Graph, cap=None) -> Graph:
    """Materialize H[G] as A(H) (x) J_n + I_p (x) A(G).

    (h1, g1) ~ (h2, g2) iff h1 ~ h2 in H, or h1 == h2 and g1 ~ g2 in G.
    """
    p, n = H.order, G.order
    limit = oracle_cap(cap)
    if p * n > limit:
        raise OracleTooLarge(f"oracle too large: H[G] has {p * n} vertices, cap is {limit}")
    adj = np.kron(H.adjacency, np.ones((n, n), dtype=np.int64))
    adj += np.kron(np.eye(p, dtype=np.int64), G.adjacency)
    return Graph(adj, label=f"{H.label or 'H'}[{G.label or 'G'}]")


def lex_power_explicit(G: Graph, k: int, cap=None) -> Graph:
    """G^k built as G[G^(k-1)] with the explicit construction."""
    if k < 1:
        raise ValueError("power must be >= 1")
    P = G
    for _ in range(k - 1):
        P = lex_product_explicit(G, P, cap=cap)
    return Graph(P.adjacency, label=f"{G.label or 'G'}^{k}")


def all_labelled_graphs(n):
    """Every labelled simple graph on n vertices (2^(n choose 2) of them)."""
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [e for b, e in enumerate(pairs) if mask >> b & 1])
