"""Directed graphs over dense integer node ids, plus edge-list IO.

Graphs are stored in CSR form (``indptr``/``indices``) with each node's
out-neighbors sorted and de-duplicated.  Instances are immutable; the
only "mutation" is :func:`add_edge`, which returns a new graph.
"""

from __future__ import annotations

import io
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class GraphError(ValueError):
    pass


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class DirectedGraph:
    """Immutable directed graph on nodes ``0..n-1``.

    Parallel edges collapse on construction.  Self-loops are kept and
    count toward the out-degree.
    """

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        # Trusted constructor: callers must pass sorted, unique CSR rows.
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    @property
    def num_edges(self) -> int:
        return int(self.indices.shape[0])

    @cached_property
    def outdeg(self) -> np.ndarray:
        deg = np.diff(self.indptr)
        deg.flags.writeable = False
        return deg

    @cached_property
    def sinks(self) -> np.ndarray:
        mask = self.outdeg == 0
        mask.flags.writeable = False
        return mask

    def successors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    @property
    def out_adj(self) -> list[np.ndarray]:
        return [self.successors(i) for i in range(self.n)]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.successors(u)
        pos = np.searchsorted(row, v)
        return bool(pos < row.shape[0] and row[pos] == v)

    def edges(self) -> np.ndarray:
        """Edge array of shape ``(m, 2)`` in (source, target) order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.outdeg)
        return np.column_stack([src, self.indices])

    def in_neighbors(self, v: int) -> np.ndarray:
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.outdeg)
        return np.unique(src[self.indices == v])

    @cached_property
    def walk_matrix(self) -> sp.csr_matrix:
        """Row-normalized adjacency ``W``; sink rows are left empty.

        ``W @ f`` averages ``f`` over out-neighbors and ``W.T @ v`` pushes
        mass along edges.  The uniform sink rows are handled by callers.
        """
        deg = self.outdeg.astype(float)
        data = np.repeat(np.divide(1.0, deg, out=np.zeros_like(deg), where=deg > 0), self.outdeg)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def walk_matrix_t(self) -> sp.csr_matrix:
        return self.walk_matrix.T.tocsr()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.indptr.tobytes(), self.indices.tobytes()))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.num_edges})"


def build_graph(n: int, edges: Sequence[tuple[int, int]] | np.ndarray) -> DirectedGraph:
    """Build a graph from an edge sequence; duplicates collapse.

    Raises :class:`GraphError` naming the first edge with an endpoint
    outside ``[0, n)``.
    """
    if n < 0:
        raise GraphError(f"node count must be non-negative, got {n}")
    arr = np.asarray(edges, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise GraphError("edges must be a sequence of (u, v) pairs")
    bad = (arr < 0) | (arr >= n)
    if bad.any():
        idx = int(np.flatnonzero(bad.any(axis=1))[0])
        u, v = arr[idx]
        raise GraphError(f"edge ({u}, {v}) has an endpoint out of range for n={n}")
    # Sort by (source, target) and drop repeats.
    keys = np.unique(arr[:, 0] * max(n, 1) + arr[:, 1])
    src = keys // max(n, 1)
    dst = keys % max(n, 1)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return DirectedGraph(n, indptr, dst.astype(np.int64))


def add_edge(g: DirectedGraph, u: int, v: int) -> DirectedGraph:
    """Return ``g`` plus the edge ``u -> v`` (``g`` itself if present)."""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise GraphError(f"edge ({u}, {v}) has an endpoint out of range for n={g.n}")
    row = g.successors(u)
    pos = int(np.searchsorted(row, v))
    if pos < row.shape[0] and row[pos] == v:
        return g
    at = int(g.indptr[u]) + pos
    indices = np.insert(g.indices, at, v)
    indptr = g.indptr.copy()
    indptr[u + 1:] += 1
    return DirectedGraph(g.n, indptr, indices)


def with_backlinks(g: DirectedGraph, sources: Iterable[int], x: int) -> DirectedGraph:
    """``G(V, E ∪ (S × {x}))`` built in one pass."""
    extra = [(int(s), x) for s in sources]
    if not extra:
        return g
    return build_graph(g.n, np.vstack([g.edges(), np.asarray(extra, dtype=np.int64)]))


def load_edge_list(data: bytes | str) -> DirectedGraph:
    """Parse the edge-list text format.

    ``#`` lines are comments, the first remaining line is the node count
    and every later line is ``u v``.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            values = [int(p, 10) for p in parts]
        except ValueError:
            raise EdgeListParseError(lineno, f"expected integers, got {line!r}") from None
        if any(val < 0 for val in values):
            raise EdgeListParseError(lineno, "negative node id")
        if n is None:
            if len(values) != 1:
                raise EdgeListParseError(lineno, "first line must hold the node count")
            n = values[0]
            continue
        if len(values) != 2:
            raise EdgeListParseError(lineno, f"expected 'u v', got {line!r}")
        u, v = values
        if u >= n or v >= n:
            bad = u if u >= n else v
            raise EdgeListParseError(lineno, f"endpoint {bad} out of range for n={n}")
        edges.append((u, v))
    if n is None:
        raise EdgeListParseError(0, "missing node count")
    return build_graph(n, edges)


def save_edge_list(g: DirectedGraph) -> bytes:
    buf = io.StringIO()
    buf.write(f"{g.n}\n")
    for u, v in g.edges():
        buf.write(f"{u} {v}\n")
    return buf.getvalue().encode("utf-8")


def read_graph(path) -> DirectedGraph:
    with open(path, "rb") as fh:
        return load_edge_list(fh.read())


def write_graph(g: DirectedGraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(save_edge_list(g))
