"""Sparse directed-graph storage, ingestion and structural analysis.

Graphs are stored row-major (CSR) because every kernel operation consumes
whole rows; column access is never needed in the hot path.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import GraphFormatError, NegativeWeightError, NonSquareError


@dataclass(frozen=True)
class Graph:
    """Immutable weighted directed graph in CSR layout.

    ``indptr``/``indices``/``data`` follow the usual CSR convention;
    ``row_sums[i]`` caches the total out-weight of node ``i``.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    row_sums: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError("graph must have at least one node")
        if np.any(self.data < 0):
            raise NegativeWeightError("negative edge weight")
        if self.row_sums is None:
            object.__setattr__(self, "row_sums", self._recompute_row_sums())

    def _recompute_row_sums(self):
        sums = np.zeros(self.n)
        np.add.at(sums, np.repeat(np.arange(self.n), np.diff(self.indptr)), self.data)
        return sums

    @property
    def nnz(self):
        return len(self.data)

    def row(self, i):
        """(targets, weights) of row i as array views."""
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.indices[lo:hi], self.data[lo:hi]

    def csr(self) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.data, self.indices, self.indptr), shape=(self.n, self.n)
        )

    def to_dense(self) -> np.ndarray:
        return self.csr().toarray()

    @classmethod
    def from_dense(cls, C) -> "Graph":
        C = np.asarray(C, dtype=float)
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise NonSquareError(f"expected a square matrix, got shape {C.shape}")
        m = sp.csr_matrix(C)
        return cls(C.shape[0], m.indptr.astype(np.int64), m.indices.astype(np.int64),
                   m.data.astype(float))

    @classmethod
    def from_edges(cls, n, edges) -> "Graph":
        """Build from an iterable of (src, dst, weight); duplicates are summed."""
        edges = list(edges)
        if edges:
            src, dst, w = (np.asarray(a) for a in zip(*edges))
        else:
            src = dst = np.zeros(0, dtype=np.int64)
            w = np.zeros(0)
        m = sp.coo_matrix((w.astype(float), (src, dst)), shape=(n, n)).tocsr()
        m.sum_duplicates()
        return cls(n, m.indptr.astype(np.int64), m.indices.astype(np.int64),
                   m.data.astype(float))


@dataclass(frozen=True)
class StructureReport:
    strongly_connected: bool
    aperiodic: bool  # reported only when strongly connected
    dangling_nodes: list
    zero_columns: list


def _as_text_lines(source):
    if isinstance(source, (str, bytes)):
        source = io.BytesIO(source.encode() if isinstance(source, str) else source)
    for raw in source:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw


def load_edge_list(source, weighted=True) -> Graph:
    """Parse a tab-separated edge list: ``src<TAB>dst[<TAB>weight]``.

    ``#`` starts a comment; the optional directive ``#n <count>`` declares a
    minimum node count (for isolated trailing nodes).  Node count is otherwise
    1 + the largest index seen.  Duplicate edges have their weights summed.
    """
    edges = []
    declared_n = 0
    max_index = -1
    seen_any = False
    for lineno, line in enumerate(_as_text_lines(source), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            parts = stripped[1:].split()
            if parts and parts[0] == "n":
                try:
                    declared_n = max(declared_n, int(parts[1]))
                except (IndexError, ValueError):
                    raise GraphFormatError("bad '#n <count>' directive", line=lineno)
            continue
        seen_any = True
        fields = stripped.split("\t")
        if len(fields) == 1:
            fields = stripped.split()
        if len(fields) not in (2, 3):
            raise GraphFormatError(f"expected 2 or 3 fields, got {len(fields)}",
                                   line=lineno)
        try:
            src, dst = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphFormatError("non-integer node index", line=lineno)
        if src < 0 or dst < 0:
            raise GraphFormatError("negative node index", line=lineno)
        if len(fields) == 3 and weighted:
            try:
                w = float(fields[2])
            except ValueError:
                raise GraphFormatError("non-numeric weight", line=lineno)
        else:
            w = 1.0
        if w < 0:
            raise NegativeWeightError(f"negative weight {w}", line=lineno)
        edges.append((src, dst, w))
        max_index = max(max_index, src, dst)
    if not seen_any and declared_n == 0:
        raise GraphFormatError("empty edge list")
    n = max(max_index + 1, declared_n)
    return Graph.from_edges(n, edges)


def load_matrix_market(source) -> Graph:
    """Parse a MatrixMarket coordinate file (real or pattern, general)."""
    lines = _as_text_lines(source)
    try:
        header = next(lines)
    except StopIteration:
        raise GraphFormatError("empty stream")
    parts = header.lower().split()
    if len(parts) < 4 or parts[0] != "%%matrixmarket" or parts[1] != "matrix" \
            or parts[2] != "coordinate":
        raise GraphFormatError("unsupported MatrixMarket header", line=1)
    pattern = parts[3] == "pattern"
    if not pattern and parts[3] != "real" and parts[3] != "integer":
        raise GraphFormatError(f"unsupported field type '{parts[3]}'", line=1)
    if len(parts) > 4 and parts[4] != "general":
        raise GraphFormatError(f"unsupported symmetry '{parts[4]}'", line=1)

    dims = None
    edges = []
    for lineno, line in enumerate(lines, start=2):
        stripped = line.strip()
        if not stripped or stripped.startswith("%"):
            continue
        fields = stripped.split()
        if dims is None:
            if len(fields) != 3:
                raise GraphFormatError("bad size line", line=lineno)
            rows, cols, _ = (int(f) for f in fields)
            if rows != cols:
                raise NonSquareError(f"{rows}x{cols} matrix is not square",
                                     line=lineno)
            dims = rows
            continue
        try:
            i, j = int(fields[0]) - 1, int(fields[1]) - 1
            w = 1.0 if pattern else float(fields[2])
        except (IndexError, ValueError):
            raise GraphFormatError("bad coordinate entry", line=lineno)
        if not (0 <= i < dims and 0 <= j < dims):
            raise GraphFormatError("index out of range", line=lineno)
        if w < 0:
            raise NegativeWeightError(f"negative weight {w}", line=lineno)
        edges.append((i, j, w))
    if dims is None:
        raise GraphFormatError("missing size line")
    return Graph.from_edges(dims, edges)


def normalize_dangling(g: Graph) -> Graph:
    """Replace every zero-sum row with a row of all ones (diagonal included)."""
    dangling = np.flatnonzero(g.row_sums == 0)
    if len(dangling) == 0:
        return g
    counts = np.diff(g.indptr).astype(np.int64)
    counts[dangling] = g.n
    indptr = np.concatenate([[0], np.cumsum(counts)])
    indices = np.empty(indptr[-1], dtype=np.int64)
    data = np.empty(indptr[-1])
    dang = set(dangling.tolist())
    for i in range(g.n):
        lo = indptr[i]
        if i in dang:
            indices[lo:lo + g.n] = np.arange(g.n)
            data[lo:lo + g.n] = 1.0
        else:
            tgt, w = g.row(i)
            indices[lo:lo + len(tgt)] = tgt
            data[lo:lo + len(w)] = w
    return Graph(g.n, indptr, indices, data)


def _scc_count(g: Graph):
    m = g.csr().copy()
    m.data[:] = 1.0
    ncomp, _ = sp.csgraph.connected_components(m, directed=True,
                                               connection="strong")
    return ncomp


def _period_gcd(g: Graph):
    """gcd of cycle lengths of a strongly connected graph, by BFS level gaps."""
    level = np.full(g.n, -1, dtype=np.int64)
    level[0] = 0
    queue = [0]
    gcd = 0
    while queue:
        nxt = []
        for i in queue:
            tgt, w = g.row(i)
            for j in tgt[w > 0]:
                if level[j] < 0:
                    level[j] = level[i] + 1
                    nxt.append(int(j))
                else:
                    gcd = math.gcd(gcd, level[i] + 1 - level[j])
        queue = nxt
    return gcd


def analyze_structure(g: Graph) -> StructureReport:
    """Strong connectivity, aperiodicity (only if irreducible), dangling rows
    and empty columns."""
    dangling = np.flatnonzero(g.row_sums == 0).tolist()
    col_mass = np.zeros(g.n)
    np.add.at(col_mass, g.indices, g.data)
    zero_columns = np.flatnonzero(col_mass == 0).tolist()
    strongly_connected = _scc_count(g) == 1
    aperiodic = strongly_connected and g.n >= 1 and \
        (g.n == 1 or _period_gcd(g) == 1)
    return StructureReport(strongly_connected, aperiodic, dangling, zero_columns)


def complete_graph(n) -> Graph:
    """The all-ones n x n adjacency matrix."""
    return Graph.from_dense(np.ones((n, n)))


def ring_graph(n) -> Graph:
    """Each node linked to itself and its two neighbours on a cycle."""
    edges = []
    for i in range(n):
        for j in (i - 1, i, i + 1):
            edges.append((i, j % n, 1.0))
    return Graph.from_edges(n, edges)


def random_graph(n, p, rng) -> Graph:
    """Directed Erdos-Renyi graph: each arc present independently with
    probability p, unit weights."""
    if n * n <= 4_000_000:
        mask = rng.random((n, n)) < p
        return Graph.from_dense(mask.astype(float))
    edges = []
    for i in range(n):
        k = rng.binomial(n, p)
        tgts = rng.choice(n, size=k, replace=False)
        edges.extend((i, int(j), 1.0) for j in tgts)
    return Graph.from_edges(n, edges)


def random_irreducible_graph(n, rng, extra_p=0.3) -> Graph:
    """Random strongly connected graph: a cycle plus random extra arcs."""
    edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    mask = rng.random((n, n)) < extra_p
    for i, j in zip(*np.nonzero(mask)):
        edges.append((int(i), int(j), 1.0))
    return Graph.from_edges(n, edges)
