"""Graph construction and walk-neighborhood averaging for graph signals.

A ``Graph`` wraps a square, nonnegative, zero-diagonal adjacency matrix.
Entry ``(i, j)`` is the weight of the arc ``i -> j``; undirected graphs store
each edge as two arcs.  Matrices sparser than
``Settings.dense_threshold`` are kept in CSR form, everything else as a dense
``numpy`` array.  Every operation only relies on ``A @ v`` products, so both
representations behave identically.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from graphpe.config import get_settings
from graphpe.services.errors import InvalidArgumentError

logger = logging.getLogger(__name__)

Adjacency = np.ndarray | sp.csr_matrix

GRAPH_KINDS = ("complete", "empty", "path")


@dataclass(frozen=True, slots=True)
class Graph:
    num_vertices: int
    adjacency: Adjacency

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.adjacency)

    def to_dense(self) -> np.ndarray:
        if self.is_sparse:
            return self.adjacency.toarray()
        return np.array(self.adjacency, dtype=np.float64, copy=True)

    @property
    def num_arcs(self) -> int:
        """Number of nonzero entries (an undirected edge counts twice)."""
        if self.is_sparse:
            return int(self.adjacency.count_nonzero())
        return int(np.count_nonzero(self.adjacency))

    @property
    def total_weight(self) -> float:
        return float(self.adjacency.sum())

    def is_symmetric(self) -> bool:
        dense = self.to_dense()
        return bool(np.array_equal(dense, dense.T))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        return np.asarray(self.adjacency @ v, dtype=np.float64).reshape(-1)

    def support(self) -> Adjacency:
        """0/1 matrix with the same nonzero pattern as the adjacency."""
        if self.is_sparse:
            out = self.adjacency.copy()
            out.data = (out.data != 0).astype(np.float64)
            return out
        return (np.asarray(self.adjacency) != 0).astype(np.float64)


@dataclass(frozen=True, slots=True)
class NeighborhoodEmbedding:
    """Walk averages ``values[i, k] = y_i^{kL}``; invalid rows hold NaN."""

    values: np.ndarray
    valid: np.ndarray
    m: int
    L: int

    @property
    def valid_count(self) -> int:
        return int(np.count_nonzero(self.valid))


# --------------------------------------------------------------------------- #
# Storage
# --------------------------------------------------------------------------- #
def _store(matrix: Adjacency, threshold: float | None = None) -> Adjacency:
    if threshold is None:
        threshold = get_settings().dense_threshold
    n = matrix.shape[0]
    if n == 0:
        return np.zeros((0, 0))
    nnz = matrix.count_nonzero() if sp.issparse(matrix) else np.count_nonzero(matrix)
    density = nnz / float(n * n)
    if density < threshold:
        out = sp.csr_matrix(matrix, dtype=np.float64)
        out.eliminate_zeros()
        return out
    if sp.issparse(matrix):
        return matrix.toarray().astype(np.float64)
    return np.asarray(matrix, dtype=np.float64)


def _as_sparse(graph: Graph) -> sp.csr_matrix:
    if graph.is_sparse:
        return graph.adjacency
    return sp.csr_matrix(graph.adjacency)


def _require_positive(name: str, value: int) -> None:
    if int(value) != value or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")


# --------------------------------------------------------------------------- #
# Constructors
# --------------------------------------------------------------------------- #
def directed_path(n: int) -> Graph:
    """Directed path ``0 -> 1 -> ... -> n-1`` with unit weights."""
    _require_positive("n", n)
    rows = np.arange(n - 1)
    data = np.ones(n - 1)
    adjacency = sp.csr_matrix((data, (rows, rows + 1)), shape=(n, n))
    return Graph(num_vertices=n, adjacency=_store(adjacency))


def complete_graph(p: int) -> Graph:
    _require_positive("p", p)
    adjacency = np.ones((p, p)) - np.eye(p)
    return Graph(num_vertices=p, adjacency=_store(adjacency))


def empty_graph(p: int) -> Graph:
    """``p`` isolated vertices."""
    _require_positive("p", p)
    return Graph(num_vertices=p, adjacency=_store(sp.csr_matrix((p, p))))


def cycle_graph(n: int) -> Graph:
    """Directed cycle ``0 -> 1 -> ... -> n-1 -> 0``."""
    _require_positive("n", n)
    if n < 2:
        raise InvalidArgumentError("a cycle needs at least 2 vertices")
    rows = np.arange(n)
    adjacency = sp.csr_matrix((np.ones(n), (rows, (rows + 1) % n)), shape=(n, n))
    return Graph(num_vertices=n, adjacency=_store(adjacency))


def undirected_cycle(n: int) -> Graph:
    _require_positive("n", n)
    if n < 3:
        raise InvalidArgumentError("an undirected cycle needs at least 3 vertices")
    forward = cycle_graph(n).to_dense()
    return Graph(num_vertices=n, adjacency=_store(forward + forward.T))


def star_graph(n: int) -> Graph:
    """Undirected star on ``n`` vertices centred at vertex 0."""
    _require_positive("n", n)
    adjacency = np.zeros((n, n))
    adjacency[0, 1:] = 1.0
    adjacency[1:, 0] = 1.0
    return Graph(num_vertices=n, adjacency=_store(adjacency))


def random_graph(
    n: int,
    prob: float,
    seed: int | None = None,
    *,
    directed: bool = False,
) -> Graph:
    """Random graph keeping each possible arc (or edge) with probability ``prob``."""
    _require_positive("n", n)
    if not 0.0 <= prob <= 1.0:
        raise InvalidArgumentError(f"prob must lie in [0, 1], got {prob}")
    rng = np.random.default_rng(seed)
    draws = (rng.random((n, n)) < prob).astype(np.float64)
    np.fill_diagonal(draws, 0.0)
    if not directed:
        upper = np.triu(draws, k=1)
        draws = upper + upper.T
    return Graph(num_vertices=n, adjacency=_store(draws))


def graph_from_matrix(matrix: Adjacency) -> Graph:
    """Wrap a user-supplied adjacency matrix after validating it."""
    dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise InvalidArgumentError(f"adjacency must be square, got shape {dense.shape}")
    if dense.shape[0] == 0:
        raise InvalidArgumentError("adjacency must have at least one vertex")
    bad = np.argwhere(~np.isfinite(dense))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise InvalidArgumentError(f"adjacency entry ({i}, {j}) is not finite")
    bad = np.argwhere(dense < 0)
    if bad.size:
        i, j = (int(v) for v in bad[0])
        raise InvalidArgumentError(
            f"adjacency entry ({i}, {j}) is negative: {dense[i, j]}"
        )
    diag = np.flatnonzero(np.diag(dense))
    if diag.size:
        i = int(diag[0])
        raise InvalidArgumentError(
            f"adjacency diagonal entry ({i}, {i}) must be 0, got {dense[i, i]}"
        )
    return Graph(num_vertices=dense.shape[0], adjacency=_store(dense))


def graph_from_spec(kind: str, p: int) -> Graph:
    """Interaction graph by name: ``complete`` (default), ``empty`` or ``path``."""
    builders = {
        "complete": complete_graph,
        "empty": empty_graph,
        "path": directed_path,
    }
    try:
        builder = builders[kind]
    except KeyError:
        raise InvalidArgumentError(
            f"unknown graph kind {kind!r}; expected one of {', '.join(GRAPH_KINDS)}"
        ) from None
    return builder(p)


# --------------------------------------------------------------------------- #
# Products and walks
# --------------------------------------------------------------------------- #
def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Cartesian product ``g □ h``.

    Pair ``(t, s)`` maps to flat index ``t * |V(h)| + s``; the adjacency is the
    Kronecker sum ``A_g ⊗ I_h + I_g ⊗ A_h``.
    """
    a_g = _as_sparse(g)
    a_h = _as_sparse(h)
    adjacency = sp.kron(a_g, sp.identity(h.num_vertices), format="csr") + sp.kron(
        sp.identity(g.num_vertices), a_h, format="csr"
    )
    n = g.num_vertices * h.num_vertices
    logger.debug(
        "graphs.cartesian_product vertices=%s arcs=%s", n, adjacency.count_nonzero()
    )
    return Graph(num_vertices=n, adjacency=_store(adjacency.tocsr()))


def neighborhood_embedding(
    g: Graph,
    x: np.ndarray,
    m: int,
    L: int,
) -> NeighborhoodEmbedding:
    """Average the signal over the endpoints of all walks of length ``kL``.

    ``values[i, k] = (A^{kL} x)_i / (A^{kL} 1)_i`` for ``k = 0..m-1``, obtained
    by repeated matrix-vector products.  A vertex is valid when every one of
    its ``kL`` walks exists, which is tracked on the sparsity pattern of ``A``
    so tiny weights never read as missing walks.  Both propagated vectors are
    rescaled by one power of two per step.
    """
    if int(m) != m or m < 2:
        raise InvalidArgumentError(f"embedding dimension m must be >= 2, got {m!r}")
    if int(L) != L or L < 1:
        raise InvalidArgumentError(f"delay L must be >= 1, got {L!r}")
    signal = np.asarray(x, dtype=np.float64).reshape(-1)
    if signal.shape[0] != g.num_vertices:
        raise InvalidArgumentError(
            f"signal length {signal.shape[0]} does not match graph with "
            f"{g.num_vertices} vertices"
        )

    n = g.num_vertices
    values = np.empty((n, m), dtype=np.float64)
    values[:, 0] = signal
    valid = np.ones(n, dtype=bool)

    pattern = g.support()
    walked = signal.copy()
    mass = np.ones(n, dtype=np.float64)
    reach = np.ones(n, dtype=np.float64)
    for k in range(1, m):
        for _ in range(L):
            walked = g.matvec(walked)
            mass = g.matvec(mass)
            reach = (np.asarray(pattern @ reach).reshape(-1) > 0).astype(np.float64)
            # shared power-of-two rescale: exact, leaves walked / mass unchanged
            peak = mass.max()
            if peak > 0 and np.isfinite(peak):
                _, exponent = np.frexp(peak)
                walked = np.ldexp(walked, -exponent)
                mass = np.ldexp(mass, -exponent)
        reached = reach > 0
        valid &= reached
        column = np.full(n, np.nan)
        np.divide(walked, mass, out=column, where=reached & (mass > 0))
        values[:, k] = column

    values[~valid, 1:] = np.nan
    return NeighborhoodEmbedding(values=values, valid=valid, m=m, L=L)


__all__ = [
    "Graph",
    "NeighborhoodEmbedding",
    "GRAPH_KINDS",
    "directed_path",
    "complete_graph",
    "empty_graph",
    "cycle_graph",
    "undirected_cycle",
    "star_graph",
    "random_graph",
    "graph_from_matrix",
    "graph_from_spec",
    "cartesian_product",
    "neighborhood_embedding",
]
