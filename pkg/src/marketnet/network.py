"""Validated networks and their topology metrics."""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from . import _backend
from .permval import CORRELATION_KINDS, DIRECTED_KINDS

CLOSENESS_EPS = 1e-12


@dataclass(frozen=True)
class ValidatedNetwork:
    """Thresholded network over the union of an edge block's row and column series.

    ``arcs[i, j]`` marks a valid edge from row-side node i to column-side node
    j. ``adjacency`` is ``arcs`` for directed networks and ``arcs | arcs.T``
    otherwise. ``weights`` hold ``1 - stat**2`` on valid correlation edges and
    1 everywhere else.
    """

    nodes: tuple
    row_nodes: tuple
    col_nodes: tuple
    arcs: np.ndarray
    adjacency: np.ndarray
    weights: np.ndarray
    stat: np.ndarray
    z: np.ndarray
    kind: str
    directed: bool
    bipartite: bool
    evaluated_pairs: int
    z_star: float

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_edges(self):
        """Valid links; an undirected link counts once."""
        return len(self.edge_list())

    def edge_list(self):
        """(src, dst) node index pairs of valid edges, each undirected link once."""
        a = self.arcs if (self.directed or self.bipartite) else np.triu(self.adjacency, 1)
        return list(zip(*(idx.tolist() for idx in np.nonzero(a))))


def build_network(edges, z_star=3.0, directed=None, bipartite=None):
    """Threshold an :class:`~marketnet.permval.EdgeMatrix` at ``z_star``."""
    directed = edges.kind in DIRECTED_KINDS if directed is None else bool(directed)
    if bipartite is None:
        bipartite = set(edges.row_labels) != set(edges.col_labels)
    nodes = list(edges.row_labels)
    nodes += [c for c in edges.col_labels if c not in set(nodes)]
    where = {label: k for k, label in enumerate(nodes)}
    ri = np.array([where[r] for r in edges.row_labels], dtype=np.int64)
    ci = np.array([where[c] for c in edges.col_labels], dtype=np.int64)
    n = len(nodes)

    valid = edges.valid(z_star) & (edges.flags >= 0)
    arcs = np.zeros((n, n), dtype=bool)
    stat = np.full((n, n), np.nan)
    z = np.full((n, n), np.nan)
    arcs[np.ix_(ri, ci)] = valid
    stat[np.ix_(ri, ci)] = np.where(valid, edges.stat, np.nan)
    z[np.ix_(ri, ci)] = np.where(valid, edges.z, np.nan)
    adjacency = arcs.copy() if directed else arcs | arcs.T
    if not directed:
        stat = np.where(np.isnan(stat), stat.T, stat)
        z = np.where(np.isnan(z), z.T, z)
    weights = np.ones((n, n))
    if edges.kind in CORRELATION_KINDS:
        weights = np.where(adjacency, 1.0 - stat * stat, 1.0)
    for a in (arcs, adjacency, weights, stat, z):
        a.flags.writeable = False
    return ValidatedNetwork(tuple(nodes), tuple(edges.row_labels), tuple(edges.col_labels),
                            arcs, adjacency, weights, stat, z, edges.kind, directed,
                            bool(bipartite), edges.n_pairs, float(z_star))


def degrees(net):
    """``(degree, impacting, impacted)`` per node.

    impacting/impacted are the row/column sums of the arc matrix; for an
    undirected one-signal network both equal the degree.
    """
    impacting = net.arcs.sum(axis=1).astype(np.int64)
    impacted = net.arcs.sum(axis=0).astype(np.int64)
    if net.directed:
        degree = impacting + impacted
    else:
        degree = net.adjacency.sum(axis=1).astype(np.int64)
    return degree, impacting, impacted


def ccdf(values):
    """``(x, P(value > x))`` at every distinct value, ascending in x."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise ValueError("ccdf of an empty sequence")
    x = np.unique(v)
    above = v.size - np.searchsorted(v, x, side="right")
    return x, above / v.size


def components(net):
    """Weak component label per node (0 is the largest) and the giant size."""
    n_comp, raw = connected_components(csr_matrix(net.adjacency), directed=True, connection="weak")
    sizes = np.bincount(raw, minlength=n_comp)
    first = np.full(n_comp, len(raw))
    np.minimum.at(first, raw, np.arange(len(raw)))
    order = sorted(range(n_comp), key=lambda c: (-sizes[c], first[c]))
    relabel = np.empty(n_comp, dtype=np.int64)
    relabel[order] = np.arange(n_comp)
    return relabel[raw], int(sizes.max()) if n_comp else 0


def _csr(mask, weights):
    src, dst = np.nonzero(mask)
    indptr = np.zeros(mask.shape[0] + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=mask.shape[0]), out=indptr[1:])
    return indptr, np.ascontiguousarray(dst, dtype=np.int64), np.ascontiguousarray(weights[src, dst])


def _shortest_path_scores(net, n_threads=1, kernels=None):
    kernels = kernels or _backend.kernels
    fwd = _csr(net.adjacency, net.weights)
    rev = _csr(net.adjacency.T, net.weights.T)
    return kernels.brandes(*fwd, *rev, CLOSENESS_EPS, n_threads)


def weighted_closeness(net, n_threads=1, kernels=None):
    """Harmonic closeness: sum of 1/d(i, j) over reachable j, d clamped at 1e-12."""
    return _shortest_path_scores(net, n_threads, kernels)[1]


def weighted_betweenness(net, n_threads=1, kernels=None):
    """Shortest-path betweenness, unnormalised; undirected pairs count once."""
    bc = _shortest_path_scores(net, n_threads, kernels)[0]
    return bc if net.directed else bc / 2.0


@dataclass(frozen=True)
class MetricsReport:
    nodes: tuple
    degree: np.ndarray
    impacting: np.ndarray
    impacted: np.ndarray
    component_id: np.ndarray
    giant_size: int
    n_edges: int
    avg_degree: float
    density: float
    avg_stat: float
    closeness: np.ndarray
    betweenness: np.ndarray


def metrics(net, n_threads=1, kernels=None):
    degree, impacting, impacted = degrees(net)
    labels, giant = components(net)
    bc, cl = _shortest_path_scores(net, n_threads, kernels)
    if not net.directed:
        bc = bc / 2.0
    links = [net.stat[i, j] for i, j in net.edge_list()]
    return MetricsReport(
        nodes=net.nodes,
        degree=degree,
        impacting=impacting,
        impacted=impacted,
        component_id=labels,
        giant_size=giant,
        n_edges=len(links),
        avg_degree=float(degree.mean()) if net.n_nodes else 0.0,
        density=len(links) / net.evaluated_pairs if net.evaluated_pairs else 0.0,
        avg_stat=float(np.mean(links)) if links else float("nan"),
        closeness=cl,
        betweenness=bc,
    )
