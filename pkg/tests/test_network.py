import numpy as np
import pytest

import oracles
from marketnet import _backend
from marketnet.network import (ValidatedNetwork, build_network, ccdf, components, degrees,
                               metrics, weighted_betweenness, weighted_closeness)
from marketnet.permval import FLAG_OK, EdgeMatrix

nx = pytest.importorskip("networkx")


def edge_matrix(kind, labels, stat, z, cols=None):
    """EdgeMatrix with every off-diagonal pair evaluated on 100 observations."""
    cols = labels if cols is None else cols
    symmetric = cols is labels and kind in ("kendall", "spearman", "pearson")
    m = EdgeMatrix.empty(kind, labels, cols, 20, symmetric)
    stat = np.asarray(stat, dtype=float)
    z = np.asarray(z, dtype=float)
    for a in range(len(labels)):
        for b in range(len(cols)):
            if labels[a] != cols[b]:
                m.stat[a, b], m.z[a, b] = stat[a, b], z[a, b]
                m.null_mean[a, b], m.null_std[a, b] = 0.0, 0.1
                m.n_obs[a, b], m.flags[a, b] = 100, FLAG_OK
    return m


def labels(n, kind="price"):
    return tuple(f"A{i}:{kind}" for i in range(n))


def graph_network(n, edges, directed):
    """ValidatedNetwork straight from (u, v, weight) triples."""
    adj = np.zeros((n, n), dtype=bool)
    w = np.ones((n, n))
    for u, v, wt in edges:
        adj[u, v] = True
        w[u, v] = wt
        if not directed:
            adj[v, u] = True
            w[v, u] = wt
    nodes = labels(n)
    return ValidatedNetwork(nodes, nodes, nodes, adj, adj, w, np.full((n, n), np.nan),
                            np.full((n, n), np.nan), "te" if directed else "kendall", directed,
                            False, n * (n - 1), 3.0)


def test_all_invalid_gives_edgeless():
    m = edge_matrix("kendall", labels(4), np.full((4, 4), 0.5), np.zeros((4, 4)))
    net = build_network(m, 3.0)
    assert not net.adjacency.any() and net.n_edges == 0
    assert (net.weights == 1).all()


@pytest.mark.parametrize("tau,w", [(0.5, 0.75), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0)])
def test_weight_is_one_minus_tau_squared(tau, w):
    m = edge_matrix("kendall", labels(2), np.full((2, 2), tau), np.full((2, 2), 10.0))
    net = build_network(m, 3.0)
    assert net.adjacency[0, 1] and net.adjacency[1, 0]
    assert abs(net.weights[0, 1] - w) <= 1e-15


def test_undirected_symmetry_and_directed_inference():
    g = np.random.default_rng(0)
    stat = g.uniform(-1, 1, (6, 6))
    stat = (stat + stat.T) / 2
    z = g.uniform(0, 6, (6, 6))
    z = (z + z.T) / 2
    net = build_network(edge_matrix("kendall", labels(6), stat, z), 3.0)
    assert not net.directed and (net.adjacency == net.adjacency.T).all()
    v = net.adjacency
    np.testing.assert_allclose(net.weights[v], 1 - stat[v] ** 2, atol=1e-15, rtol=0)
    te = build_network(edge_matrix("te", labels(6), stat, z), 3.0)
    assert te.directed and not te.bipartite


def test_degrees_examples():
    tri = graph_network(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], directed=False)
    assert degrees(tri)[0].tolist() == [2, 2, 2]
    one = graph_network(2, [(0, 1, 1.0)], directed=True)
    _, out_deg, in_deg = degrees(one)
    assert out_deg.tolist() == [1, 0] and in_deg.tolist() == [0, 1]
    assert not any(d.any() for d in degrees(graph_network(4, [], directed=False)))


def test_bipartite_block_degrees():
    rows, cols = labels(3, "pos"), labels(3, "price")
    z = np.zeros((3, 3))
    z[0, 1] = z[0, 2] = z[2, 2] = 10.0
    net = build_network(edge_matrix("kendall", rows, np.full((3, 3), 0.3), z, cols), 3.0)
    assert net.bipartite and not net.directed and net.n_nodes == 6
    degree, impacting, impacted = degrees(net)
    assert impacting.tolist() == [2, 0, 1, 0, 0, 0]
    assert impacted.tolist() == [0, 0, 0, 0, 1, 2]
    assert degree.sum() == 2 * net.n_edges == 6


def test_ccdf_examples():
    x, p = ccdf([3, 1, 1, 0])
    assert dict(zip(x.tolist(), p.tolist())) == {0: 0.75, 1: 0.25, 3: 0.0}
    x, p = ccdf([2, 2, 2])
    assert x.tolist() == [2] and p.tolist() == [0.0]
    x, p = ccdf([5])
    assert x.tolist() == [5] and p.tolist() == [0.0]
    x, p = ccdf(np.random.default_rng(0).integers(0, 30, 200))
    assert p[0] <= 1 and p[-1] == 0 and np.all(np.diff(p) <= 0)
    with pytest.raises(ValueError):
        ccdf([])


def test_components_examples():
    tri = graph_network(4, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], directed=False)
    comp, giant = components(tri)
    assert giant == 3 and len(set(comp.tolist())) == 2 and comp[3] == 1
    comp, giant = components(graph_network(5, [], directed=False))
    assert giant == 1 and len(set(comp.tolist())) == 5
    path = graph_network(5, [(i, i + 1, 1.0) for i in range(4)], directed=False)
    assert components(path)[1] == 5
    chain = graph_network(3, [(0, 1, 1.0), (2, 1, 1.0)], directed=True)
    assert components(chain)[1] == 3  # weakly connected


def test_components_partition_nodes():
    g = np.random.default_rng(4)
    edges = [(int(u), int(v), 1.0) for u, v in g.integers(0, 30, (25, 2)) if u != v]
    comp, giant = components(graph_network(30, edges, directed=False))
    sizes = np.bincount(comp)
    assert sizes.sum() == 30 and sizes[0] == giant == sizes.max()


def test_path_centralities():
    path = graph_network(3, [(0, 1, 1.0), (1, 2, 1.0)], directed=False)
    assert weighted_closeness(path).tolist() == [1.5, 2.0, 1.5]
    assert weighted_betweenness(path).tolist() == [0.0, 1.0, 0.0]
    iso = graph_network(3, [(0, 1, 1.0)], directed=False)
    assert weighted_closeness(iso)[2] == 0.0
    complete = graph_network(5, [(u, v, 0.5) for u in range(5) for v in range(u + 1, 5)], False)
    assert not weighted_betweenness(complete).any()


def test_zero_distance_is_clamped():
    net = graph_network(2, [(0, 1, 0.0)], directed=False)
    assert weighted_closeness(net).tolist() == [1e12, 1e12]


def _random_graph(g, directed):
    n = int(g.integers(2, 9))
    p = g.uniform(0.2, 0.9)
    edges = []
    for u in range(n):
        for v in range(n) if directed else range(u + 1, n):
            if u != v and g.random() < p:
                edges.append((u, v, float(g.uniform(0.05, 1.0))))
    return n, edges


@pytest.mark.parametrize("directed", [False, True])
def test_centralities_match_path_enumeration(kernels, directed):
    g = np.random.default_rng(11 + directed)
    for _ in range(40):
        n, edges = _random_graph(g, directed)
        net = graph_network(n, edges, directed)
        want_c, want_b = oracles.path_centralities(n, edges, directed)
        np.testing.assert_allclose(weighted_closeness(net, kernels=kernels), want_c, atol=1e-9, rtol=0)
        np.testing.assert_allclose(weighted_betweenness(net, kernels=kernels), want_b, atol=1e-9,
                                   rtol=0)


def test_centralities_match_networkx():
    g = np.random.default_rng(5)
    for directed in (False, True):
        for _ in range(10):
            n = 40
            edges = [(int(u), int(v), float(g.uniform(0.05, 1)))
                     for u, v in g.integers(0, n, (120, 2)) if u != v]
            edges = list({(u, v) if directed else (min(u, v), max(u, v)): (u, v, w)
                          for u, v, w in edges}.values())
            G = nx.DiGraph() if directed else nx.Graph()
            G.add_nodes_from(range(n))
            G.add_weighted_edges_from(edges)
            net = graph_network(n, edges, directed)
            bc = nx.betweenness_centrality(G, weight="weight", normalized=False)
            np.testing.assert_allclose(weighted_betweenness(net), [bc[v] for v in range(n)],
                                       atol=1e-9)
            # networkx measures closeness on incoming distances; reverse for outgoing
            H = G.reverse() if directed else G
            hc = nx.harmonic_centrality(H, distance="weight")
            np.testing.assert_allclose(weighted_closeness(net), [hc[v] for v in range(n)],
                                       rtol=1e-12)


@pytest.mark.skipif(len(_backend.available()) < 2, reason="compiled kernels not built")
def test_brandes_threads_and_backends_agree():
    g = np.random.default_rng(8)
    n = 150
    edges = [(int(u), int(v), float(g.uniform(0.05, 1))) for u, v in g.integers(0, n, (600, 2))
             if u != v]
    net = graph_network(n, list({(min(u, v), max(u, v)): (u, v, w) for u, v, w in edges}.values()),
                        directed=False)
    c, p = _backend.load("compiled"), _backend.load("python")
    a = weighted_betweenness(net, n_threads=1, kernels=c)
    np.testing.assert_array_equal(a, weighted_betweenness(net, n_threads=4, kernels=c))
    np.testing.assert_allclose(a, weighted_betweenness(net, kernels=p), rtol=1e-12, atol=1e-12)


def test_metrics_report_consistency():
    g = np.random.default_rng(2)
    stat = g.uniform(-1, 1, (8, 8))
    stat = (stat + stat.T) / 2
    z = g.uniform(0, 8, (8, 8))
    z = (z + z.T) / 2
    m = edge_matrix("kendall", labels(8), stat, z)
    net = build_network(m, 3.0)
    rep = metrics(net)
    assert rep.degree.sum() == 2 * rep.n_edges
    assert rep.density == rep.n_edges / 28
    assert rep.n_edges == int(m.valid(3.0)[m.pair_mask()].sum())
    assert rep.giant_size <= 8 and 0 <= rep.density <= 1
    assert rep.avg_stat == pytest.approx(np.mean([stat[i, j] for i, j in net.edge_list()]))
