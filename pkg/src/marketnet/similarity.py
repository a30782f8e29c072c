"""Cross-network comparison of degree centralities."""

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import UndefinedStatisticError
from .ingest import split_label
from .network import build_network, degrees
from .rankstats import spearman_rho

log = logging.getLogger(__name__)

SWEEP_COLUMNS = ("P-pS", "P-nS", "pS-nS", "TESP-P", "TESP-pS", "TESP-nS")


@dataclass(frozen=True)
class CentralityVector:
    nodes: tuple
    values: np.ndarray
    tag: str = ""
    dropped: tuple = field(default=())

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.nodes),):
            raise ValueError(f"{len(self.nodes)} nodes but values of shape {values.shape}")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node ids in a centrality vector")
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "values", values)

    def as_dict(self):
        return dict(zip(self.nodes, self.values.tolist()))


def _by_asset(nodes, values):
    out = {}
    for label, v in zip(nodes, values):
        asset, _ = split_label(label)
        out[asset] = out.get(asset, 0) + int(v)
    return out


def degree_centrality(net, tag=""):
    """Per-asset degree of a one-signal network."""
    degree, _, _ = degrees(net)
    per_asset = _by_asset(net.nodes, degree)
    assets = sorted(per_asset)
    return CentralityVector(assets, [per_asset[a] for a in assets], tag)


def combined_te_centrality(te_s2p, te_p2s, tag="TESP"):
    """Per asset: all arcs leaving or entering any of its series, over both networks.

    Assets present in only one network are dropped with a warning.
    """
    totals = []
    for net in (te_s2p, te_p2s):
        _, out_deg, in_deg = degrees(net)
        totals.append(_by_asset(net.nodes, out_deg + in_deg))
    a, b = totals
    common = sorted(set(a) & set(b))
    dropped = tuple(sorted(set(a) ^ set(b)))
    if dropped:
        log.warning("combined TE centrality: %d assets not in both networks dropped", len(dropped))
    return CentralityVector(common, [a[k] + b[k] for k in common], tag, dropped)


def compare_networks(a, b, exclude_zero=False):
    """Spearman rho of two centrality vectors on their shared nodes, with a t-test.

    Returns ``(rho, p_value, n)``; the p-value is two-sided against Student's t
    with n - 2 degrees of freedom. ``exclude_zero`` drops nodes that are zero
    in either vector.
    """
    va, vb = a.as_dict(), b.as_dict()
    shared = sorted(set(va) & set(vb))
    if exclude_zero:
        shared = [k for k in shared if va[k] != 0 and vb[k] != 0]
    n = len(shared)
    if n < 3:
        raise UndefinedStatisticError(f"need at least 3 shared nodes, got {n}")
    rho = spearman_rho(np.array([va[k] for k in shared]), np.array([vb[k] for k in shared]))
    if abs(rho) >= 1.0:
        return rho, 0.0, n
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    return rho, float(2.0 * stats.t.sf(abs(t), n - 2)), n


def _network_vectors(edges, z):
    vec = {tag: degree_centrality(build_network(edges[tag], z), tag) for tag in ("P", "pS", "nS")}
    vec["TESP"] = combined_te_centrality(build_network(edges["TE_s2p"], z),
                                         build_network(edges["TE_p2s"], z))
    return vec


def threshold_sweep(edges, z_values, exclude_zero=False):
    """Table of (rho, p) per z and network pair, re-thresholding cached results.

    ``edges`` maps ``P``, ``pS``, ``nS`` (within-signal Kendall blocks) and
    ``TE_s2p``, ``TE_p2s`` (transfer-entropy blocks) to edge matrices.
    Undefined comparisons, e.g. against an edgeless network, come back NaN.
    Raises AssertionError if a higher threshold ever adds an edge.
    """
    z_values = [float(z) for z in z_values]
    if z_values != sorted(z_values):
        raise ValueError("z_values must be sorted ascending")
    rows = []
    previous = None
    for z in z_values:
        valid = {tag: m.valid(z) for tag, m in edges.items()}
        if previous is not None:
            for tag in valid:
                if np.any(valid[tag] & ~previous[tag]):
                    raise AssertionError(f"{tag}: raising z to {z} added edges")
        previous = valid
        vec = _network_vectors(edges, z)
        row = {"z": z}
        for col in SWEEP_COLUMNS:
            left, right = col.split("-")
            try:
                row[col] = compare_networks(vec[left], vec[right], exclude_zero)[:2]
            except UndefinedStatisticError:
                row[col] = (math.nan, math.nan)
        rows.append(row)
    return rows
