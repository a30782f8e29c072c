"""Permutation Z-scores for pair statistics and thresholded edge validation.

Each pair draws its shuffles from its own counter-based stream keyed by
``(global_seed, src, dst, kind)`` (see :mod:`marketnet.rng`), so a sweep gives
the same numbers whatever the thread count or evaluation order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend, rng
from .causality import TEConfig, build_lagged_triple, granger_f, granger_f_batch
from .errors import ConfigError, UndefinedStatisticError
from .ingest import pairwise_overlap
from .rankstats import PairedSample, kendall_tau, pearson_r, spearman_rho

SYMMETRIC_KINDS = ("kendall", "spearman", "pearson")
DIRECTED_KINDS = ("te", "granger")
CORRELATION_KINDS = SYMMETRIC_KINDS

# per-pair outcome, shared with the kernels
FLAG_NOT_EVALUATED = -1
FLAG_OK = 0
FLAG_SHORT = 1
FLAG_DEGENERATE = 2
FLAG_FLAT_NULL = 3


@dataclass(frozen=True)
class PermutationConfig:
    n_permutations: int = 200
    z_star: float = 3.0
    min_obs: int = 20
    global_seed: int = 0

    def __post_init__(self):
        if self.n_permutations < 20:
            raise ConfigError(f"n_permutations must be >= 20, got {self.n_permutations}")
        if not self.z_star > 0:
            raise ConfigError(f"z_star must be positive, got {self.z_star}")
        if self.min_obs < 2:
            raise ConfigError(f"min_obs must be >= 2, got {self.min_obs}")


@dataclass(frozen=True)
class EdgeResult:
    src: object
    dst: object
    statistic: float
    null_mean: float
    null_std: float
    z: float
    n_obs: int
    valid: bool
    kind: str = "kendall"
    degenerate: bool = False


def edge_valid(n_obs, null_std, z, min_obs, z_star):
    """n_obs > min_obs and null_std > 0 and z > z_star (NaN-safe, vectorised)."""
    with np.errstate(invalid="ignore"):
        return (np.asarray(n_obs) > min_obs) & (np.asarray(null_std) > 0) & (np.asarray(z) > z_star)


def _stat_fn(kind):
    return {"kendall": kendall_tau, "spearman": spearman_rho, "pearson": pearson_r,
            "granger": granger_f}[kind]


def permutation_z(stat_fn, sample, cfg, pair_identity, batch_fn=None):
    """Z-score of ``stat_fn(sample)`` against shuffles of the sample's null side.

    ``sample.permuted(perm)`` defines what is shuffled (``ys`` of a
    :class:`PairedSample`, ``x_now`` of a lagged triple). ``batch_fn(sample,
    perms)``, when given, evaluates all permutations at once.
    """
    src, dst, kind = pair_identity
    n = sample.n
    nan = math.nan
    if n <= cfg.min_obs:
        return EdgeResult(src, dst, nan, nan, nan, nan, n, False, kind)
    try:
        stat = float(stat_fn(sample))
        key = rng.pair_keys(cfg.global_seed, src, dst, kind)
        perms = rng.permutations(key, n, cfg.n_permutations)
        if batch_fn is not None:
            null = np.asarray(batch_fn(sample, perms), dtype=float)
        else:
            null = np.array([stat_fn(sample.permuted(p)) for p in perms], dtype=float)
    except UndefinedStatisticError:
        return EdgeResult(src, dst, nan, nan, nan, nan, n, False, kind, degenerate=True)
    mean = float(null.mean())
    if np.ptp(null) == 0:
        return EdgeResult(src, dst, stat, mean, 0.0, nan, n, False, kind)
    std = float(null.std())
    z = (stat - mean) / std
    return EdgeResult(src, dst, stat, mean, std, z, n,
                      bool(edge_valid(n, std, z, cfg.min_obs, cfg.z_star)), kind)


def _granger_batch(triple, perms):
    return granger_f_batch(triple, triple.x_now[perms])


@dataclass
class EdgeMatrix:
    """Sweep results for every (row, col) series pair of one statistic.

    For a symmetric statistic over one node set (``symmetric=True``) only the
    upper triangle is computed and mirrored; self pairs are never evaluated.
    """

    kind: str
    row_labels: tuple
    col_labels: tuple
    stat: np.ndarray
    null_mean: np.ndarray
    null_std: np.ndarray
    z: np.ndarray
    n_obs: np.ndarray
    flags: np.ndarray
    draws: np.ndarray
    min_obs: int
    symmetric: bool
    rows: tuple = None
    cols: tuple = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def empty(cls, kind, row_labels, col_labels, min_obs, symmetric, rows=None, cols=None):
        shape = (len(row_labels), len(col_labels))
        return cls(kind, tuple(row_labels), tuple(col_labels),
                   np.full(shape, np.nan), np.full(shape, np.nan), np.full(shape, np.nan),
                   np.full(shape, np.nan), np.zeros(shape, dtype=np.int64),
                   np.full(shape, FLAG_NOT_EVALUATED, dtype=np.int64),
                   np.zeros(shape, dtype=np.int64), int(min_obs), bool(symmetric),
                   None if rows is None else tuple(rows), None if cols is None else tuple(cols))

    @property
    def shape(self):
        return self.stat.shape

    @property
    def directed(self):
        return self.kind in DIRECTED_KINDS

    def valid(self, z_star):
        return edge_valid(self.n_obs, self.null_std, self.z, self.min_obs, z_star)

    def pair_mask(self):
        """Each evaluated pair once (upper triangle for symmetric blocks)."""
        m = self.flags != FLAG_NOT_EVALUATED
        if self.symmetric:
            m &= np.triu(np.ones(self.shape, dtype=bool), 1)
        return m

    @property
    def n_pairs(self):
        return int(self.pair_mask().sum())

    def __getitem__(self, ij):
        a, b = ij
        z_star = self.meta.get("z_star", 3.0)
        return EdgeResult(self.row_labels[a], self.col_labels[b], float(self.stat[a, b]),
                          float(self.null_mean[a, b]), float(self.null_std[a, b]),
                          float(self.z[a, b]), int(self.n_obs[a, b]),
                          bool(self.valid(z_star)[a, b]), self.kind,
                          degenerate=bool(self.flags[a, b] == FLAG_DEGENERATE))

    def results(self):
        for a, b in zip(*np.nonzero(self.pair_mask())):
            yield self[a, b]

    def _set(self, a, b, stat, mean, std, z, n_obs, flag, draws):
        targets = [(a, b), (b, a)] if self.symmetric else [(a, b)]
        for i, j in targets:
            self.stat[i, j] = stat
            self.null_mean[i, j] = mean
            self.null_std[i, j] = std
            self.z[i, j] = z
            self.n_obs[i, j] = n_obs
            self.flags[i, j] = flag
            self.draws[i, j] = draws


def _pair_plan(rows, cols, symmetric):
    """Matrix positions and (src, dst) panel rows of every pair to evaluate."""
    pos, pairs = [], []
    if symmetric:
        for a in range(len(rows)):
            for b in range(a + 1, len(rows)):
                lo, hi = sorted((rows[a], rows[b]))
                pos.append((a, b))
                pairs.append((lo, hi))
    else:
        for a, r in enumerate(rows):
            for b, c in enumerate(cols):
                if r != c:
                    pos.append((a, b))
                    pairs.append((r, c))
    return (np.array(pos, dtype=np.int64).reshape(-1, 2),
            np.array(pairs, dtype=np.int64).reshape(-1, 2))


def validate_all_pairs(panel, rows, cols, kind, cfg, te_config=TEConfig(), n_threads=1,
                       kernels=None):
    """Permutation-validate ``kind`` for every (row, col) pair of panel rows.

    Pairs with ``n_obs <= cfg.min_obs`` are skipped without drawing any
    random numbers. For directed kinds the row series is the source.
    """
    if kind not in SYMMETRIC_KINDS + DIRECTED_KINDS:
        raise ConfigError(f"unknown statistic kind {kind!r}")
    rows = [int(r) for r in rows]
    cols = [int(c) for c in cols]
    if not rows or not cols:
        raise ConfigError("validate_all_pairs needs non-empty row and column sets")
    kernels = kernels or _backend.kernels
    symmetric = kind in SYMMETRIC_KINDS and rows == cols
    labels = panel.labels
    out = EdgeMatrix.empty(kind, [labels[r] for r in rows], [labels[c] for c in cols],
                           cfg.min_obs, symmetric, rows, cols)
    out.meta.update(z_star=cfg.z_star, n_permutations=cfg.n_permutations,
                    global_seed=cfg.global_seed, backend=kernels.BACKEND)
    pos, pairs = _pair_plan(rows, cols, symmetric)
    if len(pairs) == 0:
        return out
    keys = rng.pair_keys(cfg.global_seed, pairs[:, 0], pairs[:, 1], kind)
    keys = np.ascontiguousarray(np.atleast_1d(keys), dtype=np.uint64)

    if kind == "kendall":
        res, ires = kernels.kendall_sweep(panel.data, panel.mask.view(np.uint8), pairs, keys,
                                          cfg.n_permutations, cfg.min_obs, n_threads)
    elif kind == "te":
        out.meta["n_bins"] = te_config.n_bins
        res, ires = kernels.te_sweep(panel.data, panel.mask.view(np.uint8),
                                     panel.consecutive.view(np.uint8), pairs, keys,
                                     te_config.n_bins, cfg.n_permutations, cfg.min_obs,
                                     _backend.xlog2x_table(panel.n_days), n_threads)
    else:
        res, ires = _generic_sweep(panel, pairs, kind, cfg)

    for (a, b), r, ir in zip(pos, res, ires):
        out._set(a, b, *r, *ir)
    return out


def _generic_sweep(panel, pairs, kind, cfg):
    res = np.full((len(pairs), 4), np.nan)
    ires = np.zeros((len(pairs), 3), dtype=np.int64)
    stat_fn = _stat_fn(kind)
    for p, (src, dst) in enumerate(pairs):
        if kind == "granger":
            sample = build_lagged_triple(panel, src, dst)
            er = permutation_z(stat_fn, sample, cfg, (src, dst, kind), batch_fn=_granger_batch)
        else:
            xs, ys, _ = pairwise_overlap(panel, src, dst)
            er = permutation_z(stat_fn, PairedSample(xs, ys), cfg, (src, dst, kind))
        res[p] = (er.statistic, er.null_mean, er.null_std, er.z)
        if er.n_obs <= cfg.min_obs:
            flag = FLAG_SHORT
        elif er.degenerate:
            flag = FLAG_DEGENERATE
        elif er.null_std == 0:
            flag = FLAG_FLAT_NULL
        else:
            flag = FLAG_OK
        drew = rng.draws_used(er.n_obs, cfg.n_permutations) if flag in (FLAG_OK, FLAG_FLAT_NULL) else 0
        ires[p] = (er.n_obs, flag, drew)
    return res, ires
