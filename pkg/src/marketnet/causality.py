"""Lag-1 causality between two panel rows.

Histogram transfer entropy is the primary estimator; a one-lag linear Granger
F-test serves as a cross-check.
"""

from dataclasses import dataclass

import numpy as np

from ._backend import xlog2x_table
from .errors import ConfigError, DataError, UndefinedStatisticError


@dataclass(frozen=True)
class TEConfig:
    n_bins: int = 4
    log_base: int = 2

    def __post_init__(self):
        if not 3 <= self.n_bins <= 6:
            raise ConfigError(f"n_bins must lie in [3, 6], got {self.n_bins}")
        if self.log_base != 2:
            raise ConfigError("transfer entropy is reported in bits (log_base=2)")


@dataclass(frozen=True)
class LaggedTriple:
    """Aligned (y[t+1], y[t], x[t]) observations."""

    y_next: np.ndarray
    y_now: np.ndarray
    x_now: np.ndarray

    def __post_init__(self):
        arrays = [np.asarray(a, dtype=float) for a in (self.y_next, self.y_now, self.x_now)]
        if len({a.shape for a in arrays}) != 1 or arrays[0].ndim != 1:
            raise DataError("lagged triple sides must be equal-length 1-d arrays")
        for name, a in zip(("y_next", "y_now", "x_now"), arrays):
            object.__setattr__(self, name, a)

    @property
    def n(self):
        return len(self.y_next)

    def permuted(self, perm):
        """Null-model copy with ``x_now`` shuffled and the y history kept."""
        return LaggedTriple(self.y_next, self.y_now, self.x_now[perm])


def lag_windows(panel, src, dst):
    """Calendar columns t usable as a window: y at t and t+1, x at t, days adjacent."""
    m = panel.mask
    ok = panel.consecutive & m[dst, :-1] & m[dst, 1:] & m[src, :-1]
    return np.flatnonzero(ok)


def build_lagged_triple(panel, src, dst):
    t = lag_windows(panel, src, dst)
    d = panel.data
    return LaggedTriple(d[dst, t + 1], d[dst, t], d[src, t])


def discretize(values, n_bins):
    """Equal-width bin indices over ``[min, max]``; the maximum lands in the top bin."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise UndefinedStatisticError("cannot bin an empty series")
    lo = values.min()
    hi = values.max()
    if hi == lo:
        raise UndefinedStatisticError("cannot bin a constant series")
    b = ((values - lo) / (hi - lo) * n_bins).astype(np.int64)
    return np.minimum(b, n_bins - 1)


def _bins(triple, n_bins):
    # y_next and y_now are the same variable: one set of edges for both
    yb = discretize(np.concatenate([triple.y_next, triple.y_now]), n_bins)
    return yb[:triple.n], yb[triple.n:], discretize(triple.x_now, n_bins)


def _seqsum(values):
    return float(np.cumsum(values)[-1]) if len(values) else 0.0


def transfer_entropy(triple, cfg=TEConfig()):
    """Plug-in TE(X -> Y) in bits, i.e. I(Y[t+1]; X[t] | Y[t]) of the histogram.

    With ``f(c) = c log2 c`` summed over occupied cells of each marginal
    table, TE = (F(y',y,x) + F(y) - F(y,x) - F(y',y)) / n.
    """
    n = triple.n
    if n < 2:
        raise UndefinedStatisticError("transfer entropy needs at least two windows")
    nb = cfg.n_bins
    byn, byc, bx = _bins(triple, nb)
    flog = xlog2x_table(n)
    f3 = _seqsum(flog[np.bincount((byn * nb + byc) * nb + bx, minlength=nb ** 3)])
    fy = _seqsum(flog[np.bincount(byc, minlength=nb)])
    fyx = _seqsum(flog[np.bincount(byc * nb + bx, minlength=nb ** 2)])
    fyy = _seqsum(flog[np.bincount(byn * nb + byc, minlength=nb ** 2)])
    return max((f3 + fy - fyx - fyy) / float(n), 0.0)


def _design_residualizer(y_now):
    """Orthonormal basis of span{1, y_now}; raises when the design is singular."""
    design = np.column_stack([np.ones_like(y_now), y_now])
    q, r = np.linalg.qr(design)
    if abs(r[1, 1]) <= 1e-12 * max(1.0, abs(r[0, 0])):
        raise UndefinedStatisticError("restricted Granger design is collinear")
    return q


def granger_f(triple):
    """One-lag Granger F: ``y' ~ 1 + y`` against ``y' ~ 1 + y + x``."""
    return float(granger_f_batch(triple, triple.x_now[None, :])[0])


def granger_f_batch(triple, x_rows):
    """Granger F for several candidate ``x_now`` rows sharing the same y history.

    The unrestricted residual sum of squares follows from the restricted one by
    Frisch-Waugh: RSS_u = RSS_r - (e_x . e_y)^2 / (e_x . e_x), with e_* the
    residuals after projecting out the intercept and y_now.
    """
    n = triple.n
    if n < 5:
        raise UndefinedStatisticError("Granger test needs at least five windows")
    q = _design_residualizer(triple.y_now)
    e_y = triple.y_next - q @ (q.T @ triple.y_next)
    rss_r = float(e_y @ e_y)
    x_rows = np.atleast_2d(np.asarray(x_rows, dtype=float))
    e_x = x_rows - (x_rows @ q) @ q.T
    sxx = np.einsum("ij,ij->i", e_x, e_x)
    scale = np.einsum("ij,ij->i", x_rows, x_rows)
    if np.any(sxx <= 1e-12 * np.maximum(scale, 1e-300)):
        raise UndefinedStatisticError("x is collinear with the restricted design")
    explained = (e_x @ e_y) ** 2 / sxx
    rss_u = rss_r - explained
    if np.any(rss_u <= 1e-12 * max(rss_r, 1e-300)):
        raise UndefinedStatisticError("unrestricted Granger fit is exact")
    return explained / (rss_u / (n - 3))


def net_information_flow(te_xy, te_yx):
    """TE(X->Y) - TE(Y->X); positive when X leads."""
    return te_xy - te_yx

