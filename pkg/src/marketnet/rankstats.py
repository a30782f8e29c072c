"""Kendall tau-b, Spearman rho and Pearson r on paired samples."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from . import _backend
from .errors import DataError, UndefinedStatisticError


@dataclass(frozen=True)
class PairedSample:
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise DataError(f"paired sample needs equal-length 1-d sides, got {xs.shape} and {ys.shape}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise DataError("paired sample contains non-finite values")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self):
        return len(self.xs)

    def permuted(self, perm):
        """Null-model copy: ``ys`` shuffled by ``perm``, ``xs`` fixed."""
        return PairedSample(self.xs, self.ys[perm])


def _sample(sample, ys):
    if ys is not None:
        return PairedSample(sample, ys)
    return sample


def _tied_pairs(codes):
    counts = np.bincount(codes)
    return int((counts * (counts - 1) // 2).sum())


def kendall_tau(sample, ys=None):
    """Tie-corrected Kendall tau-b, O(n log n).

    Pairs are sorted by (x, y); the discordant pairs are then exactly the
    strict inversions of the y sequence, counted by merge sort (Knight's
    method). Accepts a :class:`PairedSample` or two sequences.
    """
    s = _sample(sample, ys)
    n = s.n
    if n < 2:
        raise UndefinedStatisticError("Kendall tau needs at least two observations")
    _, xr = np.unique(s.xs, return_inverse=True)
    _, yr = np.unique(s.ys, return_inverse=True)
    xr = xr.ravel().astype(np.int64)
    yr = yr.ravel().astype(np.int64)
    pairs = n * (n - 1) // 2
    tx = _tied_pairs(xr)
    ty = _tied_pairs(yr)
    if tx == pairs or ty == pairs:
        raise UndefinedStatisticError("Kendall tau is undefined for a constant margin")
    txy = _tied_pairs(xr * (yr.max() + 1) + yr)
    z = yr[np.lexsort((yr, xr))]
    discordant = _backend.kernels.merge_inversions(z.astype(np.int32))
    score = pairs - tx - ty + txy - 2 * discordant
    return float(score) / math.sqrt(float(pairs - tx) * float(pairs - ty))


def pearson_r(sample, ys=None):
    s = _sample(sample, ys)
    if s.n < 2:
        raise UndefinedStatisticError("Pearson r needs at least two observations")
    if np.ptp(s.xs) == 0 or np.ptp(s.ys) == 0:
        raise UndefinedStatisticError("Pearson r is undefined for a constant margin")
    dx = s.xs - s.xs.mean()
    dy = s.ys - s.ys.mean()
    r = float(dx @ dy) / math.sqrt(float(dx @ dx) * float(dy @ dy))
    return min(1.0, max(-1.0, r))


def spearman_rho(sample, ys=None):
    """Pearson correlation of mid-ranks."""
    s = _sample(sample, ys)
    if s.n < 2:
        raise UndefinedStatisticError("Spearman rho needs at least two observations")
    return pearson_r(rankdata(s.xs), rankdata(s.ys))
