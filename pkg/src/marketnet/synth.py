"""Synthetic panels with a known dependency and causality structure.

Prices share one Gaussian factor; positive-sentiment series of the coupled
assets feed their own asset's next-day price change. Negative sentiment never
couples, so it doubles as a control.
"""

import datetime as dt
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .ingest import Panel, SignalKind, series_label

START_DAY = dt.date(2018, 1, 2)


@dataclass(frozen=True)
class SynthSpec:
    n_assets: int
    n_days: int
    factor_loading: float = 0.0
    couple_fraction: float = 0.0
    coupling: float = 0.0
    missing_rate: float = 0.0
    seed: int = 0
    # how strongly sentiment series load on the price factor
    sentiment_loading: float = 0.0
    # per-asset loadings are spread over [1 - loading_spread, 1] times the nominal one
    loading_spread: float = 0.0
    # couple the assets with the largest price loadings instead of a random subset
    couple_by_loading: bool = False

    def __post_init__(self):
        checks = [
            (self.n_assets >= 1, "n_assets must be >= 1"),
            (self.n_days >= 45, "n_days must be >= 45"),
            (0 <= self.factor_loading < 1, "factor_loading must lie in [0, 1)"),
            (0 <= self.sentiment_loading < 1, "sentiment_loading must lie in [0, 1)"),
            (0 <= self.loading_spread <= 1, "loading_spread must lie in [0, 1]"),
            (0 <= self.couple_fraction <= 1, "couple_fraction must lie in [0, 1]"),
            (math.isfinite(self.coupling), "coupling must be finite"),
            (0 <= self.missing_rate < 1, "missing_rate must lie in [0, 1)"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(f"{message} (got {self})")


@dataclass(frozen=True)
class GroundTruth:
    """What the generator planted.

    ``couplings`` lists (source label, target label) pairs, i.e. an asset's
    positive sentiment driving its next-day price change.
    """

    asset_ids: tuple
    coupled_assets: tuple
    couplings: tuple
    price_loadings: np.ndarray
    sentiment_loadings: np.ndarray


def asset_ids(n_assets):
    width = max(3, len(str(n_assets - 1)))
    return tuple(f"A{i:0{width}d}" for i in range(n_assets))


def generate(spec):
    """Panel plus ground truth, fully determined by ``spec.seed``.

    Row order is every asset's price, then every asset's positive sentiment,
    then every asset's negative sentiment.
    """
    g = np.random.default_rng(spec.seed)
    n, T = spec.n_assets, spec.n_days
    ids = asset_ids(n)

    factor = g.standard_normal(T)
    spread = 1.0 - spec.loading_spread * g.random(n)
    beta = spec.factor_loading * spread
    gamma = spec.sentiment_loading * spread

    price = beta[:, None] * factor + np.sqrt(1 - beta ** 2)[:, None] * g.standard_normal((n, T))
    pos = gamma[:, None] * factor + np.sqrt(1 - gamma ** 2)[:, None] * g.standard_normal((n, T))
    neg = gamma[:, None] * factor + np.sqrt(1 - gamma ** 2)[:, None] * g.standard_normal((n, T))

    n_coupled = int(round(spec.couple_fraction * n))
    if spec.couple_by_loading:
        coupled = np.sort(np.argsort(-beta, kind="stable")[:n_coupled])
    else:
        coupled = np.sort(g.choice(n, size=n_coupled, replace=False))
    price[coupled, 1:] += spec.coupling * pos[coupled, :-1]

    data = np.vstack([price, pos, neg])
    mask = g.random(data.shape) >= spec.missing_rate
    calendar = [START_DAY + dt.timedelta(days=t) for t in range(T)]
    series_ids = [(a, k) for k in SignalKind for a in ids]
    panel = Panel(calendar, series_ids, np.where(mask, data, np.nan), mask)

    truth = GroundTruth(
        ids,
        tuple(ids[i] for i in coupled),
        tuple((series_label(ids[i], SignalKind.POS), series_label(ids[i], SignalKind.PRICE))
              for i in coupled),
        beta,
        gamma,
    )
    return panel, truth
