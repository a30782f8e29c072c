"""Hourly records to daily series to an aligned panel of log-variations."""

import csv
import datetime as dt
import enum
import io
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParseError, ValidationError

HEADER = ("asset_id", "timestamp", "price", "pos_volume", "neg_volume")
ONE_DAY = dt.timedelta(days=1)


class SignalKind(str, enum.Enum):
    PRICE = "price"
    POS = "pos"
    NEG = "neg"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RawRecord:
    asset_id: str
    timestamp: dt.datetime
    price: float | None
    pos_volume: int | None
    neg_volume: int | None


@dataclass(frozen=True)
class ObservationSeries:
    asset_id: str
    kind: SignalKind
    days: tuple
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "days", tuple(self.days))
        object.__setattr__(self, "values", values)
        if len(self.days) != len(values):
            raise DataError(f"{self.asset_id}:{self.kind}: {len(self.days)} days but {len(values)} values")
        if any(b <= a for a, b in zip(self.days, self.days[1:])):
            raise DataError(f"{self.asset_id}:{self.kind}: days must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DataError(f"{self.asset_id}:{self.kind}: non-finite value")

    def __len__(self):
        return len(self.days)


def series_label(asset_id, kind):
    return f"{asset_id}:{SignalKind(kind).value}"


def split_label(label):
    asset_id, _, kind = label.rpartition(":")
    return asset_id, SignalKind(kind)


@dataclass(frozen=True)
class Panel:
    """Daily log-variations on a shared calendar.

    ``data[r, t]`` is meaningful only where ``mask[r, t]``; elsewhere it is NaN.
    Arrays are read-only so a panel can be shared across worker threads.
    """

    calendar: tuple
    series_ids: tuple
    data: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, order="C")
        mask = np.array(self.mask, dtype=bool, order="C")
        calendar = tuple(self.calendar)
        series_ids = tuple((str(a), SignalKind(k)) for a, k in self.series_ids)
        if data.shape != (len(series_ids), len(calendar)) or mask.shape != data.shape:
            raise DataError(f"panel shape {data.shape} does not match "
                            f"{len(series_ids)} series x {len(calendar)} days")
        if any(b <= a for a, b in zip(calendar, calendar[1:])):
            raise DataError("calendar must be strictly increasing")
        if not np.all(np.isfinite(data[mask])):
            raise DataError("non-finite value under the mask")
        data[~mask] = np.nan
        data.flags.writeable = False
        mask.flags.writeable = False
        for name, value in (("calendar", calendar), ("series_ids", series_ids),
                            ("data", data), ("mask", mask)):
            object.__setattr__(self, name, value)

    @property
    def n_series(self):
        return len(self.series_ids)

    @property
    def n_days(self):
        return len(self.calendar)

    @property
    def labels(self):
        return [series_label(a, k) for a, k in self.series_ids]

    @property
    def consecutive(self):
        """``consecutive[t]`` is true when calendar days t and t+1 are adjacent."""
        return np.array([b - a == ONE_DAY for a, b in zip(self.calendar, self.calendar[1:])],
                        dtype=bool)

    def rows(self, kind):
        kind = SignalKind(kind)
        return [r for r, (_, k) in enumerate(self.series_ids) if k is kind]

    def index(self, asset_id, kind):
        try:
            return self.series_ids.index((asset_id, SignalKind(kind)))
        except ValueError:
            raise KeyError(series_label(asset_id, kind)) from None


def _parse_timestamp(text, line):
    if not text.endswith("Z"):
        raise ParseError(f"timestamp {text!r} lacks the Z suffix", line)
    try:
        ts = dt.datetime.fromisoformat(text[:-1])
    except ValueError:
        raise ParseError(f"bad timestamp {text!r}", line) from None
    if ts.tzinfo is not None:
        raise ParseError(f"timestamp {text!r} carries an offset besides Z", line)
    if ts.minute or ts.second or ts.microsecond:
        raise ParseError(f"timestamp {text!r} is not on the hour", line)
    return ts.replace(tzinfo=dt.timezone.utc)


def _parse_volume(text, name, line):
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"bad {name} {text!r}", line) from None
    if not math.isfinite(value) or value != int(value):
        raise ParseError(f"{name} {text!r} is not an integer count", line)
    if value < 0:
        raise ValidationError(f"negative {name} {text!r}", line)
    return int(value)


def parse_records(source):
    """Read a record file (bytes, or a binary/text stream).

    Returns records grouped by asset (sorted by id) and by timestamp within
    an asset. Duplicate (asset, hour) rows are an error.
    """
    if isinstance(source, (bytes, bytearray)):
        text = io.StringIO(bytes(source).decode("utf-8-sig"))
    else:
        raw = source.read()
        text = io.StringIO(raw.decode("utf-8-sig") if isinstance(raw, bytes) else raw)
    reader = csv.reader(text)
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != HEADER:
        raise ParseError(f"expected header {','.join(HEADER)}", 1)

    records = []
    seen = {}
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(HEADER):
            raise ParseError(f"expected {len(HEADER)} fields, got {len(row)}", line)
        asset_id, stamp, price_text, pos_text, neg_text = (f.strip() for f in row)
        if not asset_id:
            raise ParseError("empty asset_id", line)
        ts = _parse_timestamp(stamp, line)
        price = None
        if price_text != "":
            try:
                price = float(price_text)
            except ValueError:
                raise ParseError(f"bad price {price_text!r}", line) from None
            if not math.isfinite(price) or price <= 0:
                raise ValidationError(f"price must be positive, got {price_text!r}", line)
        rec = RawRecord(asset_id, ts, price,
                        _parse_volume(pos_text, "pos_volume", line),
                        _parse_volume(neg_text, "neg_volume", line))
        key = (asset_id, ts)
        if key in seen:
            raise ValidationError(f"duplicate record for {asset_id} at {stamp} "
                                  f"(first seen on line {seen[key]})", line)
        seen[key] = line
        records.append(rec)
    records.sort(key=lambda r: (r.asset_id, r.timestamp))
    return records


def aggregate_daily(records):
    """Per asset: mean daily price and total daily positive/negative volume.

    Days without any usable hourly value are left out rather than zero-filled.
    """
    prices = defaultdict(lambda: defaultdict(list))
    volumes = {SignalKind.POS: defaultdict(lambda: defaultdict(int)),
               SignalKind.NEG: defaultdict(lambda: defaultdict(int))}
    assets = set()
    for rec in records:
        assets.add(rec.asset_id)
        day = rec.timestamp.astimezone(dt.timezone.utc).date()
        if rec.price is not None:
            prices[rec.asset_id][day].append(rec.price)
        for kind, vol in ((SignalKind.POS, rec.pos_volume), (SignalKind.NEG, rec.neg_volume)):
            if vol is not None:
                volumes[kind][rec.asset_id][day] += vol

    out = []
    for asset in sorted(assets):
        days = sorted(prices[asset])
        # fsum is exactly rounded, so the mean ignores within-day record order
        out.append(ObservationSeries(asset, SignalKind.PRICE, days,
                                     [math.fsum(prices[asset][d]) / len(prices[asset][d]) for d in days]))
        for kind in (SignalKind.POS, SignalKind.NEG):
            days = sorted(volumes[kind][asset])
            out.append(ObservationSeries(asset, kind, days,
                                         [float(volumes[kind][asset][d]) for d in days]))
    return out


def log_variation(series, zero_volume="missing"):
    """Day-on-day change of the log level.

    A value is emitted for day t only when day t-1 is also present. Zero
    sentiment volumes count as missing (``zero_volume="missing"``) or are
    shifted as ``log(1 + v)`` (``zero_volume="shifted"``).
    """
    values = series.values
    if series.kind is SignalKind.PRICE:
        if np.any(values <= 0):
            raise DataError(f"{series.asset_id}: non-positive price")
        logs = np.log(values)
        usable = np.ones(len(values), dtype=bool)
    elif zero_volume == "missing":
        usable = values > 0
        logs = np.log(np.where(usable, values, 1.0))
    elif zero_volume == "shifted":
        usable = np.ones(len(values), dtype=bool)
        logs = np.log1p(values)
    else:
        raise ValueError(f"unknown zero_volume policy {zero_volume!r}")

    days, out = [], []
    for t in range(1, len(values)):
        if series.days[t] - series.days[t - 1] == ONE_DAY and usable[t] and usable[t - 1]:
            days.append(series.days[t])
            out.append(logs[t] - logs[t - 1])
    return ObservationSeries(series.asset_id, series.kind, days, out)


def build_panel(series):
    series = list(series)
    if not series:
        raise DataError("cannot build a panel from no series")
    calendar = sorted({d for s in series for d in s.days})
    col = {d: c for c, d in enumerate(calendar)}
    data = np.full((len(series), len(calendar)), np.nan)
    mask = np.zeros(data.shape, dtype=bool)
    for r, s in enumerate(series):
        cols = [col[d] for d in s.days]
        data[r, cols] = s.values
        mask[r, cols] = True
    return Panel(calendar, [(s.asset_id, s.kind) for s in series], data, mask)


def pairwise_overlap(panel, i, j):
    both = panel.mask[i] & panel.mask[j]
    xs = panel.data[i, both].copy()
    ys = panel.data[j, both].copy()
    return xs, ys, int(both.sum())


def assets_per_day(series, kind=SignalKind.PRICE):
    """Number of assets with an observation of ``kind`` on each calendar day."""
    counts = defaultdict(int)
    for s in series:
        if s.kind is SignalKind(kind):
            for d in s.days:
                counts[d] += 1
    return sorted(counts.items())


def panel_from_records(records, zero_volume="missing"):
    daily = aggregate_daily(records)
    return build_panel(log_variation(s, zero_volume) for s in daily)
