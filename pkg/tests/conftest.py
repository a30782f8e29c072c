import datetime as dt
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from marketnet import _backend  # noqa: E402
from marketnet.ingest import Panel  # noqa: E402

BACKENDS = _backend.available()


def make_panel(data, mask=None, kinds=None, start=dt.date(2018, 1, 2), gaps=()):
    """Panel from a (series x days) array; ``gaps`` are column indices preceded by a skipped day."""
    data = np.asarray(data, dtype=float)
    if mask is None:
        mask = np.isfinite(data)
    days, d = [], start
    for t in range(data.shape[1]):
        if t in gaps:
            d += dt.timedelta(days=1)
        days.append(d)
        d += dt.timedelta(days=1)
    kinds = kinds or ["price"] * data.shape[0]
    ids = [(f"S{r:03d}", k) for r, k in enumerate(kinds)]
    return Panel(days, ids, np.where(mask, data, np.nan), mask)


@pytest.fixture(params=BACKENDS)
def kernels(request):
    return _backend.load(request.param)


@pytest.fixture
def tie_panel():
    """Heavy ties, ~20% missing, one calendar gap; enough days for both sweeps."""
    g = np.random.default_rng(7)
    n, T = 6, 90
    base = g.integers(0, 5, size=(n, T)).astype(float)
    base[1] = base[0] + g.integers(0, 2, size=T)
    base[3] = np.roll(base[2], 1)
    mask = g.random((n, T)) > 0.2
    return make_panel(base, mask, gaps=(40,))


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
