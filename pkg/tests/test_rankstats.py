import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

import oracles
from marketnet.errors import DataError, UndefinedStatisticError
from marketnet.rankstats import PairedSample, kendall_tau, pearson_r, spearman_rho


@pytest.mark.parametrize("ys,tau", [([1, 2, 3, 4, 5], 1.0), ([5, 4, 3, 2, 1], -1.0),
                                    ([3, 1, 2, 5, 4], 0.4)])
def test_kendall_examples(ys, tau):
    assert kendall_tau([1, 2, 3, 4, 5], ys) == pytest.approx(tau, abs=1e-15)


def test_spearman_and_pearson_examples():
    assert spearman_rho([1, 2, 3, 4], [1, 2, 3, 4]) == 1.0
    assert spearman_rho([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0
    assert spearman_rho([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)
    x = np.linspace(-3, 7, 25)
    assert pearson_r(x, 2 * x + 1) == 1.0
    assert pearson_r(x, -x) == -1.0


def test_pearson_independent_samples_small():
    g = np.random.default_rng(0)
    rs = [pearson_r(g.standard_normal(2000), g.standard_normal(2000)) for _ in range(50)]
    assert np.mean(np.abs(rs) < 0.1) >= 0.95


@pytest.mark.parametrize("fn", [kendall_tau, spearman_rho, pearson_r])
def test_degenerate_inputs_raise(fn):
    with pytest.raises(UndefinedStatisticError):
        fn([1.0, 2.0, 3.0], [2.0, 2.0, 2.0])
    with pytest.raises(UndefinedStatisticError):
        fn([1.0], [2.0])


def test_paired_sample_validation():
    with pytest.raises(DataError):
        PairedSample([1.0, 2.0], [1.0])
    with pytest.raises(DataError):
        PairedSample([1.0, np.nan], [1.0, 2.0])
    s = PairedSample([1, 2, 3], [4, 5, 6])
    assert s.n == 3 and s.permuted([2, 0, 1]).ys.tolist() == [6.0, 4.0, 5.0]


def test_kendall_matches_enumeration_and_scipy_with_ties():
    g = np.random.default_rng(42)
    for _ in range(300):
        n = int(g.integers(2, 61))
        xs = g.integers(0, int(g.integers(1, 8)) + 1, n).astype(float)
        ys = g.integers(0, int(g.integers(1, 8)) + 1, n).astype(float)
        if np.ptp(xs) == 0 or np.ptp(ys) == 0:
            continue
        got = kendall_tau(xs, ys)
        assert abs(got - oracles.kendall_tau_b(xs.tolist(), ys.tolist())) <= 1e-14
        assert got == pytest.approx(stats.kendalltau(xs, ys).statistic, abs=1e-12)


def test_spearman_matches_scipy():
    g = np.random.default_rng(3)
    for _ in range(50):
        xs, ys = g.integers(0, 5, 30), g.standard_normal(30)
        assert spearman_rho(xs, ys) == pytest.approx(stats.spearmanr(xs, ys).statistic, abs=1e-12)


pairs = st.integers(2, 40).flatmap(lambda n: st.tuples(
    st.lists(st.integers(-5, 5), min_size=n, max_size=n),
    st.lists(st.integers(-5, 5), min_size=n, max_size=n)))


@settings(max_examples=150, deadline=None)
@given(pairs)
def test_symmetry_range_and_monotone_invariance(sample):
    xs, ys = (np.array(v, dtype=float) for v in sample)
    if np.ptp(xs) == 0 or np.ptp(ys) == 0:
        return
    for fn in (kendall_tau, spearman_rho, pearson_r):
        v = fn(xs, ys)
        assert -1.0 <= v <= 1.0
        assert fn(ys, xs) == pytest.approx(v, abs=1e-14)
    for fn in (kendall_tau, spearman_rho):
        assert fn(np.exp(xs), ys ** 3) == pytest.approx(fn(xs, ys), abs=1e-14)
