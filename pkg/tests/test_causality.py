import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import make_panel
from marketnet.causality import (LaggedTriple, TEConfig, build_lagged_triple, discretize,
                                 granger_f, lag_windows, net_information_flow, transfer_entropy)
from marketnet.errors import ConfigError, UndefinedStatisticError
from marketnet.permval import PermutationConfig, permutation_z


def test_te_config_bounds():
    assert TEConfig().n_bins == 4
    for bad in (2, 7):
        with pytest.raises(ConfigError):
            TEConfig(n_bins=bad)
    with pytest.raises(ConfigError):
        TEConfig(log_base=10)


def test_lagged_triple_windows():
    full = make_panel(np.arange(20.0).reshape(2, 10))
    assert build_lagged_triple(full, 0, 1).n == 9

    mask = np.ones((2, 10), dtype=bool)
    mask[1, 4] = False  # y missing on day 5
    assert build_lagged_triple(make_panel(np.ones((2, 10)), mask), 0, 1).n == 7

    mask = np.zeros((2, 10), dtype=bool)
    mask[0, :5] = True
    mask[1, 5:] = True
    assert build_lagged_triple(make_panel(np.ones((2, 10)), mask), 0, 1).n == 0


def test_windows_respect_calendar_gaps():
    panel = make_panel(np.random.default_rng(0).standard_normal((2, 10)), gaps=(5,))
    assert lag_windows(panel, 0, 1).tolist() == [0, 1, 2, 3, 5, 6, 7, 8]


def test_triple_alignment():
    g = np.random.default_rng(1)
    data = g.standard_normal((2, 12))
    t = build_lagged_triple(make_panel(data), 0, 1)
    np.testing.assert_array_equal(t.y_next, data[1, 1:])
    np.testing.assert_array_equal(t.y_now, data[1, :-1])
    np.testing.assert_array_equal(t.x_now, data[0, :-1])


def test_discretize():
    assert discretize([0, 1, 2, 3], 4).tolist() == [0, 1, 2, 3]
    assert discretize([0.0, 0.5, 10.0], 3).tolist() == [0, 0, 2]
    with pytest.raises(UndefinedStatisticError):
        discretize([2.0, 2.0], 4)


def test_alternating_independent_series_give_zero():
    y = np.tile([0.0, 1.0], 20)
    x = np.tile([0.0, 0.0, 1.0, 1.0], 10)
    t = LaggedTriple(y[1:], y[:-1], x[:-1])
    assert transfer_entropy(t) == 0.0


def test_binary_channel_is_one_bit():
    x = np.random.default_rng(0).integers(0, 2, 10001).astype(float)
    y = np.concatenate([[0.0], x[:-1]])
    te = transfer_entropy(LaggedTriple(y[1:], y[:-1], x[:-1]))
    assert te == pytest.approx(1.0, abs=0.05)


def test_te_matches_cell_loop_oracle():
    g = np.random.default_rng(5)
    for _ in range(150):
        n = int(g.integers(4, 41))
        nb = int(g.integers(3, 7))
        t = LaggedTriple(*g.standard_normal((3, n)))
        te = transfer_entropy(t, TEConfig(nb))
        assert te >= 0
        assert abs(te - max(oracles.transfer_entropy(t.y_next, t.y_now, t.x_now, nb), 0.0)) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(st.integers(8, 40).flatmap(
    lambda n: st.lists(st.floats(-100, 100, allow_nan=False), min_size=3 * n, max_size=3 * n)),
    st.floats(0.5, 20), st.floats(-50, 50))
def test_te_affine_invariance(values, scale, shift):
    a = np.array(values).reshape(3, -1)
    t = LaggedTriple(*a)
    try:
        base = transfer_entropy(t)
    except UndefinedStatisticError:
        return
    moved = LaggedTriple(a[0], a[1], a[2] * scale + shift)
    assert transfer_entropy(moved) == pytest.approx(base, abs=1e-12)


def test_te_degenerate():
    with pytest.raises(UndefinedStatisticError):
        transfer_entropy(LaggedTriple([1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [5.0, 5.0, 5.0]))
    with pytest.raises(UndefinedStatisticError):
        transfer_entropy(LaggedTriple([1.0], [1.0], [1.0]))


def test_granger_matches_normal_equations():
    g = np.random.default_rng(2)
    for _ in range(40):
        n = int(g.integers(6, 60))
        yn, yc, xc = g.standard_normal((3, n))
        yn = yn + 0.5 * xc
        want = oracles.granger_f(yn, yc, xc)
        assert granger_f(LaggedTriple(yn, yc, xc)) == pytest.approx(want, rel=1e-9, abs=1e-9)


def test_granger_degenerate():
    y = np.random.default_rng(0).standard_normal(30)
    with pytest.raises(UndefinedStatisticError):
        granger_f(LaggedTriple(y[1:], y[:-1], np.zeros(29)))
    with pytest.raises(UndefinedStatisticError):
        granger_f(LaggedTriple(y[:4], y[1:5], y[2:6]))


def _granger_z(seed, strength):
    g = np.random.default_rng(seed)
    x = g.standard_normal(100)
    y_now = g.standard_normal(100)
    y_next = strength * x + 0.3 * g.standard_normal(100)
    cfg = PermutationConfig(min_obs=20, global_seed=seed)
    return permutation_z(granger_f, LaggedTriple(y_next, y_now, x), cfg, (0, 1, "granger")).z


def test_granger_permutation_z():
    assert all(_granger_z(s, 0.9) > 3 for s in range(10))
    assert np.mean([_granger_z(s, 0.0) <= 3 for s in range(60)]) >= 0.95


def test_directionality_on_lagged_pairs():
    fwd = rev = 0
    runs = 30
    for seed in range(runs):
        g = np.random.default_rng(seed)
        x = g.standard_normal(151)
        y = np.empty(151)
        y[0] = g.standard_normal()
        y[1:] = 0.8 * x[:-1] + g.standard_normal(150)
        cfg = PermutationConfig(min_obs=40, global_seed=seed)
        fwd += permutation_z(transfer_entropy, LaggedTriple(y[1:], y[:-1], x[:-1]), cfg,
                             (0, 1, "te")).valid
        rev += permutation_z(transfer_entropy, LaggedTriple(x[1:], x[:-1], y[:-1]), cfg,
                             (1, 0, "te")).valid
    assert fwd / runs >= 0.9 and rev / runs <= 0.1


def test_net_information_flow():
    assert net_information_flow(0.3, 0.3) == 0
    assert net_information_flow(1.0, 0.2) == pytest.approx(0.8)
    assert net_information_flow(0.1, 0.4) == -net_information_flow(0.4, 0.1)
