import json

import numpy as np
import pytest

from marketnet import files, synth
from marketnet.errors import InputFileError, ParseError
from marketnet.permval import PermutationConfig, validate_all_pairs


@pytest.fixture(scope="module")
def small():
    panel, _ = synth.generate(synth.SynthSpec(6, 60, factor_loading=0.6, missing_rate=0.1, seed=2))
    cfg = PermutationConfig(n_permutations=40, min_obs=20, global_seed=5)
    pr, ps = panel.rows("price"), panel.rows("pos")
    return panel, [validate_all_pairs(panel, pr, pr, "kendall", cfg),
                   validate_all_pairs(panel, ps, pr, "te", PermutationConfig(min_obs=40))]


def test_panel_round_trip(small, tmp_path):
    panel = small[0]
    files.write_panel(panel, tmp_path / "p.json")
    back = files.read_panel(tmp_path / "p.json")
    assert back.calendar == panel.calendar and back.series_ids == panel.series_ids
    np.testing.assert_array_equal(back.mask, panel.mask)
    np.testing.assert_array_equal(back.data[back.mask], panel.data[panel.mask])
    doc = json.loads((tmp_path / "p.json").read_text())
    assert set(doc) == {"calendar", "series_ids", "data"}


def test_edges_round_trip(small, tmp_path):
    _, mats = small
    files.write_edges(mats, tmp_path / "e.csv")
    text = (tmp_path / "e.csv").read_text()
    assert text.splitlines()[0] == "src,dst,kind,stat,null_mean,null_std,z,n_obs,valid"
    assert len(text.splitlines()) == 1 + 15 + 36
    blocks = files.read_edges(tmp_path / "e.csv")
    assert list(blocks) == [("kendall", "price", "price"), ("te", "pos", "price")]
    for m, back in zip(mats, blocks.values()):
        assert back.row_labels == m.row_labels and back.col_labels == m.col_labels
        assert back.symmetric == m.symmetric
        for f in ("stat", "null_mean", "null_std", "z", "n_obs"):
            np.testing.assert_array_equal(getattr(back, f), getattr(m, f))
        for z in (3.0, 4.5):
            np.testing.assert_array_equal(back.valid(z), m.valid(z))


def test_edges_written_valid_column_recounts(small, tmp_path):
    _, mats = small
    files.write_edges(mats[0], tmp_path / "e.csv")
    lines = (tmp_path / "e.csv").read_text().splitlines()[1:]
    assert sum(line.endswith(",true") for line in lines) == int(mats[0].valid(3.0)[mats[0].pair_mask()].sum())


def test_read_errors(tmp_path):
    with pytest.raises(InputFileError):
        files.read_edges(tmp_path / "missing.csv")
    (tmp_path / "bad.csv").write_text("a,b\n")
    with pytest.raises(ParseError):
        files.read_edges(tmp_path / "bad.csv")
    (tmp_path / "bad2.csv").write_text(",".join(files.EDGE_HEADER) + "\nA:price,B:price,kendall,x,0,0,0,3,true\n")
    with pytest.raises(ParseError, match="line 2"):
        files.read_edges(tmp_path / "bad2.csv")
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(ParseError):
        files.read_panel(tmp_path / "bad.json")


def test_json_nan_becomes_null(tmp_path):
    files.write_json({"b": float("nan"), "a": np.int64(3), "c": np.array([1.5, np.inf])}, tmp_path / "x.json")
    assert json.loads((tmp_path / "x.json").read_text()) == {"a": 3, "b": None, "c": [1.5, None]}
