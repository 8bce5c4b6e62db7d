"""Figure data sweeps and file round trips."""

from __future__ import annotations

import json

import numpy as np
import pytest

from bloch_lab import (EnsembleSpec, max_entangled, maximally_mixed,
                       load_state, random_state, save_state, sweep_fig1, sweep_figA,
                       sweep_figB)
from bloch_lab.basis import gellmann_basis, split_basis
from bloch_lab.correlation import bases_with_split, bloch_coefficients
from bloch_lab.io import (basis_from_jsonable, basis_to_jsonable, fig1_to_jsonable,
                          figA_to_jsonable, figB_to_jsonable, load_config,
                          monotone_to_jsonable, report_to_jsonable, state_from_jsonable,
                          state_to_jsonable, tensor_to_jsonable, write_fig1_csv,
                          write_figA_csv, write_figB_csv)
from bloch_lab.monotone import correlation_monotone
from bloch_lab.entropy import check_subadditivity


# ---------------------------------------------------------------------------
# fig1: excess of the environment bound over the separable ceiling


def test_fig1_worst_case_endpoints():
    d1 = sweep_fig1(case="worst", points=101)
    assert d1.excess[2][0] == pytest.approx(4.0 / 3.0)
    for d in d1.d_values:
        assert d1.excess[d][-1] == 0.0  # exactly, not approximately
        assert np.all(np.diff(d1.excess[d]) <= 1e-12)
        assert not d1.clipped[d]


def test_fig1_best_case_endpoints():
    db = sweep_fig1(case="best", points=101)
    assert db.excess[2][0] == pytest.approx(4.0 / 9.0)
    assert db.excess[2][-1] == 0.0
    assert np.all(db.excess[3] >= 0.0)
    assert db.clipped[3]  # the d=3 curve dips below the ceiling and is clipped


def test_fig1_rejects_bad_arguments():
    with pytest.raises(ValueError):
        sweep_fig1(case="typical")
    with pytest.raises(ValueError):
        sweep_fig1(points=1)
    with pytest.raises(ValueError):
        sweep_fig1(d_values=(1, 2))


# ---------------------------------------------------------------------------
# figA / figB


def test_figA_surfaces_and_contour():
    da = sweep_figA(resolution=31)
    assert da.subadd_validation < 1e-8
    assert da.gen_pseudo_validation < 1e-8
    assert len(da.contour) > 0
    # both caps respect the global ceiling 1 - 1/4
    assert float(da.subadd.max()) <= 0.75 + 1e-12
    assert float(da.gen_pseudo.max()) <= 0.75 + 1e-12


def test_figB_counts():
    db = sweep_figB(dims=(2, 2, 2), resolution=9)
    assert db.n_removed == 0
    assert db.n_subadd == db.n_both > 0
    dc = sweep_figB(dims=(2, 2, 100), resolution=9)
    assert dc.n_removed > 0
    assert dc.n_both == dc.n_subadd - dc.n_removed


# ---------------------------------------------------------------------------
# CSV output


def test_fig1_csv_deterministic_and_schema(tmp_path):
    data = sweep_fig1(points=5)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    write_fig1_csv(data, p1, deterministic=True)
    write_fig1_csv(data, p2, deterministic=True)
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().splitlines()
    assert lines[0] == "t,excess_d2,excess_d3,excess_d4,excess_d100"
    assert len(lines) == 6
    # repr round trip: parsing a cell recovers the exact float
    cell = lines[1].split(",")[1]
    assert float(cell) == data.excess[2][0]


def test_fig1_csv_notes_clipping(tmp_path):
    data = sweep_fig1(case="best", points=21)
    path = tmp_path / "c.csv"
    write_fig1_csv(data, path, deterministic=True)
    header = [l for l in path.read_text().splitlines() if l.startswith("#")]
    assert any("clipped" in l for l in header)


def test_fig1_csv_timestamps_by_default(tmp_path):
    path = tmp_path / "d.csv"
    write_fig1_csv(sweep_fig1(points=3), path)
    assert path.read_text().startswith("# generated ")


def test_figA_figB_csv_schema(tmp_path):
    pa = tmp_path / "a.csv"
    write_figA_csv(sweep_figA(resolution=5), pa, deterministic=True)
    lines = pa.read_text().splitlines()
    assert lines[0] == "s_a,s_b,max_sab_subadd,max_sab_genpseudo"
    assert len(lines) == 1 + 25

    pb = tmp_path / "b.csv"
    write_figB_csv(sweep_figB(resolution=5), pb, deterministic=True)
    lines = pb.read_text().splitlines()
    assert lines[0] == "s_a,s_b,s_c,subadd_ok,genpseudo_ok"
    assert len(lines) == 1 + 125
    assert set(lines[1].split(",")[3:]) <= {"0", "1"}


def test_figure_jsonables_are_serializable():
    for payload in (fig1_to_jsonable(sweep_fig1(points=3)),
                    figA_to_jsonable(sweep_figA(resolution=5)),
                    figB_to_jsonable(sweep_figB(resolution=5))):
        json.dumps(payload)


# ---------------------------------------------------------------------------
# state and basis files


def test_state_file_round_trip(tmp_path):
    s = random_state((2, 3), EnsembleSpec(kind="hilbert-schmidt", seed=3), index=1)
    path = tmp_path / "state.json"
    save_state(s, path)
    loaded = load_state(path)
    assert loaded.dims == (2, 3)
    np.testing.assert_allclose(loaded.matrix, s.matrix, atol=1e-15)


def test_load_state_reports_json_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\n  broken\n}")
    with pytest.raises(ValueError, match="line"):
        load_state(path)


def test_state_jsonable_field_errors():
    with pytest.raises(ValueError, match="dims"):
        state_from_jsonable({"matrix": []})
    with pytest.raises(ValueError, match="matrix"):
        state_from_jsonable({"dims": [2]})
    good = state_to_jsonable(maximally_mixed((2,)))
    bad = dict(good, matrix=[[[1.0, 0.0], [0.0]], good["matrix"][1]])
    with pytest.raises(ValueError):
        state_from_jsonable(bad)


def test_basis_round_trip():
    for b in (gellmann_basis(3), split_basis(4, 2)):
        again = basis_from_jsonable(basis_to_jsonable(b))
        assert again.dim == b.dim
        assert again.cut == b.cut
        for e1, e2 in zip(b.elements, again.elements):
            assert e1.sector == e2.sector
            np.testing.assert_allclose(e1.matrix, e2.matrix, atol=1e-15)


def test_tensor_jsonable_shapes():
    co = bloch_coefficients(max_entangled(2))
    payload = tensor_to_jsonable(co)
    assert payload["c0"] is None
    norms = {tuple(s["v"]): s["norm_sq"] for s in payload["subsets"]}
    assert norms[(0, 1)] == pytest.approx(3.0)

    split_co = bloch_coefficients(max_entangled(2), bases_with_split((2, 2), 1, 1))
    sp = tensor_to_jsonable(split_co)
    assert sp["c0"] is not None
    assert "purity" in sp
    json.dumps(sp)


def test_report_and_monotone_jsonables():
    rep = report_to_jsonable(check_subadditivity(maximally_mixed((2, 2)), q=2.0))
    assert rep["inequality"] == "subadd"
    assert rep["holds"] is True
    mono = monotone_to_jsonable(correlation_monotone(max_entangled(2), ((0,), (1,))))
    assert mono["value"] == pytest.approx(1.0)
    json.dumps(mono)


# ---------------------------------------------------------------------------
# config files


def test_load_config(tmp_path):
    path = tmp_path / "cfg"
    path.write_text("# comment\nseed=4\n\nsamples = 10\n")
    assert load_config(path) == {"seed": "4", "samples": "10"}


def test_load_config_reports_line(tmp_path):
    path = tmp_path / "cfg"
    path.write_text("seed=4\nnot a pair\n")
    with pytest.raises(ValueError, match="line 2"):
        load_config(path)
