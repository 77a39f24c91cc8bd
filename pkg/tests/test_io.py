import numpy as np
from hypothesis import given, settings, strategies as st

from traplab.btm import simulate_btm_path
from traplab.env import sample_atoms, sample_trap_depths
from traplab.io import (environment_from_ndjson, environment_to_ndjson, measure_from_ndjson,
                        measure_to_ndjson, read_csv, read_json, read_ndjson,
                        trajectory_to_ndjson, write_csv, write_json)


def test_environment_roundtrip(tmp_path):
    env = sample_trap_depths(0.5, (-10, 10), 7)
    back = environment_from_ndjson(environment_to_ndjson(env, tmp_path / "e.ndjson"))
    assert np.array_equal(back.depths, env.depths) and back.z_lo == -10 and back.key == env.key


def test_measure_roundtrip(tmp_path):
    m = sample_atoms(0.5, (-2, 2), 1e-2, 8)
    back = measure_from_ndjson(measure_to_ndjson(m, tmp_path / "m.ndjson"))
    assert np.array_equal(back.positions, m.positions)
    assert np.array_equal(back.weights, m.weights) and back.v_min == m.v_min


def test_trajectory_records(tmp_path):
    env = sample_trap_depths(0.5, (-30, 30), 9)
    tr = simulate_btm_path(env, 5.0, 9)
    header, recs = read_ndjson(trajectory_to_ndjson(tr, tmp_path / "t.ndjson"))
    assert header["kind"] == "trajectory" and len(recs) == tr.n_events
    assert all(set(r) == {"time", "position"} for r in recs)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(-10**9, 10**9), st.floats(allow_nan=False,
                                                                  allow_infinity=False)),
                max_size=20))
def test_csv_roundtrip(tmp_path_factory, rows):
    p = tmp_path_factory.mktemp("csv") / "a.csv"
    write_csv(p, ["i", "v"], rows, {"seed": 3, "note": "x"})
    meta, cols, back = read_csv(p)
    assert meta == {"seed": 3, "note": "x"} and cols == ["i", "v"]
    assert [(int(a), b) for a, b in back] == [(a, b) for a, b in rows]


def test_json_special_values(tmp_path):
    write_json(tmp_path / "r.json", {"inf": float("inf"), "arr": np.arange(3), "b": np.bool_(1)})
    assert read_json(tmp_path / "r.json") == {"inf": "inf", "arr": [0, 1, 2], "b": True}
