import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqchaos.errors import FormatError, IntegrityError
from dqchaos.io import (
    check_fingerprints,
    read_grid,
    read_manifest,
    read_record,
    read_table,
    write_grid,
    write_grid_csv,
    write_manifest,
    write_record,
    write_table,
)
from dqchaos.observables import TrajectoryRecord, husimi
from dqchaos.params import SimParams
from dqchaos.quantum import make_gaussian
from dqchaos.trajectory import InitialCondition, run_trajectory

floats = st.floats(allow_nan=True, allow_infinity=True, width=64)


def _record(draw_vals, n):
    f = lambda k: np.array(draw_vals[k * n:(k + 1) * n], dtype=np.float64)  # noqa: E731
    p = SimParams(K=7, hbar=0.1, gamma=0.5, seed=3)
    return TrajectoryRecord(
        mean_x=f(0), resultant=f(1), mean_p=f(2), var_x=f(3), var_p=f(4),
        jumps_l1=np.arange(n, dtype=np.int64), jumps_l2=np.arange(n, dtype=np.int64)[::-1].copy(),
        edge_probability=f(5), fingerprint=p.fingerprint(), seed=3, index=11,
        params=p.to_dict(), initial={"mean_x": 0.5, "resultant": 1.0, "mean_p": -0.0,
                                     "var_x": 1e-300, "var_p": 0.1 + 0.2},
    )


@given(st.integers(1, 12).flatmap(lambda n: st.lists(floats, min_size=6 * n, max_size=6 * n)))
def test_record_round_trip_property(tmp_path_factory, vals):
    n = len(vals) // 6
    rec = _record(vals, n)
    path = tmp_path_factory.mktemp("rec") / "r.csv"
    write_record(path, rec)
    assert read_record(path).equals(rec)


def test_simulated_record_round_trip(tmp_path):
    p = SimParams(K=7, hbar=0.05, gamma=0.5, n_basis=2048, n_kicks=25, seed=8)
    rec = run_trajectory(p, InitialCondition(), index=4)
    write_record(tmp_path / "r.csv", rec)
    back = read_record(tmp_path / "r.csv")
    assert back.equals(rec)
    assert np.array_equal(back.sigma_bar, rec.sigma_bar)


def test_record_fingerprint_mismatch(tmp_path):
    p = SimParams(K=7, hbar=0.05, gamma=0.5, n_basis=2048, n_kicks=3)
    rec = run_trajectory(p, InitialCondition())
    rec.fingerprint = "0" * 16
    write_record(tmp_path / "r.csv", rec)
    with pytest.raises(IntegrityError):
        read_record(tmp_path / "r.csv")


def test_truncated_and_malformed_tables(tmp_path):
    path = write_table(tmp_path / "t.csv", ("a", "b"), [(1, 2.5), (3, -0.0)], {"a": "1"})
    tab = read_table(path)
    assert tab.data == {"a": [1, 3], "b": [2.5, -0.0]} and tab.units["a"] == "1"
    text = path.read_text()
    cut = tmp_path / "cut.csv"
    cut.write_text(text[: text.index("# end")])
    with pytest.raises(FormatError, match="truncated"):
        read_table(cut)
    bad = tmp_path / "bad.csv"
    bad.write_text(text.replace("2.5", "2.5x"))
    with pytest.raises(FormatError) as exc:
        read_table(bad)
    assert exc.value.line == 6
    short = tmp_path / "short.csv"
    short.write_text(text.replace("# end rows=2", "# end rows=3"))
    with pytest.raises(FormatError):
        read_table(short)


def _grid():
    psi = make_gaussian(2.0, 0.5, SimParams(K=1, hbar=0.05, gamma=0.5, n_basis=512))
    return husimi(psi, (-3.0, 4.0), n_x=64, n_p=48, fingerprint="abc")


def test_grid_round_trip(tmp_path):
    g = _grid()
    write_grid(tmp_path / "g.grid", g)
    back = read_grid(tmp_path / "g.grid")
    assert np.array_equal(back.values, g.values)
    assert np.array_equal(back.p, g.p) and np.allclose(back.x, g.x, rtol=0, atol=0)
    assert (back.hbar, back.squeezing, back.fingerprint) == (g.hbar, g.squeezing, "abc")
    write_grid_csv(tmp_path / "g.csv", g)
    tab = read_table(tmp_path / "g.csv")
    assert tab.n_rows == 64 * 48
    assert np.array_equal(np.array(tab.data["value"]).reshape(48, 64), g.values)


def test_truncated_grid_is_a_parse_error(tmp_path):
    write_grid(tmp_path / "g.grid", _grid())
    raw = (tmp_path / "g.grid").read_bytes()
    (tmp_path / "cut.grid").write_bytes(raw[:-100])
    with pytest.raises(FormatError) as exc:
        read_grid(tmp_path / "cut.grid")
    assert exc.value.offset is not None
    (tmp_path / "junk.grid").write_bytes(b"NOPE" + raw[4:])
    with pytest.raises(FormatError):
        read_grid(tmp_path / "junk.grid")
    flipped = bytearray(raw)
    flipped[-1] ^= 0xFF
    (tmp_path / "flip.grid").write_bytes(bytes(flipped))
    with pytest.raises(IntegrityError):
        read_grid(tmp_path / "flip.grid")


def test_manifest_round_trip_and_integrity(tmp_path):
    a = write_table(tmp_path / "a.csv", ("x",), [(1.0,)])
    b = write_table(tmp_path / "b.csv", ("x",), [(2.0,)])
    write_manifest(tmp_path / "manifest.json", {"kind": "demo"}, [b, a])
    doc = read_manifest(tmp_path / "manifest.json")
    assert sorted(doc["outputs"]) == ["a.csv", "b.csv"] and doc["format_version"] == 1
    first = (tmp_path / "manifest.json").read_bytes()
    write_manifest(tmp_path / "manifest.json", {"kind": "demo"}, [a, b])
    assert (tmp_path / "manifest.json").read_bytes() == first
    b.write_text(b.read_text().replace("2.0", "3.0"))
    with pytest.raises(IntegrityError):
        read_manifest(tmp_path / "manifest.json")
    (tmp_path / "broken.json").write_text('{"format_version": 1,')
    with pytest.raises(FormatError):
        read_manifest(tmp_path / "broken.json")


def test_fingerprint_mixing_rejected():
    assert check_fingerprints(["a", "a"]) == "a"
    with pytest.raises(IntegrityError):
        check_fingerprints(["a", "b"])


def test_meta_is_json(tmp_path):
    path = write_table(tmp_path / "m.csv", ("x",), [], meta={"k": [1, 2]})
    tab = read_table(path)
    assert tab.meta == {"k": [1, 2]} and tab.n_rows == 0
    assert json.loads(path.read_text().splitlines()[2][len("# meta="):]) == {"k": [1, 2]}
    assert math.isnan(float("nan"))
