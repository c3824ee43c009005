import itertools

import pytest

import sandcube


def test_simplex_size_and_points():
    assert sandcube.simplex_size(3, 8) == 20
    pts = sandcube.simplex_points(2, 4)
    assert pts == [[1, 1], [2, 1], [2, 2]]
    assert sandcube.fold([0, 2], 4) == [2, 1]


def test_line_terminal_odometer():
    run = sandcube.stabilize(1, 6)
    assert run["stabilized"]
    assert run["odometer"] == [6, 5, 3]
    assert run["final_time"] == 9


def test_symmetric_engine_matches_full_cube():
    dim, side = 2, 6
    sym = sandcube.stabilize(dim, side)
    full = sandcube.stabilize_full(dim, side)
    assert sym["final_time"] == full["final_time"]
    spec = sandcube.CubeSpec(dim, side)
    coords = range(spec.lo, spec.hi + 1)
    points = sandcube.simplex_points(dim, side)
    for value, y in zip(full["odometer"], itertools.product(coords, repeat=dim)):
        assert value == sym["odometer"][points.index(sandcube.fold(list(y), side))]


def test_snapshots_and_budget():
    run = sandcube.stabilize(2, 16, max_steps=5, snapshot_stride=2)
    assert not run["stabilized"]
    assert sorted(run["snapshots"]) == [0, 1, 2, 4, 5]


def test_verify_lines():
    lines = sandcube.verify("dimensional-reduction", dim=2, side=8)
    assert lines == ["CHECK dimensional-reduction d=2 N=8 k=0 VERDICT=pass"]
    probe = sandcube.verify("table1-probe", dim=2, side=2, background=1)
    assert "VERDICT=violated-observation" in probe[0]
    with pytest.raises(sandcube.SandcubeError):
        sandcube.verify("no-such-check")


def test_radial_and_critical():
    line, _ = sandcube.radial_closed_form(10)
    assert "VERDICT=pass" in line
    assert sandcube.m1_critical(4) == (1, 2)


def test_render_and_palette():
    img = sandcube.render_ppm(2, 8)
    assert img.startswith(b"P6\n8 8\n255\n")
    assert len(img) == len(b"P6\n8 8\n255\n") + 8 * 8 * 3
    assert len(sandcube.palette()) == 16
    assert sandcube.palette()[0] == "#101018"


def test_checkpoint_roundtrip(tmp_path):
    run = sandcube.stabilize(3, 8, max_steps=3)
    path = str(tmp_path / "cp.bin")
    sandcube.save_checkpoint(path, 3, 8, 0, run["final_time"], run["odometer"])
    cp = sandcube.load_checkpoint(path)
    assert cp["time"] == 3
    assert cp["odometer"] == run["odometer"]
    (tmp_path / "bad.bin").write_bytes(b"garbage")
    with pytest.raises(sandcube.SandcubeError, match="CorruptCheckpoint"):
        sandcube.load_checkpoint(str(tmp_path / "bad.bin"))


def test_errors():
    with pytest.raises(sandcube.SandcubeError, match="BackgroundTooLarge"):
        sandcube.stabilize(2, 4, background=4)


def test_cli_entry(capsys):
    assert sandcube.main(["stabilize", "--dim", "1", "--side", "6"]) == 0
    assert capsys.readouterr().out == "STABILIZED t=9 topples=14\n"
