import io
import json
import math

import pandas as pd
import pytest

from apparent_size.cli import run
from apparent_size.config import SEED_ENV_VAR


def _table(capsys) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(capsys.readouterr().out))


def test_perspective_first_row(capsys):
    assert run(["perspective", "--strip", "one-point", "--k", "1..5"]) == 0
    frame = _table(capsys)
    assert list(frame.columns) == ["k[-]", "area[-]", "shoelace[-]", "k3_area[-]"]
    assert len(frame) == 5
    assert frame["area[-]"][0] == pytest.approx(5 / 36, rel=1e-14)


def test_rect_lmax_quoted_value(capsys):
    assert run(["rect-lmax", "--x", "1", "--r", "1.25"]) == 0
    frame = _table(capsys)
    assert frame["lmax[-]"][0] == pytest.approx(1.669774599367937, abs=1e-9)
    assert frame["spills[-]"][0] == 0


def test_disk_xmax_asymptote(capsys):
    assert run(["disk-xmax", "--r", "100"]) == 0
    frame = _table(capsys)
    expected = 100 / math.sqrt(2.0) - 7 * math.sqrt(2.0) / 2400
    assert frame["xmax[-]"][0] == pytest.approx(expected, abs=1e-4)
    assert frame["asymptote[-]"][0] == pytest.approx(expected, abs=1e-12)


def test_disk_curve_family(capsys):
    assert run(["disk-curve", "--r", "0.8,0.9,1,1.1", "--x", "0:3:31"]) == 0
    frame = _table(capsys)
    assert set(frame["r[-]"]) == {0.8, 0.9, 1.0, 1.1}
    assert len(frame) == 4 * 31 - 1
    # 15 significant digits round 2*pi up in the last place
    assert frame["omega[sr]"].between(0.0, 2 * math.pi + 1e-13).all()


def test_wall_optimum_in_degrees(capsys):
    assert run(["wall", "--r", "2", "--degrees"]) == 0
    frame = _table(capsys)
    assert frame["angle_max[deg]"][0] == pytest.approx(30.0, abs=1e-9)


def test_json_output_to_file(tmp_path, capsys):
    path = tmp_path / "keyhole.json"
    assert run(["keyhole-moments", "--format", "json", "--output", str(path)]) == 0
    assert capsys.readouterr().out == ""
    payload = json.loads(path.read_text(encoding="utf-8"))
    assert set(payload) == {"params", "columns", "rows"}
    assert payload["rows"][0][:2] == ["circle", "closed"]


def test_mc_is_byte_identical(capsys):
    argv = ["mc", "--experiment", "sphere", "--samples", "20000", "--seed", "9", "--substreams", "3"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    assert first.splitlines()[0].startswith("experiment,n_samples[-],mean[rad]")


def test_mc_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv(SEED_ENV_VAR, "123")
    assert run(["mc", "--samples", "1000"]) == 0
    frame = _table(capsys)
    assert frame["seed[-]"][0] == 123


def test_mc_disk_columns_use_steradians(capsys):
    assert run(["mc", "--experiment", "disk", "--samples", "1000", "--seed", "1"]) == 0
    frame = _table(capsys)
    assert "mean[sr]" in frame.columns


def test_usage_and_domain_errors_exit_two(capsys):
    assert run(["disk-xmax"]) == 2
    assert run(["no-such-command"]) == 2
    assert run(["perspective", "--precision", "4"]) == 2
    assert "Failed:" in capsys.readouterr().err
    assert run(["disk-xmax", "--r", "0.5"]) == 2
    assert "Failed:" in capsys.readouterr().err


def test_rect_omega_with_oracle(capsys):
    assert run(["rect-omega", "--d", "1", "--y=-1,1", "--z=-1,1", "--oracle"]) == 0
    frame = _table(capsys)
    assert frame["omega[sr]"][0] == pytest.approx(2 * math.pi / 3, rel=1e-14)
    assert frame["oracle[sr]"][0] == pytest.approx(2 * math.pi / 3, abs=1e-9)


SUBCOMMAND_ARGS = [
    ["disk-omega", "--r", "0.5,2", "--x", "1"],
    ["disk-curve", "--r", "0.9,1.1", "--x", "0:2:5"],
    ["disk-xmax", "--r", "3"],
    ["rect-omega", "--d", "1", "--y=-1,1", "--z", "0,2"],
    ["rect-lmax", "--r", "1.03,9/8,5/4"],
    ["spill"],
    ["wall", "--r", "2", "--x", "1,2"],
    ["wall", "--r", "1.1,2"],
    ["keyhole-moments"],
    ["keyhole-pdf", "--model", "sphere"],
    ["dihedral", "--a", "pi/2"],
    ["perspective", "--strip", "two-point", "--k", "1..5", "--format", "json"],
    ["mc", "--experiment", "dihedral", "--samples", "5000", "--seed", "4", "--substreams", "2", "--workers", "2"],
]


@pytest.mark.parametrize("argv", SUBCOMMAND_ARGS, ids=lambda argv: argv[0])
def test_every_subcommand_is_byte_identical(argv, capsys):
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    assert first.endswith("\n")


def test_verify_is_byte_identical(tmp_path, capsys):
    config = tmp_path / "config.yaml"
    config.write_text("montecarlo:\n  samples: 200000\n", encoding="utf-8")
    argv = ["verify", "--config", str(config), "--seed", "1"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    frame = pd.read_csv(io.StringIO(first))
    assert set(frame["status"]) == {"PASS"}
    assert {"strip_telescoping", "keyhole_support", "disk_xmax_asymptote"} <= set(frame["rule_id"])


def test_perspective_json_lists_vanishing_points(capsys):
    assert run(["perspective", "--strip", "two-point", "--k", "1..2", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    (left_y, left_z), (right_y, right_z) = payload["params"]["vanishing_points"]
    assert (left_y, right_y) == pytest.approx((-math.sqrt(2.0), math.sqrt(2.0)), abs=1e-14)
    assert left_z == right_z == 1.0


def test_rect_lmax_reports_stationary_edge(capsys):
    assert run(["rect-lmax", "--r", "1.03"]) == 0
    frame = _table(capsys)
    assert frame["lmax[-]"][0] == 1.0
    assert frame["at_boundary[-]"][0] == 1
