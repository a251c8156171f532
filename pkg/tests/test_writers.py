import json
import math

import pytest

from apparent_size.errors import DomainError
from apparent_size.writers import OutputSpec, Table, format_csv, format_json, write_table


def _wall_table():
    rows = [{"r[-]": 2.0, "xmax[-]": math.sqrt(3.0), "angle_max[rad]": math.pi / 6}]
    return Table("wall_optimum", rows, {"r": [2.0]})


def test_csv_header_units_and_precision():
    text = format_csv(_wall_table(), OutputSpec(precision=6))
    assert text == "r[-],xmax[-],angle_max[rad]\n2,1.73205,0.523599\n"


def test_csv_writes_booleans_as_integers():
    rows = [
        {
            "r[-]": 1.0,
            "xmax[-]": 1.0,
            "omega_max[sr]": 0.5,
            "asymptote[-]": 0.3,
            "rough[-]": 0.6,
            "at_boundary[-]": True,
        }
    ]
    text = format_csv(Table("disk_xmax", rows), OutputSpec())
    assert text.splitlines()[1].endswith(",1")


def test_degrees_presentation():
    text = format_csv(_wall_table(), OutputSpec(precision=6, degrees=True))
    header, row = text.splitlines()
    assert header == "r[-],xmax[-],angle_max[deg]"
    assert row.endswith(",30")


def test_json_layout():
    payload = json.loads(format_json(_wall_table(), OutputSpec(format="json")))
    assert set(payload) == {"params", "columns", "rows"}
    assert payload["columns"] == ["r[-]", "xmax[-]", "angle_max[rad]"]
    assert payload["rows"][0][1] == pytest.approx(math.sqrt(3.0), abs=1e-14)
    assert payload["params"] == {"r": [2.0]}


def test_empty_table_keeps_header():
    assert format_csv(Table("spill", []), OutputSpec()) == "x[-],r_threshold[-],lmax[-]\n"


def test_write_table_to_file(tmp_path):
    path = tmp_path / "wall.csv"
    write_table(_wall_table(), OutputSpec(path=path, precision=6))
    assert path.read_bytes() == b"r[-],xmax[-],angle_max[rad]\n2,1.73205,0.523599\n"


def test_output_spec_validation():
    with pytest.raises(DomainError):
        OutputSpec(precision=5)
    with pytest.raises(DomainError):
        OutputSpec(precision=18)
    with pytest.raises(DomainError):
        OutputSpec(format="xlsx")
