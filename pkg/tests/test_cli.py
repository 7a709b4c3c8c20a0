import json
from pathlib import Path

import pytest

from floquet_barrier.cli import main
from floquet_barrier.records import CSV_COLUMNS, SCHEMA_VERSION

CONFIG = """
[particle]
mass_ev = 511000.0
charge_factor = 1.0

[drive]
amplitude_v_per_m = 5.0e7
frequency_ev = 0.12

[potential]
kind = "rectangular"
height_ev = 6.0
length_nm = 0.2
offset_ev = 0.0

[solve]
energy_ev = 0.4
channels = 4
rel_tol = 1e-8
abs_tol = 1e-10

[sweep]
axis = "energy"
start = 0.3
stop = 0.5
count = 3
spacing = "linear"
"""


@pytest.fixture()
def config_path(tmp_path):
    p = tmp_path / "cfg.toml"
    p.write_text(CONFIG, encoding="utf-8")
    return str(p)


def test_solve_command(tmp_path, config_path, capsys):
    out = tmp_path / "out"
    code = main(["solve", "--config", config_path, "--out", str(out), "--no-cache"])
    assert code == 0
    record = json.loads((out / "solve.json").read_text())
    assert record["schema_version"] == SCHEMA_VERSION
    assert record["total_transmission"] > 0
    csv_lines = (out / "solve.csv").read_text().splitlines()
    assert csv_lines[0] == ",".join(CSV_COLUMNS)
    assert len(csv_lines) == 2


def test_solve_dump_fourier(tmp_path, config_path):
    out = tmp_path / "out"
    dump = tmp_path / "wn.csv"
    code = main([
        "solve", "--config", config_path, "--out", str(out), "--no-cache",
        "--dump-fourier", str(dump),
    ])
    assert code == 0
    lines = dump.read_text().splitlines()
    assert lines[0] == "x,n,re_wn,im_wn"
    assert len(lines) > 100


def test_sweep_command_and_cache(tmp_path, config_path):
    out = tmp_path / "out"
    code = main(["sweep", "--config", config_path, "--out", str(out), "--jobs", "2"])
    assert code == 0
    body1 = (out / "sweep.csv").read_bytes()
    # second run hits the cache and must produce identical bytes
    code = main(["sweep", "--config", config_path, "--out", str(out), "--jobs", "1"])
    assert code == 0
    assert (out / "sweep.csv").read_bytes() == body1
    assert (out / ".cache").is_dir() and list((out / ".cache").glob("*.json"))


def test_missing_config_is_config_error(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "nope.toml"), "--out", str(tmp_path)]) == 2


def test_invalid_section_is_config_error(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("[particle]\nmass_ev = -1.0\n", encoding="utf-8")
    assert main(["solve", "--config", str(p), "--out", str(tmp_path)]) == 2


def test_solver_failure_exit_code(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text(
        CONFIG.replace("energy_ev = 0.4", "energy_ev = -0.4"), encoding="utf-8"
    )
    assert main(["solve", "--config", str(p), "--out", str(tmp_path / "o")]) == 1


def test_unknown_figure_id(tmp_path, capsys):
    code = main(["figure", "--id", "F99", "--out", str(tmp_path)])
    assert code == 2
    err = capsys.readouterr().err
    assert "F3" in err and "A12" in err


def test_figure_f3_small(tmp_path):
    code = main(["figure", "--id", "F3", "--points", "3", "--out", str(tmp_path), "--no-cache"])
    assert code == 0
    body = (tmp_path / "F3.csv").read_text().splitlines()
    assert body[0] == ",".join(CSV_COLUMNS)
    assert len(body) == 4


def test_oracle_command(capsys, tmp_path):
    code = main([
        "oracle", "static-rect", "--energy-ev", "3.0", "--mass-ev", "511000",
        "--height-ev", "6.0", "--length-nm", "0.2",
        "--csv", str(tmp_path / "o.csv"),
    ])
    assert code == 0
    out = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert out["transmission"] == pytest.approx(0.10862923709, rel=1e-6)
    header = (tmp_path / "o.csv").read_text().splitlines()[0]
    assert header == ",".join(CSV_COLUMNS)


def test_oracle_static_coulomb(capsys):
    code = main([
        "oracle", "static-coulomb", "--energy-ev", "6000", "--mass-ev", "1.13e9",
        "--inner-radius-fm", "3.89",
    ])
    assert code == 0
    out = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert out["flux_error"] < 1e-8
