import json
import math

import numpy as np
import pytest

from coupledcav import cli
from coupledcav.core import TimeGrid
from coupledcav.errors import ParseError, UnknownPreset, ValidationError
from coupledcav.io import (
    ResultTable,
    config_to_mapping,
    csv_text,
    dump_config,
    emit,
    format_real,
    json_text,
    make_meta,
    meta_path,
    parse_config,
    read_csv,
)
from coupledcav.presets import get_preset
from coupledcav.reproduce import reproduce

FIG2A = (
    "{mode: coherence, kappa: 0.24, j: 1.0, gamma1: 1, gamma2: 0.5, "
    "alpha: 0.70710678, beta: 0.70710678, t_end: 15, n: 1501}"
)


def test_minimal_config():
    cfg = parse_config(FIG2A)
    assert cfg.mode == "coherence"
    assert cfg.params.kappa == 0.24 and cfg.params.gamma2 == 0.5
    assert abs(cfg.init.alpha - 1 / math.sqrt(2)) < 1e-12
    assert cfg.grid == TimeGrid.span(15.0, 1501)


def test_line_format_and_scientific_notation():
    cfg = parse_config("mode: twoqubit\nkappa_a: 0.2\nkappa_b: 0.3\nj: 0.5\ngamma2: 1e-2\nalpha: 0.5\n")
    assert cfg.two_site
    assert cfg.params.site_a.gamma2 == 0.01 == cfg.params.site_b.gamma2
    assert cfg.params.site_b.kappa == 0.3 and cfg.params.site_a.j_coupling == 0.5


def test_absolute_units_rescale():
    cfg = parse_config("{mode: coherence, units: MHz, gamma1: 5, kappa: 1.2, j: 5, gamma2: 2.5}")
    assert cfg.params.kappa == pytest.approx(0.24) and cfg.params.gamma1 == 1.0
    assert cfg.gamma1_mhz == 5


@pytest.mark.parametrize(
    "text, exc",
    [
        ("", ParseError),
        ("   \n", ParseError),
        ("[1, 2]", ParseError),
        ("{mode: coherence, kapa: 1}", ParseError),
        ("{mode: levitate}", ParseError),
        ("{mode: coherence, kappa: lots}", ParseError),
        ("{mode: coherence, kappa: 0.2, alpha: 0.9, beta: 0.9}", ValidationError),
        ("{mode: coherence, kappa: -0.2}", ValidationError),
        ("{mode: coherence, kappa: 0.2, gamma1: 0}", ValidationError),
    ],
)
def test_bad_configs(text, exc):
    with pytest.raises(exc):
        parse_config(text)


def test_parse_error_carries_location():
    with pytest.raises(ParseError) as info:
        parse_config("mode: coherence\nkappa: [1,\n")
    assert info.value.line is not None


def test_json_round_trip_is_byte_identical():
    text = dump_config(parse_config(FIG2A))
    assert dump_config(parse_config(text)) == text


def test_emitted_json_reruns_itself(tmp_path):
    cfg = parse_config(FIG2A)
    table = cli.run(cfg)
    [path] = emit(table, "json", tmp_path / "c.json")
    again = parse_config(path.read_text())
    assert config_to_mapping(again) == config_to_mapping(cfg)
    assert json_text(cli.run(again)) == path.read_text()


def test_three_point_csv(tmp_path):
    cfg = parse_config("{mode: coherence, kappa: 0.24, j: 1, gamma2: 0.5, t_end: 1, n: 3}")
    paths = emit(cli.run(cfg), "csv", tmp_path / "c.csv")
    raw = paths[0].read_bytes()
    assert b"\r" not in raw
    lines = raw.decode().splitlines()
    assert len(lines) == 4 and lines[0] == "gamma1_t,coherence"
    assert paths[1] == meta_path(paths[0])
    meta = json.loads(paths[1].read_text())
    assert meta["config"]["kappa"] == 0.24
    header, data = read_csv(paths[0])
    assert data.shape == (3, 2) and data[0, 1] == pytest.approx(1.0, abs=1e-15)


def test_reals_round_trip():
    for x in (0.1, 1 / 3, 6.688125, 1e-300, 2.0**-1074, 123456789.123):
        assert float(format_real(x)) == x
    assert format_real(math.inf) == "inf" and format_real(None) == "nan"


def test_table_width_checked():
    with pytest.raises(ValidationError):
        ResultTable(["a", "b"], [[1.0]], {})
    t = ResultTable(["a", "b"], [[1.0, math.inf], [2.0, None]], make_meta())
    assert csv_text(t).splitlines()[1:] == ["1,inf", "2,nan"]
    assert json.loads(json_text(t))["rows"] == [[1.0, "inf"], [2.0, None]]


def test_reproduce_fig7a(tmp_path):
    paths = reproduce("fig7a", tmp_path)
    data = [p for p in paths if p.suffix == ".csv"]
    assert len(data) == len(get_preset("fig7a").curves)
    assert (tmp_path / "fig7a_J0.csv").exists()
    header, arr = read_csv(tmp_path / "fig7a_J0.csv")
    assert header == ["gamma_t", "concurrence"]
    assert arr[0, 1] == pytest.approx(2 * math.sqrt(2) / 3)


def test_reproduce_fig3_columns(tmp_path):
    paths = [p for p in reproduce("fig3", tmp_path) if p.suffix == ".csv"]
    assert sorted(p.name for p in paths) == ["fig3_kappa0.24.csv", "fig3_kappa0.4.csv"]
    header, arr = read_csv(paths[0])
    assert header == ["J_over_gamma1", "N"]
    assert arr.shape == (31, 2)


def test_reproduce_unknown_preset(tmp_path):
    with pytest.raises(UnknownPreset):
        reproduce("nosuch", tmp_path)
    assert cli.main(["reproduce", "nosuch", "--out-dir", str(tmp_path)]) == 2


@pytest.mark.slow
def test_reproduce_table1(tmp_path):
    [csv, side] = reproduce("table1", tmp_path)
    header, arr = read_csv(csv)
    assert header[:6] == ["gamma2_ratio", "jA", "jB", "tstar_gamma", "tstar_us_low", "tstar_us_high"]
    assert arr.shape[0] == 6
    ext = arr[arr[:, 0] == 1e-4]
    assert np.all(ext[:, 3] > 4e4)
    meta = json.loads(side.read_text())
    assert abs(meta["tbar_gamma"] / 6.69 - 1) < 0.02


def test_cli_stdout_and_flag_precedence(tmp_path, capsys):
    conf = tmp_path / "c.yaml"
    conf.write_text("mode: coherence\nkappa: 0.24\nj: 0.0\ngamma2: 0.5\nt_end: 2\nn: 5\n")
    assert cli.main(["coherence", "--config", str(conf), "--j", "2", "--n", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 4
    assert cli.main(["coherence", "--config", str(conf), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["config"]["j"] == 0.0 and len(doc["rows"]) == 5


def test_cli_modes(tmp_path, capsys):
    base = ["--kappa", "0.4", "--j", "2", "--gamma2", "0.5", "--t-end", "5", "--n", "51"]
    assert cli.main(["simulate", *base, "--backend", "ode"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("gamma1_t,h_re") and len(lines) == 52
    assert cli.main(["nonmarkov", *base]) == 0
    assert "N = " in capsys.readouterr().err
    out = tmp_path / "tq.csv"
    assert cli.main(["twoqubit", "--kappa-a", "0.2", "--kappa-b", "0.3", "--alpha", "0.5",
                     "--t-end", "10", "--n", "11", "--out", str(out)]) == 0
    assert read_csv(out)[1].shape == (11, 2)
    assert cli.main(["sweep", "--kappa", "0.24", "--gamma2", "0.5", "--vary", "j_coupling",
                     "--values", "0,2", "--observable", "blp", "--t-end", "30", "--n", "3001"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "j_coupling,blp" and len(rows) == 3


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["coherence", "--kappa", "-1"]) == 2
    assert cli.main(["coherence", "--kappa", "1", "--alpha", "0.9", "--beta", "0.9"]) == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("mode: coherence\nkappa: [\n")
    assert cli.main(["coherence", "--config", str(bad)]) == 2
    assert "line" in capsys.readouterr().err
    assert cli.main(["coherence", "--config", str(tmp_path / "missing.yaml")]) == 4
    blocked = tmp_path / "file"
    blocked.write_text("")
    assert cli.main(["coherence", "--kappa", "1", "--out", str(blocked / "x.csv")]) == 4
    assert cli.main(["twoqubit", "--kappa", "0.2", "--gamma2", "0.01", "--alpha", "0.5",
                     "--t-end", "20", "--n", "3"]) == 0
    assert cli.main(["sweep", "--kappa-a", "0.2", "--kappa-b", "0.3", "--j", "0.5", "--gamma2", "0.01",
                     "--vary", "j", "--values", "0.5", "--observable", "esd_time", "--t-end", "30",
                     "--n", "2", "--alpha", "0.5"]) == 0
    capsys.readouterr()


def test_help_lists_every_flag(capsys):
    with pytest.raises(SystemExit):
        cli.main(["sweep", "--help"])
    text = capsys.readouterr().out
    for flag in ("--kappa", "--j", "--gamma1", "--gamma2", "--delta", "--alpha", "--beta", "--t-end",
                 "--n", "--backend", "--out", "--format", "--config", "--vary", "--values", "--observable"):
        assert flag in text


def test_cli_solver_failure_exit_code(monkeypatch, capsys):
    from coupledcav.errors import StepSizeUnderflow

    def boom(cfg):
        raise StepSizeUnderflow("step size below 1e-14")

    monkeypatch.setattr(cli, "run", boom)
    assert cli.main(["coherence", "--kappa", "1"]) == 3
    assert "solver error" in capsys.readouterr().err
