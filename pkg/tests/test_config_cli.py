"""Configuration parsing, the metadata sidecar and the command line."""

import math
from pathlib import Path

import numpy as np
import pytest

from ferrocav import __version__
from ferrocav.cavity import consistency_report
from ferrocav.cli import main
from ferrocav.config import (ConfigError, build_config, dump_config,
                             load_config, loads, merge_overrides, parse_text,
                             write_sidecar)
from ferrocav.point_model import DEFAULT_FERROELECTRIC, POINT_TRACE_COLUMNS
from ferrocav.traces import Trace

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

SMALL_RUN = """\
source.frequency_hz = 2.5e6
source.ez_target_v_m = 2.0e6
run.duration_s = 2.6e-8
run.trace_stride = 10
run.diag_stride = 25
probes.mid = 2.45, 2.45, 1.36
"""


# ---------------------------------------------------------------------------
# raw parsing
# ---------------------------------------------------------------------------

def test_parse_text_skips_blanks_and_comments():
    mapping = parse_text("# header\n\n  grid.nx = 12  \n# grid.ny = 9\n")
    assert mapping == {"grid.nx": "12"}


def test_parse_text_rejects_malformed_lines():
    with pytest.raises(ConfigError, match="line 1"):
        parse_text("grid.nx 12")
    with pytest.raises(ConfigError, match="empty key or value"):
        parse_text("grid.nx =")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_text("grid.nx = 8\ngrid.nx = 9")


def test_merge_overrides_replaces_and_validates():
    merged = merge_overrides({"grid.nx": "8"},
                             ["grid.nx=12", "grid.ny = 9"])
    assert merged == {"grid.nx": "12", "grid.ny": "9"}
    with pytest.raises(ConfigError, match="key=value"):
        merge_overrides({}, ["oops"])


# ---------------------------------------------------------------------------
# building
# ---------------------------------------------------------------------------

def test_empty_text_yields_vacuum_defaults():
    cfg = loads("")
    g = cfg.grid
    assert (g.nx, g.ny, g.nz) == (20, 20, 8)
    assert (g.lx, g.ly, g.lz) == (5.45, 5.45, 2.18)
    assert g.cfl_safety == 0.5
    assert cfg.material is None and cfg.source is None
    assert cfg.duration == 0.0 and cfg.scheme == "semi_implicit"


def test_material_defaults_fill_in():
    cfg = loads("material.model = hysteretic")
    m = cfg.material
    assert m.radius == 1.36
    assert m.center == (2.725, 2.725)
    assert m.transition_width == pytest.approx(0.2725, rel=1e-15)
    assert m.sigma == 0.0 and m.omega == 0.0
    assert m.params.alpha == DEFAULT_FERROELECTRIC.alpha
    assert m.params.theta == DEFAULT_FERROELECTRIC.theta


def test_unknown_and_mistyped_keys_are_rejected():
    with pytest.raises(ConfigError, match="unknown configuration key"):
        loads("grid.dx = 0.1")
    with pytest.raises(ConfigError, match="not an integer"):
        loads("grid.nx = twenty")
    with pytest.raises(ConfigError, match="not a number"):
        loads("grid.lx = wide")
    with pytest.raises(ConfigError, match="expected one of"):
        loads("material.model = plasma")
    with pytest.raises(ConfigError, match="not an integer"):
        loads("run.trace_stride = 2.5")
    with pytest.raises(ConfigError, match="^grid: "):
        loads("grid.lx = -1.0")


def test_exclusive_key_pairs_conflict():
    with pytest.raises(ConfigError, match="mutually exclusive"):
        loads("material.omega_rad_s = 1.0\nmaterial.omega_rpm = 10.0")
    with pytest.raises(ConfigError, match="mutually exclusive"):
        loads(SMALL_RUN + "run.drive_periods = 2\n")
    with pytest.raises(ConfigError, match="mutually exclusive"):
        loads("source.frequency_hz = 1e6\nsource.amplitude_a_m2 = 1.0\n"
              "source.ez_target_v_m = 1.0")


def test_model_none_rejects_stray_material_keys():
    with pytest.raises(ConfigError, match="does not take"):
        loads("material.model = none\nmaterial.radius = 1.0")
    with pytest.raises(ConfigError, match="does not take"):
        loads("material.model = linear\nmaterial.eps_r = 4.0\n"
              "hysteresis.alpha = 1.0")


def test_rpm_converts_to_radians_per_second():
    cfg = loads("material.omega_rpm = 1497.0")
    assert cfg.material.omega == pytest.approx(1497.0 * 2.0 * math.pi / 60.0,
                                               rel=1e-15)
    assert cfg.material.model == "hysteretic"  # implied by material keys


def test_duration_from_drive_periods_and_revolutions():
    cfg = loads(SMALL_RUN.replace("run.duration_s = 2.6e-8",
                                  "run.drive_periods = 10"))
    assert cfg.duration == pytest.approx(10 / 2.5e6, rel=1e-15)
    with pytest.raises(ConfigError, match="needs a source"):
        loads("run.drive_periods = 10")
    cfg = loads("material.omega_rad_s = 3.14\nrun.revolutions = 2")
    assert cfg.duration == pytest.approx(4.0 * math.pi / 3.14, rel=1e-15)
    with pytest.raises(ConfigError, match="needs a rotating material"):
        loads("run.revolutions = 2")
    with pytest.raises(ConfigError, match="needs a rotating material"):
        loads("material.omega_rad_s = 0.0\nrun.revolutions = 2")


def test_source_requires_frequency_and_an_amplitude_form():
    with pytest.raises(ConfigError, match="frequency_hz is required"):
        loads("source.ez_target_v_m = 1e6")
    with pytest.raises(ConfigError, match="is required"):
        loads("source.frequency_hz = 1e6")


def test_probe_lines_parse_and_validate():
    cfg = loads("probes.a = 1.0, 2.0, 1.5\nprobes.b-2 = 2, 2, 1")
    assert {p.name for p in cfg.probes} == {"a", "b-2"}
    assert cfg.probes[0].z == 1.5
    with pytest.raises(ConfigError, match="expected 'x, y, z'"):
        loads("probes.a = 1.0, 2.0")
    with pytest.raises(ConfigError, match="not three numbers"):
        loads("probes.a = 1.0, 2.0, z")
    with pytest.raises(ConfigError, match="outside the cavity"):
        loads("probes.a = -1.0, 2.0, 1.0")


def test_output_dir_passes_through(tmp_path):
    cfg = loads(f"output.dir = {tmp_path}")
    assert cfg.output_dir == str(tmp_path)


def test_shipped_configs_load():
    for name in ("paper_rest.cfg", "paper_rotating.cfg",
                 "scaled_rest.cfg", "scaled_rotating.cfg"):
        cfg = load_config(CONFIG_DIR / name)
        assert cfg.material is not None
        assert cfg.source is not None
        assert cfg.duration > 0.0


def test_sidecar_round_trips_exactly(tmp_path):
    cfg = load_config(CONFIG_DIR / "paper_rotating.cfg")
    path = tmp_path / "resolved.cfg"
    write_sidecar(str(path), cfg, consistency_report(cfg))
    back = load_config(path)
    assert back.grid == cfg.grid
    assert back.source == cfg.source
    assert back.duration == cfg.duration
    assert back.material.omega == cfg.material.omega
    assert dump_config(back) == dump_config(cfg)
    # derived quantities ride along as comments only
    text = path.read_text()
    assert "# derived.cycles_per_revolution" in text


def test_dump_config_reconstructs_without_resolved():
    cfg = load_config(CONFIG_DIR / "paper_rest.cfg")
    rebuilt = build_config(
        {k: str(v) for k, v in dump_config(cfg).items()})
    bare = type(cfg)(grid=cfg.grid, material=cfg.material,
                     source=cfg.source, scheme=cfg.scheme,
                     duration=cfg.duration, trace_stride=cfg.trace_stride,
                     diag_stride=cfg.diag_stride, probes=cfg.probes,
                     output_dir=cfg.output_dir,
                     instability_factor=cfg.instability_factor)
    assert bare.resolved is None
    again = build_config({k: str(v) for k, v in dump_config(bare).items()})
    assert again.grid == rebuilt.grid
    assert again.source == rebuilt.source
    assert again.duration == rebuilt.duration


# ---------------------------------------------------------------------------
# the command line
# ---------------------------------------------------------------------------

def test_cli_version(capsys):
    assert main(["version"]) == 0
    assert capsys.readouterr().out.strip() == __version__


def test_cli_usage_errors_exit_1():
    for argv in ([], ["bogus"], ["cavity-run"], ["point-loop", "--nope"]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 1, argv


def test_cli_missing_config_file_exits_2(capsys):
    rc = main(["cavity-run", "--config", "/nonexistent/run.cfg"])
    assert rc == 2
    assert "configuration error" in capsys.readouterr().err


def test_cli_bad_config_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.cfg"
    path.write_text("grid.qx = 3\n")
    assert main(["cavity-run", "--config", str(path)]) == 2
    assert main(["report", "--config", str(CONFIG_DIR / 'paper_rest.cfg'),
                 "--set", "oops"]) == 2


def test_cli_point_loop_writes_trace(tmp_path, capsys):
    out = tmp_path / "loop.csv"
    rc = main(["point-loop", "--periods", "2", "--steps-per-period", "400",
               "--output", str(out), "--metrics"])
    assert rc == 0
    text = capsys.readouterr().out
    assert "P_sat" in text and "branch transitions:" in text
    tr = Trace.from_csv(out, expected_columns=POINT_TRACE_COLUMNS)
    assert len(tr) == 801
    assert np.max(np.abs(tr["E"])) == pytest.approx(2.0e6, rel=1e-3)


def test_cli_cavity_run_writes_outputs(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text(SMALL_RUN)
    rc = main(["cavity-run", "--config", str(path),
               "--output", str(tmp_path / "out")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "dt_s = " in out
    for name in ("mid.csv", "diagnostics.csv", "resolved.cfg"):
        assert (tmp_path / "out" / name).exists(), name
        assert f"wrote {tmp_path / 'out' / name}" in out


def test_cli_report_prints_derived_quantities(capsys):
    rc = main(["report", "--config", str(CONFIG_DIR / "paper_rotating.cfg")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "cycles_per_revolution" in out
    assert "omega_rpm" in out


def test_cli_numerical_abort_exits_3(tmp_path, capsys):
    # joint k = 1e4 scaling of drive frequency and rotation rate: the
    # motional feedback loop gain approaches unity and the run diverges
    rc = main(["cavity-run", "--config",
               str(CONFIG_DIR / "paper_rest.cfg"),
               "--set", "material.omega_rad_s=1.5676534e6",
               "--set", "source.frequency_hz=2.5e6",
               "--set", "run.duration_s=1.5e-6",
               "--output", str(tmp_path)])
    assert rc == 3
    assert "numerical abort" in capsys.readouterr().err
    assert (tmp_path / "abort_snapshot.bin").exists()


def test_cli_validate_fast_is_green(capsys):
    rc = main(["validate", "--fast"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "checks passed" in out
    assert "FAIL" not in out
