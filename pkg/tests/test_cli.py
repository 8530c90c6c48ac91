import subprocess
import sys

from wpbusn.cli import EXIT_CONFIG, EXIT_RUNTIME, main
from wpbusn.config import DEFAULT_TEXT, parse_config


def test_defaults_prints_parsable_config(capsys):
    assert main(["defaults"]) == 0
    out = capsys.readouterr().out
    assert out == DEFAULT_TEXT
    assert "snr_threshold_db = -20" in out
    parse_config(out)


def test_run_writes_outputs(tmp_path, capsys):
    cfg = tmp_path / "small.cfg"
    cfg.write_text("num_uds = 4\nsweep_values = 10, 25\nstrategies = proposed, wpusn\n")
    out, plot = tmp_path / "r.csv", tmp_path / "r.svg"
    argv = ["run", "--config", str(cfg), "--out", str(out), "--plot", str(plot),
            "--seed", "5", "--trials", "2"]
    assert main(argv) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 5 and lines[1].endswith(",2")
    assert plot.read_text().count("<polyline") == 2
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_run_to_stdout(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("num_uds = 3\nsweep_values = 25\nstrategies = wpusn\ntrials = 1\n")
    assert main(["run", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out.startswith("variable,value,strategy")


def test_config_errors_exit_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("vwc = 0.7\n")
    assert main(["run", "--config", str(cfg)]) == EXIT_CONFIG
    assert "line 1" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "absent.cfg")]) == EXIT_CONFIG
    assert main(["run"]) == EXIT_CONFIG
    assert main(["oracle", "--module", "phases", "--size", "Z=3"]) == EXIT_CONFIG


def test_runtime_error_exit_3(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("num_uds = 3\nsweep_values = 25\nstrategies = wpusn\ntrials = 1\n")
    out = tmp_path / "no_dir" / "r.csv"
    assert main(["run", "--config", str(cfg), "--out", str(out)]) == EXIT_RUNTIME


def test_oracle_commands(capsys):
    assert main(["oracle", "--module", "phases", "--size", "K=3,instances=2"]) == 0
    assert "max relative deviation" in capsys.readouterr().out
    assert main(["oracle", "--module", "time", "--size", "N=2,K=4,instances=2"]) == 0
    assert "time: max relative deviation" in capsys.readouterr().out


def test_console_script_installed():
    proc = subprocess.run([sys.executable, "-m", "wpbusn.cli", "defaults"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0 and "num_uds = 64" in proc.stdout
