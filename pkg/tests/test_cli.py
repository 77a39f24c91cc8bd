import configparser
import io
import json
from contextlib import redirect_stdout

import pytest

from traplab.cli import EXIT_CHECK, EXIT_CONFIG, EXIT_OK, load_config, main, print_defaults


def _run(tmp_path, name, *args):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def test_simulate_btm_contract(tmp_path):
    code, out = _run(tmp_path, "a", "simulate-btm", "--n-rep", "2000", "--t", "10")
    assert code == EXIT_OK
    man = json.loads((out / "manifest.json").read_text())
    assert {"samples.csv", "report.json"} <= set(man["outputs"])
    assert man["seed"] == 20240601 and "wall_time_s" in man and "numpy" in man["versions"]
    head = (out / "samples.csv").read_text().splitlines()
    assert head[0].startswith("# manifest:") and "replica,position,events" in head


def test_determinism_and_seed(tmp_path):
    args = ("simulate-fin", "--n-rep", "2000", "--vmin", "1e-2")
    _, a = _run(tmp_path, "a", *args)
    _, b = _run(tmp_path, "b", *args)
    _, c = _run(tmp_path, "c", *args, "--seed", "7")
    assert (a / "samples.csv").read_bytes() == (b / "samples.csv").read_bytes()
    assert (a / "samples.csv").read_bytes() != (c / "samples.csv").read_bytes()


def test_config_errors(tmp_path):
    assert _run(tmp_path, "x", "simulate-fin", "--alpha", "1.5")[0] == EXIT_CONFIG
    assert _run(tmp_path, "y", "tails-fin", "--x-grid", "bad")[0] == EXIT_CONFIG
    assert main(["no-such-command"]) == EXIT_CONFIG


def test_print_defaults_is_ini():
    buf = io.StringIO()
    with redirect_stdout(buf):
        assert main(["print-defaults"]) == EXIT_OK
    cp = configparser.ConfigParser()
    cp.optionxform = str
    cp.read_string(buf.getvalue())
    assert cp["tails-fin"]["v_min"] == "0.003" and "L" in cp["simulate-fin"]


def test_ini_layering(tmp_path):
    ini = tmp_path / "c.ini"
    ini.write_text("[defaults]\nalpha = 0.3\nL = 12\n[tails-btm]\nn_rep = 500\n")
    cfg = load_config("tails-btm", ini, {"alpha": 0.4})
    assert cfg.alpha == 0.4 and cfg.n_rep == 500 and cfg.L == 12.0
    buf = io.StringIO()
    print_defaults(buf)
    assert "[besq-selftest]" in buf.getvalue()


def test_tails_and_selftest(tmp_path):
    code, out = _run(tmp_path, "t", "tails-fin", "--n-rep", "20000", "--vmin", "1e-2",
                     "--x-grid", "0.25:3:12")
    assert code in (EXIT_OK, EXIT_CHECK)
    assert (out / "tailcurve.csv").exists() and (out / "fit.json").exists()
    code, out = _run(tmp_path, "b", "besq-selftest", "--n-rep", "20000")
    assert code == EXIT_OK


@pytest.mark.parametrize("sub,extra", [
    ("coupling-check", ["--n-rep", "4000"]),
    ("scaling-check", ["--n-rep", "4000", "--vmin", "1e-2"]),
    ("rayknight-check", ["--n-rep", "500", "--delta", "1e-2", "--h", "0.1"]),
    ("lemma-probe", ["--n-rep", "2000", "--n-list", "2", "--vmin", "1e-2"]),
])
def test_check_commands(tmp_path, sub, extra):
    code, out = _run(tmp_path, sub, sub, *extra)
    assert code in (EXIT_OK, EXIT_CHECK)
    assert json.loads((out / "report.json").read_text())["passed"] == (code == EXIT_OK)
