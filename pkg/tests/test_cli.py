import json
import subprocess
import sys
from pathlib import Path

import pytest

from neutrosophic.cli import main, run

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

REAL = {"universe": {"kind": "real_vector", "dimension": 1, "box": [-1, 2]}, "construction": "standard"}
NATURALS = {"universe": {"kind": "naturals", "bound": 100}, "construction": "naturals"}
SQUARE = {
    "universe": {"kind": "finite_labeled", "points": [[0, 0], [0.3, 0.1], [0.9, 0.4], [0.2, 0.8], [0.6, 0.6]]},
    "construction": "standard",
}


def write(tmp_path, cfg, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


def nms(tmp_path, command, cfg, *extra):
    code, text, _ = run([command, "--config", write(tmp_path, cfg), *extra])
    return code, json.loads(text)


def test_check_axioms_standard_exit_zero(tmp_path):
    code, rep = nms(tmp_path, "check-axioms", {"space": SQUARE, "samples": 500, "lambda_grid": [2, 20, 200]})
    assert code == 0 and rep["status"] == "verified (probe)"
    assert rep["result"]["axioms"]["ok"] is True


def test_check_axioms_naturals_exit_one(tmp_path):
    code, rep = nms(tmp_path, "check-axioms", {"space": NATURALS, "samples": 500})
    assert code == 1
    entries = rep["result"]["axioms"]["entries"]
    assert entries["i"]["status"] == "fail" and entries["vii"]["status"] == "fail"
    assert entries["i"]["witnesses"]


def test_unknown_norm_exit_two(tmp_path, capsys):
    code, rep = nms(tmp_path, "check-axioms", {"space": dict(NATURALS, tnorm="drastic")})
    assert code == 2 and "tnorm" in rep["result"]["error"]
    assert "tnorm" in capsys.readouterr().err


def test_unknown_key_exit_two(tmp_path):
    code, rep = nms(tmp_path, "check-axioms", {"space": NATURALS, "sampels": 10})
    assert code == 2 and "sampels" in rep["result"]["error"]


def test_missing_config_file(tmp_path):
    code, _, _ = run(["norms", "--config", str(tmp_path / "absent.json")])
    assert code == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as e:
        run(["norms", "--format", "yaml"])
    assert e.value.code == 2


def test_topology_hausdorff(tmp_path):
    cfg = {"space": dict(REAL, tnorm="min", tconorm="max"), "task": "hausdorff", "a": 0, "b": 1, "lambda": 2}
    code, rep = nms(tmp_path, "topology", cfg)
    assert code == 0
    balls = rep["result"]["balls"]
    assert [b["center"] for b in balls] == [0.0, 1.0]
    assert balls[0]["epsilon"] == pytest.approx(1 / 6, abs=1e-8) and balls[0]["lambda"] == 1.0


def test_topology_not_applicable_exit_two(tmp_path):
    code, _ = nms(tmp_path, "topology", {"space": REAL, "task": "hausdorff", "a": 0, "b": 1, "lambda": 1})
    assert code == 2


def test_topology_baire_and_finite(tmp_path):
    assert nms(tmp_path, "topology", {"space": SQUARE, "task": "baire"})[0] == 0
    code, rep = nms(tmp_path, "topology", {"space": SQUARE, "task": "finite-topology"})
    assert code == 0 and rep["result"]["nowhere_dense_disagreements"] == []


def test_topology_finite_task_on_real_exit_two(tmp_path):
    assert nms(tmp_path, "topology", {"space": REAL, "task": "finite-topology"})[0] == 2


def test_sequence_tasks(tmp_path):
    conv = {"space": REAL, "task": "converge", "sequence": {"generator": "harmonic"}, "limit": 0}
    assert nms(tmp_path, "sequence", conv)[0] == 0
    code, rep = nms(tmp_path, "sequence", {"space": REAL, "task": "uniform", "function": {"family": "power"},
                                           "lambda_grid": [1]})
    assert code == 1 and rep["result"]["uniform"]["diagnosis"]["worst_point"] > 0.99
    assert nms(tmp_path, "sequence", {"space": REAL, "task": "converge"})[0] == 2


def test_norms_tasks(tmp_path):
    assert nms(tmp_path, "norms", {"task": "verify", "kernel": "min", "samples": 1000})[0] == 0
    code, rep = nms(tmp_path, "norms", {"task": "verify", "kernel": "mean", "samples": 1000})
    assert code == 1
    assoc = rep["result"]["verification"]["entries"]["associativity"]
    assert assoc["status"] == "fail" and assoc["witnesses"]
    code, rep = nms(tmp_path, "norms", {"task": "residual", "kernel": "lukasiewicz", "epsilon1": 0.8, "epsilon2": 0.5})
    assert code == 0 and rep["result"]["epsilon3"]["value"] == pytest.approx(0.7, abs=2e-9)


def test_flags_override_config(tmp_path):
    code, rep = nms(tmp_path, "norms", {"task": "verify", "kernel": "min", "samples": 1000}, "--samples", "7")
    assert rep["config"]["samples"] == 7


def test_space_flag_and_relative_paths(tmp_path):
    write(tmp_path, NATURALS, "space.json")
    cfg = write(tmp_path, {"space": "space.json", "samples": 100})
    assert run(["check-axioms", "--config", cfg])[0] == 1
    code, _, _ = run(["check-axioms", "--space", str(tmp_path / "space.json"), "--samples", "100"])
    assert code == 1


def test_json_is_byte_identical(tmp_path):
    cfg = write(tmp_path, {"space": NATURALS, "samples": 300, "search": {"axioms": ["v"], "budget": 5000}})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["check-axioms", "--config", cfg, "--out", str(a)]) == 1
    assert main(["check-axioms", "--config", cfg, "--out", str(b)]) == 1
    assert a.read_bytes() == b.read_bytes()
    assert "elapsed_seconds" not in json.loads(a.read_text())


def test_timing_is_opt_in(tmp_path):
    code, rep = nms(tmp_path, "norms", {"task": "verify", "kernel": "max", "samples": 10}, "--include-timing")
    assert "elapsed_seconds" in rep


def test_text_format(tmp_path):
    code, text, _ = run(["norms", "--config", write(tmp_path, {"task": "verify", "kernel": "min", "samples": 10}),
                         "--format", "text"])
    assert code == 0 and text.startswith("nms norms: verified (probe)")
    assert "proved" not in text


SHIPPED = {
    "check-axioms__bad_norm.json": 2,
    "check-axioms__naturals_search.json": 1,
    "check-axioms__standard_square.json": 0,
    "norms__diagonal.json": 0,
    "norms__residual.json": 0,
    "norms__verify_mean.json": 1,
    "sequence__alternating_converge.json": 1,
    "sequence__completeness.json": 0,
    "sequence__harmonic_cauchy.json": 0,
    "sequence__harmonic_converge.json": 0,
    "sequence__uniform_power.json": 1,
    "sequence__ndz.json": 0,
    "sequence__uniform_scaled.json": 0,
    "topology__baire.json": 0,
    "topology__ball.json": 0,
    "topology__base.json": 0,
    "topology__closure_lemma.json": 0,
    "topology__finite_topology.json": 0,
    "topology__hausdorff.json": 0,
    "topology__nb.json": 0,
}


def test_every_shipped_config_is_listed():
    assert sorted(p.name for p in CONFIGS.glob("*.json")) == sorted(SHIPPED)


@pytest.mark.parametrize("name,expected", sorted(SHIPPED.items()))
def test_shipped_configs_run(name, expected):
    code, _, _ = run([name.split("__")[0], "--config", str(CONFIGS / name)])
    assert code == expected


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, {"task": "diagonal", "tnorm": "lukasiewicz", "tconorm": "probsum", "epsilon5": 0.5})
    proc = subprocess.run([sys.executable, "-m", "neutrosophic", "norms", "--config", cfg],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    res = json.loads(proc.stdout)["result"]
    assert res["epsilon6"] == pytest.approx(0.75, abs=2e-9)
