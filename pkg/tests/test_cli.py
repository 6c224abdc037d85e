import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import ROOT
from lfwsets.cli import main
from lfwsets.report import load_schema
from lfwsets.setfile import read_setfile

CAT = ROOT / "catalog"
FIX = ROOT / "fixtures"
SCHEMA = load_schema()

COMMANDS = [
    (["verify", "wavelet-set", str(CAT / "shannon_p3.lfw"), "--sets", "W1,W2"], 0),
    (["verify", "framelet-set", str(FIX / "sphere4_p2.lfw"), "--sets", "W1"], 1),
    (["verify", "framelet-set", str(FIX / "shannon_drop_p3.lfw")], 1),
    (["verify", "mra", str(CAT / "shannon_q4.lfw")], 0),
    (["verify", "mra", str(FIX / "sphere4_p2.lfw")], 3),
    (["verify", "scaling-set", str(CAT / "unit_scaling_p5.lfw"), "--set", "S"], 0),
    (["verify", "scaling-set", str(FIX / "prime_ideal_p2.lfw"), "--set", "S"], 1),
    (["verify", "scaling-set", str(FIX / "prime_ideal_p2.lfw"), "--set", "S", "--parseval"], 0),
    (["verify", "scaling-set", str(FIX / "overlapping_scaling_p2.lfw"), "--parseval"], 1),
    (["dimension", str(CAT / "shannon_p2.lfw"), "--emit-steps"], 0),
    (["dimension", str(FIX / "shannon_drop_p3.lfw")], 3),
    (["equiv", str(FIX / "superwavelet_p2.lfw"), "--left", "Parent", "--right", "C1,C2"], 0),
    (["equiv", str(FIX / "superwavelet_p2.lfw"), "--left", "Parent", "--right", "Big"], 1),
    (["oracle", "frame-sum", str(CAT / "shannon_p3.lfw"), "--trials", "5", "--seed", "1"], 0),
    (["oracle", "frame-sum", str(FIX / "sphere4_p2.lfw"), "--trials", "5"], 1),
    (["oracle", "calderon", str(CAT / "shannon_p5.lfw"), "--samples", "20"], 0),
    (["oracle", "calderon", str(FIX / "sphere4_p2.lfw"), "--samples", "20"], 1),
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _floats_outside_oracle(d):
    def walk(x):
        if isinstance(x, float):
            return True
        if isinstance(x, dict):
            return any(walk(v) for v in x.values())
        if isinstance(x, list):
            return any(walk(v) for v in x)
        return False

    return any(walk(v) for k, v in d.items() if k != "oracle")


@pytest.mark.parametrize("argv, code", COMMANDS, ids=lambda a: " ".join(a[:2]) if isinstance(a, list) else str(a))
def test_exit_codes_and_schema(argv, code, capsys):
    got, text_out, _ = run(argv, capsys)
    assert got == code
    got_json, out, _ = run(argv + ["--format", "json"], capsys)
    assert got_json == code
    d = json.loads(out)
    jsonschema.validate(d, SCHEMA)
    assert not _floats_outside_oracle(d)
    assert f"verdict: {d['verdict']}" in text_out


def test_wavelet_report_quantities(capsys):
    code, out, _ = run(["verify", "wavelet-set", str(CAT / "shannon_p3.lfw"), "--sets", "W1,W2", "--format", "json"],
                       capsys)
    d = json.loads(out)
    assert code == 0
    assert d["quantities"]["integral_1_over_xi"] == "2/3"
    assert d["quantities"]["total_measure"] == "2"


def test_sphere4_witness(capsys):
    code, out, _ = run(["verify", "framelet-set", str(FIX / "sphere4_p2.lfw"), "--sets", "W1", "--format", "json"],
                       capsys)
    d = json.loads(out)
    assert code == 1
    w = d["witnesses"][0]
    assert {k: w[k] for k in ("clause", "j", "t")} == {"clause": "ps-b", "j": 0, "t": 1}
    assert w["ball"].startswith("ball scale=")


def test_equiv_failure_certificate(capsys):
    _, out, _ = run(["equiv", str(FIX / "superwavelet_p2.lfw"), "--left", "Parent", "--right", "Big",
                     "--format", "json"], capsys)
    w = json.loads(out)["witnesses"][0]
    assert (w["n"], w["left_integral"], w["right_integral"]) == (0, "1", "2")


def test_refusal_report(capsys):
    code, out, _ = run(["verify", "mra", str(FIX / "sphere4_p2.lfw"), "--format", "json"], capsys)
    d = json.loads(out)
    assert code == 3 and d["verdict"] == "REFUSED" and "multiwavelet" in d["error"]


def test_usage_and_parse_errors(tmp_path, capsys):
    bad = tmp_path / "bad.lfw"
    bad.write_text("field p=2 c=1 poly=0,1\nset W\n  ball scale=0 center=(2)@-1\nend\n")
    code, _, err = run(["verify", "wavelet-set", str(bad)], capsys)
    assert code == 2 and "line 3" in err
    code, _, err = run(["verify", "wavelet-set", str(CAT / "shannon_p2.lfw"), "--sets", "Nope"], capsys)
    assert code == 2 and "Nope" in err
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nothing"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_catalog_round_trip(tmp_path, capsys):
    out = tmp_path / "out.lfw"
    code, _, _ = run(["catalog", "shannon", "--p", "2", "--c", "1", "-o", str(out)], capsys)
    assert code == 0
    assert read_setfile(out) == read_setfile(CAT / "shannon_p2.lfw")
    assert out.read_bytes() == (CAT / "shannon_p2.lfw").read_bytes()
    code, text, _ = run(["catalog", "shannon", "--p", "3"], capsys)
    assert text == (CAT / "shannon_p3.lfw").read_text()


def test_figures_are_written(tmp_path, capsys):
    figs = tmp_path / "figs"
    code, out, _ = run(["verify", "mra", str(CAT / "shannon_p3.lfw"), "--figures", str(figs), "--format", "json"],
                       capsys)
    d = json.loads(out)
    assert code == 0
    assert len(d["figures"]) == 3
    for f in d["figures"]:
        with open(f, "rb") as fh:
            assert fh.read(8) == b"\x89PNG\r\n\x1a\n"
    run(["oracle", "frame-sum", str(CAT / "shannon_p2.lfw"), "--trials", "3", "--figures", str(figs)], capsys)
    assert (figs / "frame-sum-ratios.png").exists()


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "lfwsets.cli", "verify", "wavelet-set",
                           str(CAT / "shannon_p2.lfw")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "verdict: PASS" in proc.stdout
