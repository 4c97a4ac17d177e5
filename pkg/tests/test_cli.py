import json

from monoadd import BINARY16, BINARY32
from monoadd.cli import main
from monoadd.probes import generate_probe_suite, observations_from, write_observations_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_sum_example(capsys):
    code, out, _ = run(capsys, "sum", "--format", "p24e127", "--adder", "class1", "--mode", "rn", "16777216", *["1"] * 7)
    assert code == 0 and out.strip() == "16777224"


def test_sum_json_and_logged_rounding(capsys):
    code, out, err = run(capsys, "sum", "--format", "p3e3", "--json", "0.1", "1")
    assert code == 0
    assert json.loads(out)["inputs"] == ["0.125", "1"]
    assert "rounded" in err


def test_counterexample(capsys):
    code, out, _ = run(capsys, "counterexample", "--format", "p3e3")
    assert code == 0 and "1.25" in out
    code, out, _ = run(capsys, "counterexample", "--format", "p3e3", "--terms", "3", "--json")
    assert code == 0 and json.loads(out)["violated_nofinal"] is True


def test_demos(capsys):
    code, out, _ = run(capsys, "sqrt-demo", "--json")
    rows = json.loads(out)
    assert code == 0
    assert {r["radicand"] for r in rows if r["model"] == "classIV-growth"} == {"-4"}
    code, out, _ = run(capsys, "interval-demo", "--check")
    assert code == 0 and "[16777216, 16777230]" in out


def test_input_errors_exit_1(capsys):
    assert run(capsys, "sum", "--format", "p1e1", "1")[0] == 1
    assert run(capsys, "sum", "--format", "p3e3", "one")[0] == 1
    assert run(capsys, "sum", "--adder", "class9", "1")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "sum", "--bogus-flag", "1")[0] == 1
    assert run(capsys, "gemm", "--A", "/nonexistent.csv", "--B", "x")[0] == 1


def test_help_exits_0(capsys):
    assert run(capsys, "sum", "--help")[0] == 0


def test_gemm_files_and_manifest(tmp_path, capsys):
    (tmp_path / "A.csv").write_text("# format binary16\n" + "\n".join([",".join(["1"] * 8)] * 8) + "\n")
    (tmp_path / "B.csv").write_text("# format binary16\n" + "\n".join([",".join(["1"] * 4)] * 8) + "\n")
    (tmp_path / "C.csv").write_text("# format p24e127\n" + "33554430,33554432,0,0\n" * 8)
    outs = []
    for name in ("r1", "r2"):
        argv = ["gemm", "--A", str(tmp_path / "A.csv"), "--B", str(tmp_path / "B.csv"), "--C", str(tmp_path / "C.csv"),
                "--input-format", "binary16", "--adder", "class4aligned:g=1,shift=trunc,final=rz",
                "--out", str(tmp_path / name)]
        code, out, _ = run(capsys, *argv)
        assert code == 0
        assert out.splitlines()[1] == "33554436,33554432,8,8"
        manifest = json.loads((tmp_path / name / "manifest.json").read_text())
        outs.append(((tmp_path / name / "D.csv").read_bytes(), manifest["outputs"], manifest["inputs"]))
    assert outs[0] == outs[1]


def test_out_dir_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("MONOADD_OUT", str(tmp_path))
    assert run(capsys, "sweep", "--format", "p3e3", "--terms", "4")[0] == 0
    assert (tmp_path / "sweep-p3e3-n4.dat").exists()
    assert "sweep-p3e3-n4.dat" in json.loads((tmp_path / "manifest.json").read_text())["outputs"]


def test_property_check_exit_2(capsys):
    # class III never decreases, so demanding a violation fails the check
    code, _, err = run(capsys, "sweep", "--format", "p3e3", "--terms", "4", "--adder", "class3", "--expect-violation")
    assert code == 2 and "check failed" in err
    assert run(capsys, "sweep", "--format", "p3e3", "--terms", "4", "--expect-violation")[0] == 0


def test_probe_round_trip(tmp_path, capsys):
    suite = generate_probe_suite(BINARY16, BINARY32, 8)
    obs = tmp_path / "obs.csv"
    obs.write_text(write_observations_csv(observations_from(suite, "class4aligned:g=1,shift=trunc,final=rz")))
    code, out, _ = run(capsys, "probe-classify", "--observations", str(obs))
    assert code == 0 and out.strip() == "ClassIV(aligned, g=1, final=rz)"
    assert run(capsys, "probe-classify", "--observations", str(obs), "--expect", "ClassIII")[0] == 2
    code, out, _ = run(capsys, "probe-gen", "--out", str(tmp_path / "suite"))
    assert code == 0 and out.startswith("probe_id,row,col,value")
    assert (tmp_path / "suite" / "predictions.json").exists()


def test_count_and_dot(capsys):
    code, out, _ = run(capsys, "count", "--diag", "1", "2", "3", "--offdiag", "0", "0", "--x", "2.5", "0.5")
    assert code == 0 and "count(2.5) = 2" in out and "count(0.5) = 0" in out
    code, out, _ = run(capsys, "dot", "--a", "1,1,1,1,1,1,1,1", "--b", "1,1,1,1,1,1,1,1", "--c", "33554430",
                       "--input-format", "binary16", "--adder", "class4aligned:g=1,shift=trunc,final=rz")
    assert code == 0 and out.strip() == "33554436"
    assert run(capsys, "count", "--diag", "1", "--x", "1")[0] == 1  # zero pivot


def test_fig_commands_small(tmp_path, capsys):
    code, out, _ = run(capsys, "fig3", "--formats", "p3e3", "--terms", "8", "16", "--check", "--out", str(tmp_path))
    assert code == 0 and (tmp_path / "fig3-p3e3-n8.dat").exists()
    code, out, _ = run(capsys, "fig2", "--lengths", "16", "64", "--widths", "4", "--json")
    assert code == 0 and json.loads(out)["rng"]["seed"] == 500
    code, out, _ = run(capsys, "assoc", "--permutations", "50", "--check")
    assert code == 0
