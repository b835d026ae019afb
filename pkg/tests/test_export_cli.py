import json

import numpy as np
import pytest

from presstop.cli import EXIT_INVALID, EXIT_IO, EXIT_OK, EXIT_SOLVER, main, read_config
from presstop.driver import RunConfig, optimize
from presstop.export import ExportError, export_results, read_density_csv
from presstop.problems import make_problem


@pytest.fixture(scope="module")
def small_result():
    cfg = RunConfig(problem="arch", nelx=20, nely=10, rmin=1.5, maxit=6)
    return optimize(make_problem("arch", 20, 10), cfg)


def test_export_files(small_result, tmp_path):
    paths = export_results(small_result, tmp_path)
    names = sorted(p.name for p in paths)
    assert names == ["convergence.csv", "density.csv", "density.pgm", "pressure.csv", "result.json"]

    conv = (tmp_path / "convergence.csv").read_text().splitlines()
    assert conv[0] == "iter,compliance,volfrac,change"
    assert len(conv) == small_result.iterations + 1
    first = conv[1].split(",")
    assert first[0] == "1" and float(first[1]) == pytest.approx(small_result.compliance[0], rel=1e-5)
    assert all(len(v.replace(".", "").replace("-", "").split("e")[0].lstrip("0")) <= 6 for v in first[1:])

    dens = read_density_csv(tmp_path / "density.csv")
    np.testing.assert_array_equal(dens, small_result.xphys)

    pgm = (tmp_path / "density.pgm").read_text().split()
    assert pgm[:4] == ["P2", "20", "10", "255"]
    pixels = np.array(pgm[4:], dtype=int).reshape(10, 20)
    np.testing.assert_array_equal(pixels, np.rint(255 * (1 - small_result.xphys)).astype(int))

    pres = (tmp_path / "pressure.csv").read_text().splitlines()
    assert pres[0] == "node,x,y,p" and len(pres) == 21 * 11 + 1
    node, x, y, p = pres[1 + 10].split(",")      # node 10: bottom-left corner
    assert (int(node), float(x), float(y), float(p)) == (10, 0.0, 0.0, 1.0)

    summary = json.loads((tmp_path / "result.json").read_text())
    assert summary["iterations"] == small_result.iterations
    assert summary["final_compliance"] == pytest.approx(small_result.final_compliance)
    assert summary["config"]["rmin"] == 1.5 and "grayness_percent" in summary


def test_export_is_deterministic(small_result, tmp_path):
    export_results(small_result, tmp_path / "a")
    export_results(small_result, tmp_path / "b")
    for name in ("convergence.csv", "density.csv", "density.pgm", "pressure.csv", "result.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_export_error_names_path(small_result, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(ExportError, match="file"):
        export_results(small_result, blocker / "sub")


def test_cli_list(capsys):
    assert main(["list-problems"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("arch", "bridge", "ext_arch", "piston", "chamber", "sp1", "sp2", "sp3"):
        assert name in out


def test_cli_validate(capsys):
    assert main(["validate", "--problem", "sp2", "--nelx", "40", "--nely", "40"]) == EXIT_OK
    out = capsys.readouterr().out
    mfy = float(out.split("MFy = ")[1].split()[0])
    assert mfy == pytest.approx(40.0, abs=1e-6)
    assert main(["validate", "--problem", "sp2", "--nelx", "40", "--nely", "30"]) == EXIT_INVALID


def test_cli_run_with_outputs(tmp_path, capsys):
    out = tmp_path / "res"
    code = main(["run", "--problem", "arch", "--nelx", "20", "--nely", "10", "--rmin", "1.5",
                 "--maxit", "3", "--lst", "false", "--out", str(out)])
    assert code == EXIT_OK
    assert len((out / "convergence.csv").read_text().splitlines()) == 4
    summary = json.loads((out / "result.json").read_text())
    assert summary["config"]["lst"] is False


def test_config_file_overrides_flags(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small arch\nmaxit = 2\nnelx=20\nnely = 10\nrmin = 1.5\n", encoding="utf-8")
    out = tmp_path / "res"
    assert main(["run", "--problem", "arch", "--maxit", "50", "--config", str(cfg), "--out", str(out)]) == EXIT_OK
    assert json.loads((out / "result.json").read_text())["iterations"] == 2


def test_custom_problem_from_config(tmp_path):
    cfg = tmp_path / "custom.cfg"
    cfg.write_text("problem = custom\nnelx = 20\nnely = 10\nrmin = 1.5\nmaxit = 2\n"
                   "pressure = top:0; left:0; right:0; bottom:pin\nsupports = bottom@0:xy; bottom@1:xy\n")
    assert main(["run", "--config", str(cfg)]) == EXIT_OK


def test_exit_codes(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["run", "--maxit", "abc"])
    assert info.value.code == EXIT_INVALID
    assert main(["run", "--problem", "nope"]) == EXIT_INVALID
    assert main(["run", "--problem", "arch", "--volfrac", "1.5"]) == EXIT_INVALID
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == EXIT_IO
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["run", "--config", str(bad)]) == EXIT_INVALID
    singular = tmp_path / "singular.cfg"
    singular.write_text("problem = custom\nnelx = 10\nnely = 5\nrmin = 1.5\nmaxit = 2\n"
                        "pressure = bottom:pin; top:0\nsupports = bottom@0:x\n")
    assert main(["run", "--config", str(singular)]) == EXIT_SOLVER
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["run", "--nelx", "20", "--nely", "10", "--rmin", "1.5", "--maxit", "1",
                 "--out", str(blocker / "sub")]) == EXIT_IO


def test_read_config_syntax(tmp_path):
    f = tmp_path / "c.cfg"
    f.write_text("a = 1  # trailing\n\nB-key=two\n", encoding="utf-8")
    assert read_config(str(f)) == {"a": "1", "b_key": "two"}
    f.write_text("just words\n")
    with pytest.raises(ValueError):
        read_config(str(f))
