import filecmp

import pytest

from lincond.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestLinCommand:
    def test_gamma_scan(self, tmp_path, capsys):
        code, out, _ = run(
            capsys,
            "lin", "--density", "gamma:2,1", "--x0", "0.1", "--xmax", "1e4",
            "--points", "64", "--out", str(tmp_path),
        )
        assert code == 0
        assert "monotone=true" in out
        assert "divergence_heuristic=true" in out
        csv = (tmp_path / "lin.csv").read_text().splitlines()
        assert csv[0] == "x,lin_value"
        assert len(csv) == 65
        assert (tmp_path / "lin.png").exists()

    def test_invalid_parameters_exit_2(self, tmp_path, capsys):
        code, _, err = run(
            capsys, "lin", "--density", "gamma:0,-1", "--out", str(tmp_path)
        )
        assert code == 2
        assert "config error" in err

    def test_figures_can_be_skipped(self, tmp_path, capsys):
        code, _, _ = run(
            capsys,
            "lin", "--density", "exp:1", "--x0", "0.1", "--xmax", "100",
            "--points", "32", "--out", str(tmp_path), "--no-figures",
        )
        assert code == 0
        assert not (tmp_path / "lin.png").exists()

    def test_byte_identical_reruns(self, tmp_path, capsys):
        for sub in ("a", "b"):
            code, _, _ = run(
                capsys,
                "lin", "--density", "weibull:2,1", "--x0", "0.1",
                "--xmax", "50", "--points", "32",
                "--out", str(tmp_path / sub), "--no-figures",
            )
            assert code == 0
        assert filecmp.cmp(
            tmp_path / "a" / "lin.csv", tmp_path / "b" / "lin.csv", shallow=False
        )


class TestProductCommands:
    def test_product_scan(self, tmp_path, capsys):
        code, out, _ = run(
            capsys,
            "product", "--f1", "exp:1", "--f2", "gamma:2,1",
            "--x0", "0.05", "--xmax", "50", "--points", "12",
            "--out", str(tmp_path), "--no-figures",
        )
        assert code == 0
        assert "monotone=true" in out
        assert "bound_holds=true" in out
        assert "integrand_positive=true" in out
        header = (tmp_path / "product.csv").read_text().splitlines()[0]
        assert header == "x,g,lin_A,lin_B,bound_rhs,holds"

    def test_bound_only(self, tmp_path, capsys):
        code, out, _ = run(
            capsys,
            "bound", "--f1", "exp:1", "--f2", "exp:1",
            "--x0", "0.5", "--xmax", "20", "--points", "12",
            "--out", str(tmp_path), "--no-figures",
        )
        assert code == 0
        assert "bound_holds=true" in out
        assert (tmp_path / "bound.csv").exists()


class TestCounterexampleCommand:
    def test_prescribed_slopes(self, tmp_path, capsys):
        code, out, _ = run(
            capsys,
            "counterexample", "--f1", "exp:1", "--f2", "exp:1",
            "--v", "2", "--a", "1", "--r", "0.2", "--A", "10", "--B", "10",
            "--out", str(tmp_path),
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == (
            "window_n,nu,z_star,z_star_star,slope_max,slope_min,lin_max,lin_min"
        )
        fields = lines[1].split(",")
        assert fields[0] == "1"
        assert float(fields[4]) >= 10.0
        assert float(fields[5]) <= -10.0
        csv = (tmp_path / "window.csv").read_text().splitlines()
        assert csv[0] == "z,g,g_prime,lin_g"
        assert len(csv) > 100
        assert (tmp_path / "window.png").exists()

    def test_unknown_density_exit_2(self, tmp_path, capsys):
        code, _, err = run(
            capsys,
            "counterexample", "--f1", "exp:1", "--f2", "cauchy:1",
            "--out", str(tmp_path),
        )
        assert code == 2
        assert "config error" in err


class TestDemoCommand:
    def test_two_block_demo(self, tmp_path, capsys):
        code, out, _ = run(
            capsys,
            "demo", "--f1", "exp:1", "--f2", "exp:1", "--blocks", "2",
            "--A1", "0.001", "--out", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "window_1.csv").exists()
        assert (tmp_path / "window_2.csv").exists()
        assert (tmp_path / "demo_summary.png").exists()
        assert "escalation=true" in out
