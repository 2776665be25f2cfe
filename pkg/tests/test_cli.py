import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from wquantile import DecaySpec, EstimatorKind, MovingQuantileTracker, WeightedSample, estimate
from wquantile.cli import main
from wquantile.simulate import SIM3_TRIALS


def run(argv, stdin: str | None = None):
    """Run the CLI in-process; returns (exit code, stdout)."""
    out = io.StringIO()
    if stdin is None:
        code = main([str(a) for a in argv], stdout=out)
    else:
        old = sys.stdin
        sys.stdin = io.TextIOWrapper(io.BytesIO(stdin.encode()), encoding="utf-8")
        try:
            code = main([str(a) for a in argv], stdout=out)
        finally:
            sys.stdin = old
    return code, out.getvalue()


def rows(text):
    return list(csv.reader(io.StringIO(text)))


GOLDEN = [
    ("estimate_outlier_thd.csv", ["estimate", "{d}/outlier.csv", "--estimator", "thd", "--p", "0.5"]),
    ("estimate_outlier_hd.csv", ["estimate", "{d}/outlier.csv", "--estimator", "hd", "--p", "0.25", "--p", "0.5", "--p", "0.75"]),
    ("estimate_unit5_type7.csv", ["estimate", "{d}/unit5.csv", "--estimator", "type7", "--p", "0.35"]),
    ("estimate_sparse_type7.csv", ["estimate", "{d}/sparse_missing.csv", "--p", "0", "--p", "0.5", "--p", "1"]),
    ("smooth_stream.csv", ["smooth", "{d}/stream.csv", "--half-life", "2", "--p", "0.25", "--p", "0.5"]),
    ("smooth_grouped_hd.csv", ["smooth", "{d}/grouped.csv", "--half-life", "1", "--estimator", "hd", "--p", "0.5"]),
    ("mixture_c.csv", ["mixture", "--component", "{d}/comp_uniform01.csv:0.5",
                       "--component", "{d}/comp_uniform510.csv:0.5", "--grid", "0.05:0.95:0.15"]),
    ("mixture_shift.csv", ["mixture", "--component", "{d}/comp_uniform01.csv:1", "--shift", "{d}/comp_uniform01.csv:0.5",
                           "--shift", "{d}/comp_uniform510.csv:0.5", "--grid", "0.1:0.9:0.2"]),
]


@pytest.mark.parametrize("golden, argv", GOLDEN, ids=[g for g, _ in GOLDEN])
def test_golden(data_dir, golden, argv):
    code, out = run([a.format(d=data_dir) for a in argv])
    assert code == 0
    assert out == (data_dir / "golden" / golden).read_text()


class TestEstimate:
    def test_outlier_thd_row(self, data_dir):
        assert run(["estimate", data_dir / "outlier.csv", "--estimator", "thd", "--p", "0.5"]) == (0, "p,estimate\n0.5,2.5\n")

    def test_default_p_and_stdin(self):
        assert run(["estimate"], stdin="value\n1\n2\n10\n") == (0, "p,estimate\n0.5,2\n")
        assert run(["estimate", "-"], stdin="value\n1\n2\n10\n") == (0, "p,estimate\n0.5,2\n")

    def test_hd_endpoint_domain_error(self, data_dir, capsys):
        code, out = run(["estimate", data_dir / "unit5.csv", "--estimator", "hd", "--p", "0"])
        assert code == 3 and out == ""
        assert "(0, 1)" in capsys.readouterr().err

    def test_unsupported_type(self, data_dir, capsys):
        assert run(["estimate", data_dir / "unit5.csv", "--estimator", "type3"])[0] == 3
        assert "Unsupported type: 3" in capsys.readouterr().err

    @pytest.mark.parametrize("name, line", [("bad_value.csv", 3), ("bad_fields.csv", 3)])
    def test_parse_errors_name_line(self, data_dir, capsys, name, line):
        assert run(["estimate", data_dir / name])[0] == 2
        assert f"{name}:{line}:" in capsys.readouterr().err

    @pytest.mark.parametrize(
        "text", ["", "weight\n1\n", "value,colour\n1,2\n", "value,weight\n1,NA\n"]
    )
    def test_header_and_weight_errors(self, text):
        assert run(["estimate"], stdin=text)[0] == 2

    def test_missing_file(self, tmp_path):
        assert run(["estimate", tmp_path / "nope.csv"])[0] == 2

    def test_bad_flags(self, data_dir):
        assert run(["estimate", data_dir / "unit5.csv", "--estimator", "median"])[0] == 2
        assert run(["estimate", data_dir / "unit5.csv", "--ess", "tsallis"])[0] == 2
        assert run(["estimate", data_dir / "unit5.csv", "--p", "half"])[0] == 2

    def test_domain_errors(self, data_dir):
        assert run(["estimate", data_dir / "unit5.csv", "--p", "1.5"])[0] == 3
        assert run(["estimate"], stdin="value,weight\n1,-1\n")[0] == 3
        assert run(["estimate"], stdin="value\nNA\n")[0] == 3
        assert run(["estimate"], stdin="value\n")[0] == 3
        assert run(["estimate", data_dir / "unit5.csv", "--estimator", "thd", "--width", "2"])[0] == 3

    def test_ess_flag(self, data_dir):
        code, out = run(["estimate", data_dir / "outlier.csv", "--estimator", "hd", "--ess", "hr:2"])
        assert code == 0 and out == (data_dir / "golden" / "estimate_outlier_hd.csv").read_text().split("\n")[0] + "\n" + \
            "0.5,292.593618863385\n"

    def test_round_trip_bit_exact(self, data_dir):
        x = np.random.default_rng(0).lognormal(size=50)
        w = np.random.default_rng(1).uniform(size=50)
        text = "value,weight\n" + "".join(f"{float(a)!r},{float(b)!r}\n" for a, b in zip(x, w))
        probs = [0.1, 0.33, 0.5, 0.9]
        for name in ("hd", "thd", "type4", "type7", "type9"):
            args = ["estimate", "--estimator", name, "--digits", "17"] + sum((["--p", str(p)] for p in probs), [])
            code, out = run(args, stdin=text)
            assert code == 0
            parsed = [float(r[1]) for r in rows(out)[1:]]
            lib = estimate(WeightedSample(x, w), EstimatorKind.parse(name), probs)
            assert parsed == lib.tolist()

    def test_default_digits_close(self, data_dir):
        code, out = run(["estimate", data_dir / "outlier.csv", "--estimator", "hd"])
        assert float(rows(out)[1][1]) == pytest.approx(292.593618863385, rel=1e-15)


class TestSmooth:
    def test_constant(self):
        code, out = run(["smooth", "--half-life", "3", "--p", "0.1", "--p", "0.9"], stdin="value\n" + "7\n" * 20)
        assert code == 0
        assert {r[2] for r in rows(out)[1:]} == {"7"}
        assert len(rows(out)) == 1 + 40

    def test_matches_tracker(self, data_dir):
        code, out = run(["smooth", data_dir / "stream.csv", "--half-life", "2", "--p", "0.5", "--digits", "17"])
        values = [5, 1, 4, 2, 3, None, 9, 0, 7, 6, 8]
        t = MovingQuantileTracker(DecaySpec(2))
        expected = []
        for v in values:
            if v is not None:
                t.push(v)
            expected.append(t.quantile(0.5))
        assert [float(r[2]) for r in rows(out)[1:]] == expected

    def test_leading_missing_is_na(self):
        code, out = run(["smooth", "--half-life", "2"], stdin="value\nNA\n3\n")
        assert out == "index,p,estimate\n1,0.5,NA\n2,0.5,3\n"

    def test_groups_equal_within_group(self):
        code, out = run(["smooth", "--half-life", "1", "--weight-floor", "0"], stdin="value,group\n1,1\n1,1\n5,2\n5,2\n")
        assert code == 0
        est = [float(r[2]) for r in rows(out)[1:]]
        lib = estimate(WeightedSample([1, 1, 5, 5], [0.5, 0.5, 1, 1]), EstimatorKind.hf(7), [0.5])[0]
        assert est[-1] == pytest.approx(lib, abs=1e-12)

    @pytest.mark.parametrize("h", ["0", "-2", "inf"])
    def test_bad_half_life(self, data_dir, h):
        assert run(["smooth", data_dir / "stream.csv", "--half-life", h])[0] == 4

    def test_bad_floor(self, data_dir):
        assert run(["smooth", data_dir / "stream.csv", "--half-life", "2", "--weight-floor", "1"])[0] == 4

    def test_parse_errors(self):
        assert run(["smooth", "--half-life", "2"], stdin="value,group\n1,1\n2,0\n")[0] == 2
        assert run(["smooth", "--half-life", "2"], stdin="value,group\n1,1.5\n")[0] == 2
        assert run(["smooth", "--half-life", "2"], stdin="value\nabc\n")[0] == 2

    def test_bad_p(self, data_dir):
        assert run(["smooth", data_dir / "stream.csv", "--half-life", "2", "--estimator", "hd", "--p", "1"])[0] == 3


class TestMixture:
    def test_default_grid(self, data_dir):
        code, out = run(["mixture", "--component", f"{data_dir}/comp_uniform01.csv:1"])
        assert code == 0 and len(rows(out)) == 1 + 99

    def test_constant_flat(self, data_dir):
        code, out = run(["mixture", "--component", f"{data_dir}/comp_const.csv:2", "--grid", "0.1:0.9:0.1"])
        assert {r[1] for r in rows(out)[1:]} == {"3"}

    def test_shift_self(self, data_dir):
        c = f"{data_dir}/comp_uniform510.csv:1"
        code, out = run(["mixture", "--component", c, "--shift", c])
        assert code == 0 and {r[3] for r in rows(out)[1:]} == {"0"}

    def test_errors(self, data_dir):
        assert run(["mixture", "--component", f"{data_dir}/comp_empty.csv:1"])[0] == 5
        assert run(["mixture", "--component", f"{data_dir}/comp_const.csv:0"])[0] == 5
        assert run(["mixture", "--component", f"{data_dir}/comp_const.csv:-1"])[0] == 5
        assert run(["mixture", "--component", f"{data_dir}/comp_const.csv:heavy"])[0] == 2
        assert run(["mixture", "--component", f"{data_dir}/comp_const.csv"])[0] == 2
        assert run(["mixture", "--component", f"{data_dir}/outlier.csv:1"])[0] == 2
        assert run(["mixture", "--component", f"{data_dir}/comp_const.csv:1", "--grid", "0.1:0.9"])[0] == 2
        assert run(["mixture", "--component", f"{data_dir}/comp_const.csv:1", "--grid", "0.1:0.9:0"])[0] == 5
        assert run(["mixture", "--component", f"{data_dir}/comp_const.csv:1", "--estimator", "hd",
                    "--grid", "0:1:0.5"])[0] == 3


class TestSimulate:
    def test_row_counts_and_determinism(self, tmp_path):
        for name, n in [("sim1", 6 * 1000), ("sim2", 3 * 500 * 3)]:
            a, b = tmp_path / "a", tmp_path / "b"
            assert run(["simulate", name, "--seed", "42", "--out", a])[0] == 0
            assert run(["simulate", name, "--seed", "42", "--out", b])[0] == 0
            first = (a / f"{name}.csv").read_bytes()
            assert first == (b / f"{name}.csv").read_bytes()
            assert first.count(b"\n") == 1 + n

    def test_sim3_small(self, tmp_path):
        assert run(["simulate", "sim3", "--seed", "7", "--out", tmp_path, "--trials", "2"])[0] == 0
        table = rows((tmp_path / "sim3.csv").read_text())
        assert table[0] == ["mixture", "trial", "p", "estimate", "true"]
        assert len(table) == 1 + 6 * 2 * 99
        assert SIM3_TRIALS == 50

    def test_seed_changes_output(self, tmp_path):
        run(["simulate", "sim2", "--seed", "1", "--out", tmp_path / "a"])
        run(["simulate", "sim2", "--seed", "2", "--out", tmp_path / "b"])
        assert (tmp_path / "a/sim2.csv").read_bytes() != (tmp_path / "b/sim2.csv").read_bytes()

    @pytest.mark.parametrize("argv", [["sim4", "--seed", "1"], ["sim1", "--seed", "-1"],
                                      ["sim1", "--seed", str(2**64)], ["sim1", "--seed", "x"]])
    def test_bad_arguments(self, tmp_path, argv):
        assert run(["simulate"] + argv + ["--out", tmp_path])[0] == 2

    def test_help_documents_sine(self, capsys):
        assert run(["simulate", "--help"])[0] == 0
        text = capsys.readouterr().out
        assert "sin(2*pi*i/100)" in text and "every 50th" in text

    def test_max_seed(self, tmp_path):
        assert run(["simulate", "sim2", "--seed", str(2**64 - 1), "--out", tmp_path])[0] == 0


def test_console_script_and_module(data_dir):
    for cmd in (["wquantile"], [sys.executable, "-m", "wquantile"]):
        proc = subprocess.run(
            cmd + ["estimate", "--estimator", "thd"], input=(data_dir / "outlier.csv").read_bytes(),
            capture_output=True, check=False,
        )
        assert proc.returncode == 0 and proc.stdout == b"p,estimate\n0.5,2.5\n"
    proc = subprocess.run([sys.executable, "-m", "wquantile", "estimate", "--p", "2"],
                          input=b"value\n1\n", capture_output=True, check=False)
    assert proc.returncode == 3


def test_no_command():
    assert run([])[0] == 2
