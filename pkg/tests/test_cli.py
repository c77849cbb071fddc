import os

import numpy as np
import pytest

from convexkit import cli
from convexkit.core import InvalidInput

QUAD = """\
# a 2-d quadratic
kind quadratic
dim 2
A 2 0 0 1
b 1 1
"""

LP = """\
A:
1, 0
-1, 0
0, 1
0, -1
b:
1 1 1 1
c:
1 0
x0:
0.2 0.1
"""


@pytest.fixture
def quad_file(tmp_path):
    p = tmp_path / "quad.prob"
    p.write_text(QUAD)
    return str(p)


def test_parse_problem_file(quad_file):
    q = cli.parse_problem_file(quad_file)
    assert q.dim == 2
    assert q.beta == 2.0
    assert np.allclose(q.x_star, [0.5, 1.0])


def test_parse_problem_file_errors(tmp_path):
    p = tmp_path / "bad.prob"
    p.write_text("kind quadratic\ndim 2\nA 1 2 3\nb 0 0\n")
    with pytest.raises(InvalidInput, match="A"):
        cli.parse_problem_file(str(p))
    p.write_text("dim 2\n")
    with pytest.raises(InvalidInput, match="kind"):
        cli.parse_problem_file(str(p))
    p.write_text("kind martian\n")
    with pytest.raises(InvalidInput, match="martian"):
        cli.parse_problem_file(str(p))


def test_parse_worst_case_file(tmp_path):
    p = tmp_path / "w.prob"
    p.write_text("kind worst-case-smooth\nsteps 8\nbeta 1.0\ndim 17\n")
    w = cli.parse_problem_file(str(p))
    assert w.dim == 17 and w.beta == 1.0


def test_parse_lp_file(tmp_path):
    p = tmp_path / "box.lp"
    p.write_text(LP)
    A, b, c, x0 = cli.parse_lp_file(str(p))
    assert A.shape == (4, 2)
    assert np.array_equal(b, np.ones(4))
    assert np.array_equal(c, [1.0, 0.0])
    assert np.array_equal(x0, [0.2, 0.1])
    p.write_text("A:\n1 0\nb:\n1\n")  # missing c
    with pytest.raises(InvalidInput, match="c"):
        cli.parse_lp_file(str(p))


def test_read_losses_csv(tmp_path):
    p = tmp_path / "losses.csv"
    p.write_text("0.1,0.2\n-0.3,0.4\n")
    losses = cli.read_losses_csv(str(p))
    assert losses.shape == (2, 2)
    p.write_text("0.1,0.2\n1.0\n")
    with pytest.raises(InvalidInput):
        cli.read_losses_csv(str(p))


def test_run_writes_trace_and_exits_zero(quad_file, tmp_path, capsys):
    out = str(tmp_path / "trace.csv")
    code = cli.main(["run", "--problem", quad_file, "--algo", "gd",
                     "--iters", "12", "--out", out])
    assert code == 0
    lines = open(out).read().strip().split("\n")
    assert lines[0] == "iter,value,gap,grad_norm,time_s"
    assert len(lines) == 14  # header + budget+1 records
    assert "final value" in capsys.readouterr().out


def test_run_byte_stable(quad_file, tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        out = str(tmp_path / name)
        assert cli.main(["run", "--problem", quad_file, "--algo", "agd",
                         "--iters", "9", "--seed", "5", "--out", out]) == 0
        outs.append(open(out, "rb").read())
    assert outs[0] == outs[1]


def test_run_unknown_algo_usage_error(quad_file, capsys):
    assert cli.main(["run", "--problem", quad_file, "--algo", "zzz",
                     "--iters", "5"]) == 2


def test_run_capability_exit_3(quad_file):
    assert cli.main(["run", "--problem", quad_file, "--algo", "fw",
                     "--iters", "5"]) == 3


def test_run_missing_file_exit_2(tmp_path):
    assert cli.main(["run", "--problem", str(tmp_path / "nope.prob"),
                     "--algo", "gd", "--iters", "5"]) == 2


def test_env_var_fallback(quad_file, tmp_path, monkeypatch, capsys):
    out = str(tmp_path / "t.csv")
    monkeypatch.setenv("CONVEXKIT_ITERS", "4")
    assert cli.main(["run", "--problem", quad_file, "--algo", "gd",
                     "--out", out]) == 0
    assert len(open(out).read().strip().split("\n")) == 6
    # explicit flag wins over the environment
    assert cli.main(["run", "--problem", quad_file, "--algo", "gd",
                     "--iters", "2", "--out", out]) == 0
    assert len(open(out).read().strip().split("\n")) == 4
    monkeypatch.setenv("CONVEXKIT_ITERS", "not-a-number")
    assert cli.main(["run", "--problem", quad_file, "--algo", "gd",
                     "--out", out]) == 2


def test_rates_lists_suites(capsys):
    assert cli.main(["rates"]) == 0
    out = capsys.readouterr().out
    assert "gd-vs-agd" in out and "subgradient" in out


def test_rates_unknown_suite():
    assert cli.main(["rates", "--suite", "bogus"]) == 2


def test_verify_list_sorted(capsys):
    assert cli.main(["verify", "--list"]) == 0
    ids = capsys.readouterr().out.strip().split("\n")
    assert ids == sorted(ids) and len(ids) == 18


def test_verify_only_filter(capsys):
    assert cli.main(["verify", "--only", "gd-rate"]) == 0
    out = capsys.readouterr().out
    assert "PASS 01-gd-rate" in out
    assert cli.main(["verify", "--only", "zzz"]) == 2
