from __future__ import annotations

import subprocess
import sys

import pytest

from srap import formats
from srap.cli import EXIT_ERROR, EXIT_INFEASIBLE, EXIT_OK, main
from test_formats import R4_TEXT

R4S_TEXT = R4_TEXT.replace("terminals 4 0 1 2 3", "terminals 3 0 1 3")

TWO_TRIANGLES_SAG = """sag 1
k 2
h_vertices 5
extra_vertices 0
edge 0 1
edge 1 2
edge 2 0
edge 0 3
edge 3 4
edge 4 0
link 1 3 2
link 2 4 3
link 1 4 1
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _report(path):
    out = {}
    lines = open(path).read().splitlines()
    for line in lines[:lines.index("# iterations")]:
        key, _, val = line.partition(" ")
        out.setdefault(key, []).append(val)
    return out


def test_solve_greedy_r4(tmp_path):
    src = _write(tmp_path, "r4.srap", R4_TEXT)
    rep = str(tmp_path / "rep.txt")
    sol = str(tmp_path / "r4.sol")
    assert main(["solve", "--algo", "greedy", "--epsilon", "2", "-i", src, "--report", rep, "-o", sol]) == EXIT_OK
    r = _report(rep)
    assert r["cost"] == ["2"] and r["verified"] == ["true"] and r["algorithm"] == ["greedy"]
    assert r["instance_digest"] == [formats.digest(formats.parse_srap(R4_TEXT))]
    assert sorted(r["link"]) == ["0 2", "1 3"]
    assert formats.parse_solution(open(sol).read()).cost == 2


@pytest.mark.parametrize("algo", ["local", "exact"])
def test_solve_other_algorithms(tmp_path, algo):
    src = _write(tmp_path, "r4.srap", R4_TEXT)
    rep = str(tmp_path / "rep.txt")
    assert main(["solve", "--algo", algo, "-i", src, "--report", rep]) == EXIT_OK
    assert _report(rep)["cost"] == ["2"]


def test_local_rejected_without_all_terminals(tmp_path, capsys):
    src = _write(tmp_path, "r4s.srap", R4S_TEXT)
    assert main(["solve", "--algo", "local", "-i", src, "--report", str(tmp_path / "r")]) == EXIT_ERROR
    assert "terminal" in capsys.readouterr().err


def test_exact_honors_budget(tmp_path):
    src = _write(tmp_path, "r4.srap", R4_TEXT)
    assert main(["solve", "--algo", "exact", "--oracle-budget", "1", "-i", src,
                 "--report", str(tmp_path / "r")]) == EXIT_ERROR


def test_infeasible_exit_code(tmp_path):
    src = _write(tmp_path, "bad.srap", "srap 1\nring 4\noutside 0\nterminals 4 0 1 2 3\nlink 1 3 1\n")
    for algo in ("greedy", "exact"):
        assert main(["solve", "--algo", algo, "-i", src, "--report", str(tmp_path / "r")]) == EXIT_INFEASIBLE


def test_format_error_exit_code(tmp_path, capsys):
    src = _write(tmp_path, "bad.srap", "srap 1\nring 4\nbogus\n")
    assert main(["solve", "-i", src]) == EXIT_ERROR
    assert "line 3" in capsys.readouterr().err


def test_reduce_two_triangles(tmp_path):
    src = _write(tmp_path, "tt.sag", TWO_TRIANGLES_SAG)
    out = str(tmp_path / "tt.srap")
    assert main(["reduce", "-i", src, "-o", out]) == EXIT_OK
    inst = formats.parse_srap(open(out).read())
    assert inst.n == 6
    lift = formats.parse_lift(open(out + ".lift").read())
    assert lift.zero_pairs == frozenset({(0, 3)})


def test_reduce_ring_scap_is_identity(tmp_path):
    text = "scap 1\nvertices 5\nterminals 5 0 1 2 3 4\n" + "".join(
        f"edge {i} {(i + 1) % 5}\n" for i in range(5)) + "link 0 2 3\nlink 1 3 2\nlink 2 4 1\n"
    src = _write(tmp_path, "ring.scap", text)
    out = str(tmp_path / "ring.srap")
    assert main(["reduce", "-i", src, "-o", out]) == EXIT_OK
    inst = formats.parse_srap(open(out).read())
    assert inst.n == 5 and inst.all_terminals
    assert [(l.u, l.v, l.cost) for l in inst.links] == [(0, 2, 3), (1, 3, 2), (2, 4, 1)]


def test_reduce_k4_rejected(tmp_path):
    text = "scap 1\nvertices 4\nterminals 4 0 1 2 3\n" + "".join(
        f"edge {a} {b}\n" for a in range(4) for b in range(a + 1, 4)) + "link 0 1 1\n"
    src = _write(tmp_path, "k4.scap", text)
    assert main(["reduce", "-i", src, "-o", str(tmp_path / "k4.srap")]) == EXIT_INFEASIBLE


def test_reduce_solve_lift_pipeline(tmp_path):
    src = _write(tmp_path, "tt.sag", TWO_TRIANGLES_SAG)
    red = str(tmp_path / "tt.srap")
    sol = str(tmp_path / "tt.sol")
    lifted = str(tmp_path / "orig.sol")
    assert main(["reduce", "-i", src, "-o", red]) == EXIT_OK
    assert main(["solve", "--algo", "exact", "-i", red, "-o", sol, "--report", str(tmp_path / "r")]) == EXIT_OK
    assert main(["lift", "-i", sol, "--lift", red + ".lift", "--original", src, "-o", lifted]) == EXIT_OK
    direct = str(tmp_path / "direct.txt")
    assert main(["solve", "--algo", "exact", "-i", src, "--report", direct]) == EXIT_OK
    assert formats.parse_solution(open(lifted).read()).cost == int(_report(direct)["cost"][0])


def test_gen_reproducible(tmp_path):
    a, b, c = (str(tmp_path / x) for x in "abc")
    args = ["gen", "--type", "srap", "--n", "8", "--m", "3", "--links", "12"]
    assert main(args + ["--seed", "7", "-o", a]) == EXIT_OK
    assert main(args + ["--seed", "7", "-o", b]) == EXIT_OK
    assert main(args + ["--seed", "8", "-o", c]) == EXIT_OK
    assert open(a).read() == open(b).read()
    da, dc = (formats.digest(formats.parse_instance(open(p).read())) for p in (a, c))
    assert da != dc


@pytest.mark.parametrize("kind", ["scap", "sag"])
def test_gen_other_kinds_parse(tmp_path, kind):
    out = str(tmp_path / f"x.{kind}")
    assert main(["gen", "--type", kind, "--n", "5", "--m", "1", "--links", "8", "--seed", "1", "-o", out]) == EXIT_OK
    assert formats.sniff(open(out).read()) == kind


def test_bench(tmp_path):
    d = tmp_path / "inst"
    d.mkdir()
    for s in range(4):
        assert main(["gen", "--n", "6", "--m", "1", "--links", "9", "--seed", str(s),
                     "--all-terminals", "-o", str(d / f"g{s}.srap")]) == EXIT_OK
    (d / "tt.sag").write_text(TWO_TRIANGLES_SAG)
    out = str(tmp_path / "bench.txt")
    assert main(["bench", str(d), "-o", out]) == EXIT_OK
    lines = open(out).read().splitlines()
    assert lines[0] == "file algo cost opt ratio verified seconds"
    rows = [l.split() for l in lines[1:] if not l.startswith("summary")]
    assert [r[0] for r in rows] == sorted(r[0] for r in rows)
    assert all(r[5] == "true" for r in rows)
    assert any(l.startswith("summary greedy count=5 max_ratio=") for l in lines)


def test_bench_empty_dir(tmp_path):
    out = str(tmp_path / "bench.txt")
    assert main(["bench", str(tmp_path), "-o", out, "--algos", "greedy"]) == EXIT_OK
    assert open(out).read() == "file algo cost opt ratio verified seconds\nsummary greedy count=0\n"


def test_log_flag(tmp_path):
    src = _write(tmp_path, "r4.srap", R4_TEXT)
    log = tmp_path / "run.log"
    assert main(["--log", str(log), "solve", "-i", src, "--report", str(tmp_path / "r")]) == EXIT_OK
    assert "srap" in log.read_text()


def test_console_script_entry(tmp_path):
    src = _write(tmp_path, "r4.srap", R4_TEXT)
    proc = subprocess.run([sys.executable, "-m", "srap.cli", "solve", "-i", src], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "cost 2" in proc.stdout.splitlines()
