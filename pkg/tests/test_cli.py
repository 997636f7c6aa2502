import io
import os
import subprocess
import sys

from lyndon_index.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")


def d(name):
    return os.path.join(DATA, name)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


EXAMPLE = ["--tower", d("example.tower"), "--group", d("example_G.gens")]


def test_index_worked_example():
    code, out, _ = run("index", *EXAMPLE, "--subgroup", d("example_H.gens"))
    assert code == 0
    assert out.splitlines()[0] == "FINITE 2"
    assert out.splitlines()[1:] == ["1", "x u1^{t} z1 u1^{t} x y"]


def test_member_worked_example():
    code, out, _ = run("member", *EXAMPLE, "--subgroup", d("example_H.gens"), "x u1^{t} z1 u1^{t} x y")
    assert (code, out) == (1, "NO\n")
    # a a is not standard as written (x y x meets u1^{t})
    code, out, _ = run("member", *EXAMPLE, "--subgroup", d("example_H.gens"), "--normalize",
                       "x u1^{t} z1 u1^{t} x y x u1^{t} z1 u1^{t} x y")
    assert (code, out) == (0, "YES\n")
    code, out, _ = run("member", *EXAMPLE, "x u1^{t} z1 u1^{t} x y")
    assert (code, out) == (0, "YES\n")


def test_member_requires_standard_form():
    code, _, err = run("member", *EXAMPLE, "x y x u1^{t}")
    assert code == 2 and "--normalize" in err
    code, out, _ = run("member", *EXAMPLE, "--normalize", "x y x u1^{t}")
    assert code == 1 and out == "NO\n"


def test_index_infinite_and_budget():
    free = ["--tower", d("free2.tower"), "--group", d("free2_G.gens")]
    code, out, _ = run("index", *free, "--subgroup", d("free2_X.gens"))
    assert code == 1 and out.startswith("INFINITE\n")
    code, out, _ = run("index", *EXAMPLE, "--subgroup", d("example_H.gens"), "--budget", "1")
    assert code == 3 and out.startswith("BUDGET-EXCEEDED ")


def test_fold_output_is_deterministic(tmp_path):
    dot = tmp_path / "g.dot"
    code, out1, _ = run("fold", *EXAMPLE, "--assert-len", "8", "--dot", str(dot))
    assert code == 0 and out1.startswith("vertex 0\n") and "base 0" in out1
    assert dot.read_text().startswith("digraph G {")
    _, out2, _ = run("fold", *EXAMPLE)
    assert out1 == out2


def test_errors(tmp_path):
    code, _, err = run("fold", "--tower", d("nope.tower"), "--group", d("example_G.gens"))
    assert code == 2 and "cannot read" in err
    bad = tmp_path / "bad.tower"
    bad.write_text("alphabet: x y\nroot u1 = x x\n")
    code, _, err = run("fold", "--tower", str(bad), "--group", d("example_G.gens"))
    assert code == 2 and "invalid tower" in err
    gens = tmp_path / "g.gens"
    gens.write_text("x @missing\n")
    code, _, err = run("fold", "--tower", d("free2.tower"), "--group", str(gens))
    assert code == 2 and "unknown reference" in err
    gens.write_text("x q\n")
    code, _, err = run("fold", "--tower", d("free2.tower"), "--group", str(gens))
    assert code == 2 and ":1:" in err
    assert run("fold")[0] == 2
    code, _, _ = run("index", *EXAMPLE, "--subgroup", d("free2_X.gens"), "--budget", "0")
    assert code == 2


def test_not_a_subgroup(tmp_path):
    h = tmp_path / "h.gens"
    h.write_text("z1\n")
    code, _, err = run("index", *EXAMPLE, "--subgroup", str(h))
    assert code == 2 and "not in G" in err


def test_module_entry_point_bytes_are_stable():
    cmd = [sys.executable, "-m", "lyndon_index", "index", *EXAMPLE, "--subgroup", d("example_H.gens")]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert a.stdout.startswith(b"FINITE 2\n")


def test_small_cli_examples(tmp_path):
    free = ["--tower", d("free2.tower"), "--group", d("free2_G.gens")]
    code, out, _ = run("fold", *free)
    assert code == 0 and out == "vertex 0\nedge 0 0 0 x\nedge 1 0 0 y\nbase 0\n"
    code, out, _ = run("index", *free, "--subgroup", d("free2_G.gens"))
    assert (code, out) == (0, "FINITE 1\n1\n")
    code, out, _ = run("member", "--tower", d("free2.tower"), "--group", d("free2_X.gens"), "x x")
    assert (code, out) == (0, "YES\n")
    tw = tmp_path / "u.tower"
    tw.write_text("alphabet: x y\nroot u1 = x y\n")
    g = tmp_path / "u.gens"
    g.write_text("u1^{t}\n")
    code, out, _ = run("member", "--tower", str(tw), "--group", str(g), "u1^{t+1}")
    assert (code, out) == (1, "NO\n")


def test_fold_dump_reloads_to_same_dump():
    from lyndon_index.graph import dump_graph, load_graph, make_u_folded, canonical
    from lyndon_index.cli import load_tower
    _, out, _ = run("fold", *EXAMPLE)
    tower = load_tower(d("example.tower"))
    again = canonical(make_u_folded(load_graph(out, tower)))
    assert dump_graph(again) == out
