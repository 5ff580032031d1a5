import numpy as np
import pytest

from lapchol.cli import main
from lapchol import graph_io


@pytest.fixture
def unit_edge(tmp_path):
    g = tmp_path / "edge.el"
    g.write_text("0 1 1.0\n")
    b = tmp_path / "b.txt"
    b.write_text("1\n-1\n")
    return str(g), str(b)


def test_solve_unit_edge(unit_edge, tmp_path):
    g, b = unit_edge
    out = tmp_path / "x.txt"
    rep = tmp_path / "rep.txt"
    code = main(["--mode", "solve", "--graph", g, "--rhs", b,
                 "--epsilon", "1e-6", "--output", str(out), "--report", str(rep)])
    assert code == 0
    x = graph_io.read_vector(str(out))
    assert np.allclose(x, [0.5, -0.5], atol=1e-6)
    text = rep.read_text()
    assert "iterations" in text and "mode = solve" in text


def test_solve_missing_rhs(unit_edge, capsys):
    g, _ = unit_edge
    assert main(["--mode", "solve", "--graph", g]) == 1
    assert "--rhs" in capsys.readouterr().err


def test_solve_missing_graph(capsys):
    assert main(["--mode", "solve", "--rhs", "nowhere.txt"]) == 1
    err = capsys.readouterr().err
    assert "--graph" in err or "--demo" in err


def test_nonexistent_files(unit_edge, capsys):
    g, b = unit_edge
    assert main(["--mode", "solve", "--graph", "missing.el", "--rhs", b]) == 1
    assert main(["--mode", "solve", "--graph", g, "--rhs", "missing.txt"]) == 1


def test_bad_flag_value(capsys):
    assert main(["--mode", "dance"]) == 1
    assert "--mode" in capsys.readouterr().err


def test_rhs_length_mismatch(unit_edge, tmp_path, capsys):
    g, _ = unit_edge
    b = tmp_path / "b3.txt"
    b.write_text("1\n0\n-1\n")
    assert main(["--mode", "solve", "--graph", g, "--rhs", str(b)]) == 1


def test_disconnected_graph_rejected(tmp_path, capsys):
    g = tmp_path / "dis.el"
    g.write_text("0 1 1.0\n2 3 1.0\n")
    b = tmp_path / "b.txt"
    b.write_text("1\n-1\n0\n0\n")
    assert main(["--mode", "solve", "--graph", str(g), "--rhs", str(b)]) == 1


def test_schur_triangle(tmp_path):
    g = tmp_path / "tri.el"
    g.write_text("0 1 1.0\n1 2 1.0\n0 2 1.0\n")
    t = tmp_path / "terms.txt"
    t.write_text("1\n2\n")
    out = tmp_path / "schur.el"
    code = main(["--mode", "schur", "--graph", str(g), "--terminals", str(t),
                 "--epsilon", "0.25", "--seed", "3", "--output", str(out)])
    assert code == 0
    total = 0.0
    mapping = {}
    for line in out.read_text().splitlines():
        if line.startswith("# terminal"):
            _, _, new, orig = line.split()
            mapping[int(new)] = int(orig)
        elif not line.startswith("#"):
            _, _, w = line.split()
            total += float(w)
    assert mapping == {0: 1, 1: 2}
    # aggregate weight approximates the 1.5 series edge within e^0.25
    assert 1.5 * np.exp(-0.25) <= total <= 1.5 * np.exp(0.25)


def test_schur_missing_terminals(tmp_path, capsys):
    g = tmp_path / "tri.el"
    g.write_text("0 1 1.0\n1 2 1.0\n0 2 1.0\n")
    assert main(["--mode", "schur", "--graph", str(g)]) == 1
    assert "--terminals" in capsys.readouterr().err


def test_factor_demo_and_report(tmp_path):
    rep = tmp_path / "rep.txt"
    code = main(["--mode", "factor", "--demo", "grid:12x12", "--seed", "1",
                 "--report", str(rep)])
    assert code == 0
    text = rep.read_text()
    assert "mode = factor" in text and "levels =" in text


def test_demo_specs(tmp_path):
    out = tmp_path / "x.txt"
    b = tmp_path / "b.txt"
    b.write_text("".join(f"{v}\n" for v in ([1.0, -1.0] + [0.0] * 98)))
    code = main(["--mode", "solve", "--demo", "path:100", "--rhs", str(b),
                 "--epsilon", "1e-4", "--output", str(out)])
    assert code == 0
    code = main(["--mode", "solve", "--demo", "regular:100:3", "--rhs", str(b),
                 "--epsilon", "1e-4", "--output", str(out)])
    assert code == 0
    assert main(["--mode", "factor", "--demo", "banana:9"]) == 1
    assert main(["--mode", "factor", "--demo", "grid:4"]) == 1


def test_deterministic_outputs(tmp_path):
    g = tmp_path / "g.el"
    rng = np.random.default_rng(0)
    lines = []
    seen = set()
    for _ in range(400):
        u, v = rng.integers(0, 120, 2)
        if u == v or (min(u, v), max(u, v)) in seen:
            continue
        seen.add((min(u, v), max(u, v)))
        lines.append(f"{u} {v} {rng.uniform(0.5, 2):.6f}")
    for i in range(119):
        lines.append(f"{i} {i + 1} 1.0")
    g.write_text("\n".join(lines) + "\n")
    b = tmp_path / "b.txt"
    vals = rng.standard_normal(120)
    vals -= vals.mean()
    b.write_text("".join(f"{float(v)!r}\n" for v in vals))
    outs = []
    for run, threads in ((0, "1"), (1, "2"), (2, "1")):
        out = tmp_path / f"x{run}.txt"
        code = main(["--mode", "solve", "--graph", str(g), "--rhs", str(b),
                     "--epsilon", "1e-6", "--seed", "42", "--threads", threads,
                     "--deterministic", "--output", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_numerical_failure_exit_code(unit_edge, monkeypatch, capsys):
    from lapchol import cli
    from lapchol.errors import RetriesExhausted

    def boom(*args, **kwargs):
        raise RetriesExhausted("chain build failed 3 times")

    monkeypatch.setattr(cli, "solve", boom)
    g, b = unit_edge
    assert main(["--mode", "solve", "--graph", g, "--rhs", b]) == 2
    assert "numerical failure" in capsys.readouterr().err


def test_matrix_market_input(tmp_path):
    mm = tmp_path / "l.mtx"
    mm.write_text(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "3 3 6\n1 1 2\n2 2 2\n3 3 2\n2 1 -1\n3 1 -1\n3 2 -1\n"
    )
    b = tmp_path / "b.txt"
    b.write_text("1\n0\n-1\n")
    out = tmp_path / "x.txt"
    code = main(["--mode", "solve", "--graph", str(mm), "--format", "matrixmarket",
                 "--rhs", str(b), "--epsilon", "1e-8", "--output", str(out)])
    assert code == 0
    x = graph_io.read_vector(str(out))
    # triangle: L+ b for b = e0 - e2 is (1/3, 0, -1/3)
    assert np.allclose(x, [1 / 3, 0.0, -1 / 3], atol=1e-8)
