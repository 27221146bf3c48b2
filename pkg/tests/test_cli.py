from pathlib import Path

import networkx as nx
import pytest

from clebsch.cli import main
from clebsch.equivalences import Packing, dump_certificate
from clebsch.graphs import complete_graph, dump_edge_list, gen_high_girth_cubic, is_cycle, petersen, read_graph

DATA = Path(__file__).parent / "data"


def _edge_file(path: Path, G) -> str:
    path.write_text(dump_edge_list(G))
    return str(path)


def _nx_file(path: Path, H: nx.Graph) -> str:
    lines = [f"{H.number_of_nodes()} {H.number_of_edges()}"] + [f"{u} {v}" for u, v in H.edges]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def _fields(out: str) -> dict:
    return dict(ln.split(": ", 1) for ln in out.splitlines() if ": " in ln)


class TestGirth:
    def test_petersen(self, capsys):
        assert main(["girth", str(DATA / "petersen.txt")]) == 0
        assert capsys.readouterr().out.strip() == "5"

    def test_cycle_and_dot(self, capsys, tmp_path):
        dot = tmp_path / "p.dot"
        assert main(["girth", str(DATA / "petersen.txt"), "--cycle", "--dot", str(dot)]) == 0
        lines = capsys.readouterr().out.splitlines()
        cyc = [int(x) for x in lines[1].split()]
        assert is_cycle(petersen(), cyc) and len(cyc) == 5
        assert dot.read_text().startswith("graph")

    def test_forest(self, capsys, tmp_path):
        f = tmp_path / "p.txt"
        f.write_text("3 2\n0 1\n1 2\n")
        assert main(["girth", str(f)]) == 0
        assert capsys.readouterr().out.strip() == "inf"

    def test_bad_file(self, capsys, tmp_path):
        f = tmp_path / "bad.txt"
        f.write_text("3 2\n0 1\n")
        assert main(["girth", str(f)]) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["girth", str(tmp_path / "nope.txt")]) == 2


class TestCheck:
    def test_petersen_cover(self, capsys):
        assert main(["check", "cover", str(DATA / "petersen.txt"), str(DATA / "petersen_cover.txt")]) == 0
        assert _fields(capsys.readouterr().out)["valid"] == "yes"

    def test_corrupted_hom(self, capsys, tmp_path):
        cert = tmp_path / "h.txt"
        assert main(["convert", "--from", "cover", "--to", "hom", str(DATA / "petersen.txt"),
                     str(DATA / "petersen_cover.txt"), "--out", str(cert)]) == 0
        capsys.readouterr()
        assert main(["check", "hom", str(DATA / "petersen.txt"), str(cert)]) == 0
        capsys.readouterr()
        lines = cert.read_text().splitlines()
        # flip one vertex image onto its neighbour's image
        idx = [i for i, ln in enumerate(lines) if ln and not ln.startswith("#")]
        v0 = lines[idx[0]].split()[1]
        lines[idx[1]] = lines[idx[1]].split()[0] + " " + v0
        cert.write_text("\n".join(lines) + "\n")
        assert main(["check", "hom", str(DATA / "petersen.txt"), str(cert)]) == 1
        f = _fields(capsys.readouterr().out)
        assert f["valid"] == "no"
        assert f["violation"].startswith("edge (0, 1)")

    def test_malformed(self, capsys, tmp_path):
        cert = tmp_path / "c.txt"
        cert.write_text("U1: 0 x\n")
        assert main(["check", "cover", str(DATA / "petersen.txt"), str(cert)]) == 2

    def test_unknown_form(self):
        with pytest.raises(SystemExit) as err:
            main(["check", "colouring", str(DATA / "k4.txt"), str(DATA / "k4.txt")])
        assert err.value.code == 2


class TestConvert:
    def test_k4_round_trip(self, capsys, tmp_path):
        k4 = str(DATA / "k4.txt")
        P = Packing(read_graph(k4), 1, ({0, 1}, {0, 2}))
        files = {"packing": tmp_path / "packing.txt"}
        files["packing"].write_text(dump_certificate(P))
        order = ["packing", "cover", "hom", "cutcont", "packing"]
        for i, (a, b) in enumerate(zip(order, order[1:])):
            out = tmp_path / f"{i}_{b}.txt"
            assert main(["convert", "--from", a, "--to", b, k4, str(files[a]), "--out", str(out)]) == 0
            files[b] = out
            assert main(["check", b, k4, str(out)]) == 0
        err = capsys.readouterr().err
        assert "check: ok" in err

    def test_invalid_input(self, capsys, tmp_path):
        cert = tmp_path / "p.txt"
        cert.write_text(dump_certificate(Packing(complete_graph(4), 1, (set(), set()))))
        assert main(["convert", "--from", "packing", "--to", "hom", str(DATA / "k4.txt"), str(cert)]) == 1


class TestSolve:
    def test_petersen_strict_stuck(self, capsys):
        assert main(["solve", str(DATA / "petersen.txt")]) == 3
        f = _fields(capsys.readouterr().out)
        assert f["outcome"] == "stuck" and f["short_cycle_length"] == "5"
        assert is_cycle(petersen(), [int(x) for x in f["short_cycle"].split()])

    def test_petersen_adaptive(self, capsys, tmp_path):
        out = tmp_path / "cert.txt"
        g = str(DATA / "petersen.txt")
        assert main(["solve", g, "--adaptive", "--check-steps", "--out", str(out)]) == 0
        f = _fields(capsys.readouterr().out)
        assert f["outcome"] == "wonderful"
        assert f["check cover"] == f["check hom"] == f["check cutcont"] == "ok"
        assert main(["check", "cover", g, str(out)]) == 0
        assert main(["check", "hom", g, str(out)]) == 0

    def test_tree_with_aux(self, capsys, tmp_path):
        tree = tmp_path / "p2.txt"
        tree.write_text("2 1\n0 1\n")
        # a single edge is short by 4 degrees, so the padding graph is 4-regular
        aux = _nx_file(tmp_path / "aux.txt", nx.circulant_graph(13, [1, 5]))
        out = tmp_path / "cert.txt"
        assert main(["solve", str(tree), "--aux", aux, "--adaptive", "--out", str(out)]) == 0
        f = _fields(capsys.readouterr().out)
        assert f["completion"] == "13 copies" and f["outcome"] == "wonderful"
        assert main(["check", "cover", str(tree), str(out)]) == 0

    def test_tree_with_triangle_aux_is_stuck(self, capsys, tmp_path):
        tree = tmp_path / "p2.txt"
        tree.write_text("2 1\n0 1\n")
        aux = _nx_file(tmp_path / "k5.txt", nx.complete_graph(5))
        assert main(["solve", str(tree), "--aux", aux]) == 3
        assert _fields(capsys.readouterr().out)["outcome"] == "stuck"

    def test_subcubic_needs_aux(self, capsys, tmp_path):
        tree = tmp_path / "p2.txt"
        tree.write_text("2 1\n0 1\n")
        assert main(["solve", str(tree)]) == 2
        assert "--aux" in capsys.readouterr().err

    def test_wrong_aux_degree(self, tmp_path):
        tree = tmp_path / "p2.txt"
        tree.write_text("2 1\n0 1\n")
        aux = _nx_file(tmp_path / "c5.txt", nx.cycle_graph(5))
        assert main(["solve", str(tree), "--aux", aux]) == 2

    def test_degree_four_rejected(self, tmp_path):
        assert main(["solve", _edge_file(tmp_path / "k5.txt", complete_graph(5))]) == 2

    def test_budget(self, capsys):
        assert main(["solve", str(DATA / "petersen.txt"), "--max-iters", "1"]) == 3
        assert _fields(capsys.readouterr().out)["outcome"] == "budget"

    def test_trace_is_byte_identical(self, tmp_path):
        g = _edge_file(tmp_path / "g.txt", gen_high_girth_cubic(400, 8, seed=3))
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["solve", g, "--adaptive", "--trace", str(a)])
        main(["solve", g, "--adaptive", "--trace", str(b)])
        assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0


class TestGen:
    def test_writes_graph(self, tmp_path):
        out = tmp_path / "g.txt"
        assert main(["gen", "100", "--girth", "6", "--seed", "2", "--out", str(out)]) == 0
        G = read_graph(str(out))
        assert G.n == 100 and G.is_cubic()

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.txt", tmp_path / "b.txt"
        main(["gen", "60", "--girth", "5", "--seed", "7", "--out", str(a)])
        main(["gen", "60", "--girth", "5", "--seed", "7", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_odd_order_is_usage_error(self, capsys):
        assert main(["gen", "31", "--girth", "3"]) == 2

    def test_budget_exhausted(self, capsys):
        assert main(["gen", "30", "--girth", "8", "--budget", "5"]) in (2, 3)


class TestVerifyClaim:
    def test_small_counterexample(self, capsys):
        assert main(["verify-claim", "--d1", "4", "--d2", "3"]) == 1
        out = capsys.readouterr().out
        assert out.splitlines()[-1] == "verdict: COUNTEREXAMPLE"

    def test_dumps_identical_across_jobs(self, capsys, tmp_path):
        one, two = tmp_path / "j1", tmp_path / "j2"
        main(["verify-claim", "--d1", "4", "--d2", "3", "--jobs", "1", "--dump-dir", str(one)])
        out1 = capsys.readouterr().out
        main(["verify-claim", "--d1", "4", "--d2", "3", "--jobs", "2", "--dump-dir", str(two)])
        out2 = capsys.readouterr().out
        names = sorted(p.name for p in one.iterdir())
        assert names == sorted(p.name for p in two.iterdir())
        assert all((one / n).read_bytes() == (two / n).read_bytes() for n in names)
        assert out1 == out2

    def test_cross_check(self, capsys):
        main(["verify-claim", "--d1", "4", "--d2", "3", "--cross-check-prune"])
        assert _fields(capsys.readouterr().out)["cross_check_agrees"] == "yes"

    def test_capacity(self, capsys):
        assert main(["verify-claim", "--d1", "5", "--d2", "4", "--capacity", "50"]) == 3
        assert "CAPACITY_EXCEEDED" in capsys.readouterr().out

    def test_bad_depths(self):
        assert main(["verify-claim", "--d1", "1"]) == 2

    def test_bad_cost(self):
        with pytest.raises(SystemExit) as err:
            main(["verify-claim", "--cost", "1,2"])
        assert err.value.code == 2
