import json

import pytest

from pdpp.cli import main
from pdpp.gallery import nested_chord_showcase
from pdpp.instances import write_instance, write_solution, Solution


@pytest.fixture
def k2_file(tmp_path):
    f = tmp_path / "k2.dpp"
    f.write_text("p dpp 2 1 1\ne 1 2\nt 1 2\n")
    return str(f)


@pytest.fixture
def cross_file(tmp_path):
    f = tmp_path / "cross.dpp"
    f.write_text(
        "p dpp 4 4 2\ne 1 2\ne 1 3\ne 2 4\ne 3 4\nt 1 4\nt 2 3\n"
    )
    return str(f)


class TestSolve:
    def test_yes_exit_zero(self, k2_file, capsys):
        assert main(["solve", k2_file]) == 0
        out = capsys.readouterr().out
        assert "s dpp yes" in out
        assert "path 1 1 2" in out

    def test_no_exit_one(self, cross_file, capsys):
        assert main(["solve", cross_file]) == 1
        assert "s dpp no" in capsys.readouterr().out

    def test_oracle_budget_exit_two(self, tmp_path, capsys):
        from pdpp.instances import gen_grid_instance

        f = tmp_path / "big.dpp"
        f.write_text(write_instance(gen_grid_instance(6, 2, 3)))
        code = main(["solve", str(f), "--engine", "oracle", "--budget", "10"])
        assert code == 2

    def test_engines_agree(self, k2_file, capsys):
        for engine in ("pipeline", "dp", "oracle"):
            assert main(["solve", k2_file, "--engine", engine]) == 0
            capsys.readouterr()

    def test_json_output(self, k2_file, capsys):
        assert main(["solve", k2_file, "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["answer"] == "yes"
        assert payload["paths"] == [[1, 2]]

    def test_parse_error_exit_65(self, tmp_path, capsys):
        f = tmp_path / "bad.dpp"
        f.write_text("p dpp 2 1 1\ne 1 9\nt 1 2\n")
        assert main(["solve", str(f)]) == 65

    def test_usage_error_exit_64(self, capsys):
        assert main(["solve", "--engine", "wat", "x"]) == 64

    def test_emit_decomposition(self, k2_file, tmp_path, capsys):
        out = tmp_path / "dec.txt"
        assert main(["solve", k2_file, "--emit-decomposition", str(out)]) == 0
        text = out.read_text()
        assert "node 0 bag" in text

    def test_multiple_files_jobs(self, k2_file, cross_file, capsys):
        code = main(["solve", k2_file, cross_file, "--jobs", "2", "--json"])
        assert code == 1  # worst of YES and NO
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2


class TestGen:
    def test_grid_deterministic(self, capsys):
        assert main(["gen", "grid", "--size", "6", "--pairs", "2", "--seed", "7"]) == 0
        a = capsys.readouterr().out
        assert main(["gen", "grid", "--size", "6", "--pairs", "2", "--seed", "7"]) == 0
        b = capsys.readouterr().out
        assert a == b and a.startswith("p dpp 36 60 2")

    def test_planar(self, capsys):
        assert main(["gen", "planar", "--vertices", "8", "--edges", "12",
                     "--pairs", "2", "--seed", "1"]) == 0
        assert capsys.readouterr().out.startswith("p dpp 8 12 2")

    def test_infeasible_exit_64(self, capsys):
        assert main(["gen", "planar", "--vertices", "3", "--edges", "7",
                     "--pairs", "1", "--seed", "1"]) == 64


class TestVerify:
    def test_valid(self, k2_file, tmp_path, capsys):
        sol = tmp_path / "sol.txt"
        sol.write_text("s dpp yes\npath 1 1 2\n")
        assert main(["verify", k2_file, str(sol)]) == 0

    def test_invalid(self, k2_file, tmp_path, capsys):
        sol = tmp_path / "sol.txt"
        sol.write_text("s dpp yes\npath 1 2 1\n")
        assert main(["verify", k2_file, str(sol)]) == 1


class TestReduce:
    def test_certificate_line(self, tmp_path, capsys):
        from pdpp.instances import gen_grid_instance

        f = tmp_path / "g6.dpp"
        f.write_text(write_instance(gen_grid_instance(6, 2, 2)))
        assert main(["reduce", str(f), "--mode", "heuristic"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("irrelevant ")
        assert " grid 6 " in out and " mode heuristic" in out


class TestRoute:
    def test_straight_columns(self, tmp_path, capsys):
        pat = tmp_path / "pat.txt"
        pat.write_text("up 1 down 1\nup 2 down 2\n")
        assert main(["route", str(pat), "--size", "2"]) == 0
        out = capsys.readouterr().out
        assert "s dpp yes" in out
        assert "path 1 1 3" in out

    def test_bad_pattern_exit_65(self, tmp_path, capsys):
        pat = tmp_path / "pat.txt"
        pat.write_text("up 1 down 2\nup 2 down 1\n")
        assert main(["route", str(pat), "--size", "2"]) == 65


class TestAnalyze:
    def test_empty_linkage_grid_default_cycles(self, tmp_path, capsys):
        from pdpp.instances import gen_grid_instance

        f = tmp_path / "g6.dpp"
        f.write_text(write_instance(gen_grid_instance(6, 2, 2)))
        assert main(["analyze", str(f), "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["segments"] == 0
        assert report["convex"] is True

    def test_showcase_report(self, tmp_path, capsys):
        q = nested_chord_showcase()
        inst_file = tmp_path / "show.dpp"
        pairs = tuple((p[0], p[-1]) for p in q.linkage.paths)
        from pdpp.instances import DppInstance

        inst_file.write_text(write_instance(DppInstance(q.graph, pairs)))
        cyc_file = tmp_path / "cycles.txt"
        cyc_file.write_text(
            "\n".join(
                "cycle " + " ".join(map(str, c.vertices)) for c in q.cycles.cycles
            )
        )
        link_file = tmp_path / "linkage.txt"
        link_file.write_text(
            write_solution(Solution(tuple(tuple(p) for p in q.linkage.paths)))
        )
        assert (
            main(
                [
                    "analyze",
                    str(inst_file),
                    "--cycles",
                    str(cyc_file),
                    "--linkage",
                    str(link_file),
                    "--json",
                ]
            )
            == 0
        )
        report = json.loads(capsys.readouterr().out)
        assert report["leaves"] == 11
        assert report["dilation"] == 4
        assert report["classes"] == 19
