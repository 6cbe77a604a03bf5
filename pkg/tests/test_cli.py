"""Command line surface: outputs, exit codes, report files."""

import json

import pytest

from currents_lab.cli import main


def run(capsys, argv):
    try:
        code = main(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestWordCommands:
    def test_reduce(self, capsys):
        code, out, _ = run(capsys, ["reduce", "-w", "abBa"])
        assert (code, out) == (0, "aa\n")

    def test_reduce_identity(self, capsys):
        code, out, _ = run(capsys, ["reduce", "-w", "aBbA"])
        assert (code, out) == (0, "1\n")

    def test_reduce_cyclic(self, capsys):
        code, out, _ = run(capsys, ["reduce", "-w", "abA", "--cyclic"])
        assert (code, out) == (0, "b\n")

    def test_apply_power(self, capsys):
        code, out, _ = run(capsys, ["apply", "--aut", "phi", "-w", "Ac", "-n", "4"])
        assert (code, out) == (0, "BBBBAc\n")

    def test_apply_negative_power(self, capsys):
        code, out, _ = run(capsys, ["apply", "--aut", "phi", "-w", "Ac", "-n", "-3"])
        assert (code, out) == (0, "bbbAc\n")

    def test_coord(self, capsys):
        code, out, _ = run(capsys, ["coord", "-v", "a", "-c", "1*[abab]"])
        assert (code, out) == (0, "2\n")


class TestLengthCommand:
    def test_tree_length(self, capsys):
        code, out, _ = run(
            capsys, ["length", "--tree", "twist (a:b,1)", "-g", "ca", "--rank", "3"]
        )
        assert (code, out) == (0, "1\n")

    def test_current_length(self, capsys):
        code, out, _ = run(capsys, ["length", "-c", "3/2*[ab]", "--rank", "2"])
        assert (code, out) == (0, "3\n")

    def test_both_routes(self, capsys):
        code, out, _ = run(
            capsys,
            ["length", "--tree", "twist (a:b,1)", "-g", "ca", "--rank", "3", "--route", "both"],
        )
        assert (code, out) == (0, "1\n")

    def test_intersect(self, capsys):
        code, out, _ = run(
            capsys, ["intersect", "--tree", "cayley", "-c", "1*[ab]", "--rank", "2"]
        )
        assert (code, out) == (0, "2\n")


class TestExitCodes:
    def test_parse_error_shows_caret(self, capsys):
        code, _, err = run(capsys, ["coord", "-v", "a?b", "-c", "1*[a]"])
        assert code == 2
        assert "position 1" in err
        lines = err.splitlines()
        assert lines[-2].strip() == "a?b"
        assert lines[-1].strip() == "^"

    def test_rank_gate(self, capsys):
        code, _, err = run(capsys, ["experiment", "theorem-main", "--rank", "3"])
        assert code == 3
        assert "requires rank >= 5" in err

    def test_not_stabilized(self, capsys):
        code, _, err = run(
            capsys,
            [
                "length", "--tree", "twist (a:b,1)",
                "-g", "a" + "b" * 30 + "ca",
                "--rank", "3", "--route", "limit", "--cap", "8",
            ],
        )
        assert code == 4
        assert "cap" in err

    def test_domain_error(self, capsys):
        code, _, err = run(capsys, ["length", "--tree", "twist (a:b,1)", "-g", "aA", "--rank", "3"])
        assert code == 3


class TestReports:
    def test_experiment_stdout_json(self, capsys):
        code, out, _ = run(capsys, ["experiment", "theorem-back"])
        assert code == 0
        payload = json.loads(out)
        assert payload["experiment"] == "theorem-back"
        witness = [t for t in payload["tables"] if t["name"] == "witness"][0]
        assert witness["rows"] == [["ca", "1", "0"]]

    def test_report_files_byte_identical(self, capsys, tmp_path):
        first = tmp_path / "one.json"
        second = tmp_path / "two.json"
        for path in (first, second):
            code, out, _ = run(
                capsys,
                ["experiment", "outlook-identity", "--iters", "4", "--out", str(path)],
            )
            assert code == 0
            assert f"wrote {path}" in out
        assert first.read_bytes() == second.read_bytes()

    def test_csv_output(self, capsys, tmp_path):
        path = tmp_path / "rows.csv"
        code, out, _ = run(
            capsys,
            ["experiment", "outlook-identity", "--iters", "3", "--csv", str(path)],
        )
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[0] == "table,pairing"
        assert lines[2] == "1,1/2,1/2"

    def test_iterate(self, capsys, tmp_path):
        path = tmp_path / "orbit.json"
        code, out, _ = run(
            capsys,
            [
                "iterate", "--aut", "twist(a,b)", "-c", "1*[a]",
                "--limit", "1*[b]", "--iters", "5", "--rank", "3",
                "--out", str(path),
            ],
        )
        assert code == 0
        payload = json.loads(path.read_text())
        orbit = payload["tables"][0]
        assert orbit["rows"][5] == ["5", "6", "1/6"]


class TestSelftest:
    def test_quick_run(self, capsys):
        code, out, _ = run(capsys, ["selftest", "--quick", "--seed", "1"])
        assert code == 0
        lines = out.splitlines()
        assert lines[-1] == "22/22 checks passed (seed 1)"
        assert all(line.startswith("ok") for line in lines[:-1])
