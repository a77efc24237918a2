import json

import pytest

from greedybases import cli, db
from greedybases.paths import get_db_path


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def records(out: str) -> list[dict]:
    return [json.loads(line) for line in out.splitlines() if line.strip()]


class TestNorm:
    def test_example_space(self, capsys):
        code, out = run(capsys, "norm", "--space", "example:3", "--vec", "1x[1..6]")
        assert code == cli.EXIT_OK
        [record] = records(out)
        assert record["norm"] == 2.0
        assert record["vector"] == [1.0] * 6 + [0.0] * 6

    def test_dimension_flag(self, capsys):
        _, out = run(capsys, "norm", "--space", "lp:2", "--dim", "3", "--vec", "e1")
        assert records(out)[0]["norm"] == 1.0

    def test_dual_space(self, capsys):
        _, out = run(capsys, "norm", "--space", "dual(example:3)", "--vec", "1x[7..12]")
        assert records(out)[0]["norm"] == pytest.approx(1.0, abs=1e-7)

    def test_dual_norm_with_witness(self, capsys):
        _, out = run(capsys, "norm", "--space", "lp:1", "--dim", "3", "--vec", "1,-2,3", "--dual")
        [record] = records(out)
        assert record["norm"] == 6.0
        assert record["dual_norm"] == pytest.approx(3.0, abs=1e-7)
        assert len(record["dual_witness"]) == 3


class TestGreedy:
    def test_tga(self, capsys):
        _, out = run(capsys, "greedy", "--space", "lp:1", "--vec", "3,1,2", "--m", "1")
        [record] = records(out)
        assert record["selection"] == [1]
        assert record["index_set"] == [1]
        assert record["thresholds"] == [3.0]
        assert record["residual"] == [0.0, 1.0, 2.0]
        assert record["residual_norm"] == 3.0

    def test_wtga(self, capsys):
        _, out = run(capsys, "greedy", "--space", "lp:2", "--vec", "3,1,2", "--m", "2", "--algo", "wtga")
        [record] = records(out)
        assert record["policy"] == "greedy"
        assert record["selection"] == [1, 3]
        assert record["approximant"] == [3.0, 0.0, 2.0]

    def test_bga(self, capsys):
        _, out = run(capsys, "greedy", "--space", "lp:1", "--vec", "1,4,3", "--m", "2", "--algo", "bga")
        [record] = records(out)
        assert record["rule"] == "smallest-index"
        assert record["selection"] == [2, 3]
        assert record["admissible_sets"] == [[2, 3], [3]]
        assert record["thresholds"] == [2.0, 1.5]

    def test_m_too_large(self, capsys):
        code, _ = run(capsys, "greedy", "--space", "lp:1", "--vec", "1,2", "--m", "5")
        assert code == cli.EXIT_USAGE


class TestErrors:
    def test_single_m(self, capsys):
        _, out = run(capsys, "errors", "--space", "lp:1", "--vec", "1,3,2", "--m", "1")
        rows = records(out)
        by_name = {r["functional"]: r for r in rows if r["functional"] != "dist_indicator"}
        assert by_name["sigma_L"]["value"] == 5.0
        assert by_name["sigma_R"]["value"] == 4.0
        assert by_name["sigma_gag"]["value"] == 4.0
        sides = [r["side"] for r in rows if r["functional"] == "dist_indicator"]
        assert sides == ["both", "left", "right", "unconstrained"]

    def test_every_m_as_csv(self, capsys):
        _, out = run(capsys, "errors", "--space", "lp:1", "--vec", "3,1,2", "--lambda", "0.5", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "m,functional,side,value,feasible,witness_set"
        # 6 functionals, 4 indicator sides, gag and overlap for each of m = 1, 2, 3
        assert len(lines) == 1 + 3 * 12
        assert "1,sigma_L,,,False,[]" in lines


class TestConstants:
    def test_example_space(self, capsys):
        _, out = run(capsys, "constants", "--space", "example:3")
        by_kind = {r["kind"]: r for r in records(out)}
        assert by_kind["conservative"]["value"] == 1.0
        assert by_kind["conservative"]["exactness"] == "exact"
        assert by_kind["democratic"]["value"] == pytest.approx(3.0)
        assert by_kind["fundamental_function"]["value"][-1] == 6.0

    def test_greedy_type_kinds(self, capsys):
        _, out = run(capsys, "constants", "--space", "lp:1", "--dim", "4", "--kinds", "ag,qc", "--corpus-size", "20")
        kinds = [r["kind"] for r in records(out)]
        assert "ag" in kinds and "qc" in kinds

    def test_unknown_kind(self, capsys):
        code, _ = run(capsys, "constants", "--space", "lp:1", "--dim", "4", "--kinds", "nope")
        assert code == cli.EXIT_USAGE


class TestVerify:
    def test_passing_suite(self, capsys):
        code, out = run(capsys, "verify", "--space", "lp:1", "--dim", "4", "--suite", "pg", "--corpus-size", "30")
        assert code == cli.EXIT_OK
        [report] = records(out)
        assert report["check"] == "pg"
        assert report["status"] == "pass"
        [stored] = db.list_runs()
        assert stored["status"] == "pass"
        assert stored["corpus_size"] == 30

    def test_violation_exit_code(self, capsys):
        code, _ = run(capsys, "verify", "--space", "weighted:1,2,3,4", "--suite", "one_pg_reverse", "--corpus-size", "50")
        assert code == cli.EXIT_VIOLATION
        assert db.list_runs()[0]["status"] == "fail"

    def test_no_record(self, capsys):
        run(capsys, "verify", "--space", "lp:1", "--dim", "3", "--suite", "min", "--corpus-size", "5", "--no-record")
        assert not get_db_path().exists()

    def test_csv(self, capsys):
        _, out = run(capsys, "verify", "--space", "lp:2", "--dim", "3", "--suite", "min,fundamental", "--corpus-size", "5", "--format", "csv", "--no-record")
        lines = out.splitlines()
        assert lines[0] == "check,instances,max_ratio,bound,violations,vacuous"
        assert [line.split(",")[0] for line in lines[1:]] == ["fundamental", "min"]

    def test_out_file_is_deterministic(self, capsys, tmp_path):
        argv = ["verify", "--space", "lp:1", "--dim", "4", "--suite", "min,pg", "--corpus-size", "20", "--seed", "7", "--no-record"]
        cli.main(argv + ["--out", str(tmp_path / "a.jsonl")])
        cli.main(argv + ["--out", str(tmp_path / "b.jsonl")])
        assert capsys.readouterr().out == ""
        assert (tmp_path / "a.jsonl").read_text() == (tmp_path / "b.jsonl").read_text()

    def test_unknown_suite(self, capsys):
        code, _ = run(capsys, "verify", "--space", "lp:1", "--suite", "bogus")
        assert code == cli.EXIT_USAGE


class TestHistory:
    def test_empty(self, capsys):
        _, out = run(capsys, "history", "list")
        assert "No verify runs recorded." in out

    def test_list_show_delete(self, capsys):
        _, report = run(capsys, "verify", "--space", "lp:1", "--dim", "3", "--suite", "min", "--corpus-size", "5")
        run(capsys, "verify", "--space", "lp:2", "--dim", "3", "--suite", "min", "--corpus-size", "5")

        _, out = run(capsys, "history", "list")
        assert "#1" in out and "#2" in out

        _, out = run(capsys, "history", "list", "--space", "lp:2")
        assert "#2" in out and "#1" not in out

        _, out = run(capsys, "history", "show", "1")
        assert out == report

        code, out = run(capsys, "history", "delete", "1")
        assert code == cli.EXIT_OK
        assert "Deleted run #1" in out
        assert run(capsys, "history", "show", "1")[0] == cli.EXIT_USAGE
        assert run(capsys, "history", "delete", "1")[0] == cli.EXIT_USAGE


class TestUsage:
    def test_help_and_plain_commands_leave_no_database(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["--help"])
        assert exc.value.code == 0
        run(capsys, "norm", "--space", "lp:1", "--dim", "2", "--vec", "e1")
        assert not get_db_path().exists()

    def test_bad_space(self, capsys):
        code, _ = run(capsys, "norm", "--space", "bogus:1", "--vec", "e1")
        assert code == cli.EXIT_USAGE

    def test_bad_vector(self, capsys):
        code, _ = run(capsys, "norm", "--space", "lp:1", "--dim", "2", "--vec", "e3")
        assert code == cli.EXIT_USAGE

    def test_missing_required_flag(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["norm", "--vec", "e1"])
        assert exc.value.code == cli.EXIT_USAGE

    def test_flags_reach_settings(self, capsys):
        code, _ = run(capsys, "errors", "--space", "lp:1", "--dim", "4", "--vec", "e1", "--m", "1", "--cap-dim", "3")
        assert code == cli.EXIT_USAGE
