import sqlite3

from greedybases import db, migrations, storage
from greedybases.paths import get_db_path
from greedybases.verify import CheckReport


def _columns() -> list[str]:
    conn = sqlite3.connect(get_db_path())
    columns = [info[1] for info in conn.execute("PRAGMA table_info(runs)").fetchall()]
    conn.close()
    return columns


def test_init_db_is_idempotent():
    migrations.init_db()
    migrations.init_db()
    assert _columns() == ["id", "space", "suite", "seed", "corpus_size", "status", "violations", "report", "created_at"]
    assert db.list_runs() == []


def test_record_and_read_back():
    migrations.init_db()
    passing = CheckReport("min", "lp:1:3", bound=1.0)
    passing.record(0.5, {})
    failing = CheckReport("pg", "lp:1:3", bound=1.0)
    failing.record(2.0, {})
    failing.record(3.0, {})

    first = storage.record_run("lp:1:3", "min", 42, [passing], "report-1\n", corpus_size=10)
    second = storage.record_run("lp:1:3", "min,pg", 42, [passing, failing], "report-2\n")

    assert db.get_run(first)["status"] == "pass"
    run = db.get_run(second)
    assert run["status"] == "fail"
    assert run["violations"] == 2
    assert run["report"] == "report-2\n"
    assert [r["id"] for r in db.list_runs()] == [second, first]
    assert "report" not in db.list_runs()[0]
    assert db.list_runs(limit=1, offset=1)[0]["id"] == first


def test_list_filters_by_space():
    migrations.init_db()
    db.add_run("lp:1:3", "min", 1, "pass", 0, "")
    db.add_run("example:2", "min", 1, "pass", 0, "")
    assert [r["space"] for r in db.list_runs(space="example:2")] == ["example:2"]


def test_delete():
    migrations.init_db()
    run_id = db.add_run("lp:1:3", "min", 1, "pass", 0, "")
    assert db.delete_run(run_id)
    assert db.get_run(run_id) is None
    assert not db.delete_run(run_id)


def test_record_run_failure_is_logged(mocker, caplog):
    migrations.init_db()
    mocker.patch.object(db, "add_run", side_effect=sqlite3.OperationalError("database is locked"))
    assert storage.record_run("lp:1:3", "min", 1, [], "") is None
    assert "Failed to record run" in caplog.text
