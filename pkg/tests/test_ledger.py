import json

from curvgraph.core.database import get_engine, get_session_scope
from curvgraph.crud import crud_run
from curvgraph.main import run
from curvgraph.models import RunStatusEnum

from .conftest import write_json


def test_crud_roundtrip(tmp_path):
    engine = get_engine(f"sqlite:///{tmp_path / 'crud.db'}")
    with get_session_scope(engine) as db:
        created = crud_run.create_run(db, command="curvature be", arguments='["--graph", "g.json"]')
        assert created.status == RunStatusEnum.pending
        updated = crud_run.update_run_status(db, created.id, RunStatusEnum.success, exit_code=0)
        assert updated.exit_code == 0
        assert crud_run.update_run_status(db, created.id + 100, RunStatusEnum.failed) is None
    with get_session_scope(engine) as db:
        assert [r.command for r in crud_run.list_runs(db)] == ["curvature be"]
        assert crud_run.list_runs(db, command="ends count") == []


def test_cli_runs_are_recorded(tmp_path, capsys):
    url = f"sqlite:///{tmp_path / 'ledger.db'}"
    graph = write_json(tmp_path / "edge.json", {"vertices": [{"id": 0}, {"id": 1}], "edges": [{"u": 0, "v": 1}]})
    glued = write_json(tmp_path / "glued.json", {"family": "lattice", "d": 2, "glue": {}})
    empty = write_json(tmp_path / "empty.json", [])

    assert run(["--ledger-url", url, "curvature", "ollivier", "--graph", graph]) == 0
    assert run(["--ledger-url", url, "harmonic", "dimbound", "--gen", glued, "--omega", empty]) == 1
    assert run(["--ledger-url", url, "curvature", "be", "--graph", graph, "--vertex", "7"]) == 2
    capsys.readouterr()

    with get_session_scope(get_engine(url)) as db:
        runs = crud_run.list_runs(db)
        assert [r.command for r in runs] == ["curvature ollivier", "harmonic dimbound", "curvature be"]
        assert [r.status for r in runs] == [RunStatusEnum.success, RunStatusEnum.refused, RunStatusEnum.failed]
        assert [r.exit_code for r in runs] == [0, 1, 2]
        assert json.loads(runs[0].arguments)[-2:] == ["--graph", graph]
        assert "7" in runs[2].error_message
