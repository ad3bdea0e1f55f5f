import json
import threading
import time
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from rothsq.core.budget import SearchBudget
from rothsq.core.errors import (
    ArithmeticOverflowError,
    BudgetExhausted,
    ErrorRecord,
    ErrorSeverity,
    ExitCode,
    PreconditionError,
    classify_error,
    require,
)
from rothsq.core.settings import Settings, settings
from rothsq.core.storage import ArtifactStorage, csv_text, dumps_canonical, to_jsonable
from rothsq.core.workers import ordered_map, worker_count
from rothsq.models import RunConfig


def test_to_jsonable_values():
    assert to_jsonable(Fraction(6, 3)) == 2
    assert to_jsonable(Fraction(1, 4)) == {"num": 1, "den": 4, "float": 0.25}
    assert to_jsonable(np.int64(7)) == 7
    assert to_jsonable(complex(1, -2)) == {"re": 1.0, "im": -2.0}
    assert to_jsonable(float("nan")) == "nan"
    assert to_jsonable({1: {3, 2}}) == {"1": [2, 3]}
    assert to_jsonable(ExitCode.BUDGET_EXHAUSTED) == 3
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_dumps_canonical_is_key_order_independent():
    assert dumps_canonical({"b": 1, "a": [1, 2]}) == dumps_canonical({"a": [1, 2], "b": 1})
    assert dumps_canonical({}).endswith("\n")


def test_csv_text():
    text = csv_text(["q", "value"], [[1, Fraction(1, 3)], [2, np.float64(0.5)]])
    assert text == "q,value\n1,1/3\n2,0.5\n"


def test_storage_writes_files(tmp_path):
    storage = ArtifactStorage(str(tmp_path / "out"))
    path = storage.save_json("report", {"x": Fraction(1, 2)})
    assert path is not None and path.exists()
    assert json.loads(path.read_text())["x"]["den"] == 2
    storage.save_csv("table", ["a"], [[1]])
    assert storage.saved() == ["report.json", "table.csv"]
    assert (tmp_path / "out" / "table.csv").read_text() == "a\n1\n"


def test_storage_falls_back_to_memory(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("not a directory")
    storage = ArtifactStorage(str(blocker / "out"))
    assert storage.output_dir is None
    assert storage.last_error
    assert storage.save_json("report", {"ok": True}) is None
    assert json.loads(storage.memory["report.json"]) == {"ok": True}


@pytest.mark.parametrize(
    "exception, code, severity",
    [
        (PreconditionError("w", "too small"), ExitCode.INVALID_CONFIG, ErrorSeverity.LOW),
        (ArithmeticOverflowError("W too large"), ExitCode.INVALID_CONFIG, ErrorSeverity.HIGH),
        (BudgetExhausted("stopped"), ExitCode.BUDGET_EXHAUSTED, ErrorSeverity.MEDIUM),
        (RuntimeError("boom"), ExitCode.UNEXPECTED, ErrorSeverity.CRITICAL),
    ],
)
def test_classify_error(exception, code, severity):
    record = classify_error(exception)
    assert record.exit_code is code
    assert record.severity is severity
    assert record.to_dict()["exit_code"] == int(code)


def test_classify_validation_error():
    with pytest.raises(ValidationError) as info:
        RunConfig(command="decay", delta=2.0)
    record = classify_error(info.value)
    assert record.exit_code is ExitCode.INVALID_CONFIG
    assert record.field_name == "delta"


def test_error_record_defaults():
    record = ErrorRecord("RuntimeError", "boom", ErrorSeverity.CRITICAL, ExitCode.UNEXPECTED)
    assert record.field_name is None
    assert record.traceback == ""
    assert record.timestamp is not None
    assert record.to_dict() == {
        "type": "RuntimeError",
        "message": "boom",
        "severity": "critical",
        "exit_code": 1,
        "field": None,
    }


def test_classify_precondition_keeps_field():
    record = classify_error(PreconditionError("w", "too small"))
    assert record.field_name == "w"
    assert record.to_dict()["field"] == "w"
    assert "PreconditionError" in record.traceback


def test_require():
    require(True, "x", "unused")
    with pytest.raises(PreconditionError) as info:
        require(False, "x", "must hold")
    assert str(info.value) == "x: must hold"


def test_search_budget_node_limit():
    budget = SearchBudget(node_limit=3, time_limit=60)
    for _ in range(2):
        budget.record_node()
    assert budget.can_proceed()
    budget.record_node()
    assert not budget.can_proceed()
    assert budget.to_dict() == {
        "nodes": 3,
        "node_limit": 3,
        "time_limit": 60,
        "state": "open",
        "reason": "node_limit",
    }


def test_search_budget_time_limit():
    budget = SearchBudget(node_limit=10**9, time_limit=0.0)
    assert not budget.can_proceed()
    assert budget.reason == "time_limit"


def test_ordered_map_preserves_order():
    def slow_square(x):
        time.sleep(0.001 * (10 - x))
        return x * x, threading.get_ident()

    results = ordered_map(slow_square, range(10), threads=4)
    assert [value for value, _ in results] == [x * x for x in range(10)]
    assert ordered_map(lambda x: x + 1, [], threads=4) == []
    assert worker_count(3) == 3
    assert worker_count(0) == 1


def test_settings_environment_override(monkeypatch):
    monkeypatch.setenv("ROTHSQ_GRID_FACTOR", "32")
    monkeypatch.setenv("ROTHSQ_NODE_BUDGET", "500")
    fresh = Settings()
    assert fresh.grid_factor == 32
    assert fresh.node_budget == 500
    assert fresh.tau == 0.01


def test_settings_reject_invalid_width():
    with pytest.raises(ValidationError):
        Settings(int_bits=0)


def test_run_config_defaults_follow_settings(monkeypatch):
    monkeypatch.setattr(settings, "tau", 0.05)
    monkeypatch.setattr(settings, "grid_factor", 24)
    config = RunConfig(command="decay")
    assert config.tau == 0.05
    assert config.grid_factor == 24
    assert RunConfig(command="decay", tau=0.02, grid_factor=8).tau == 0.02
