import json
import threading

import pytest

from classes.Catalog import builtin
from classes.Commands import RunConfig, parse_generator_spec, render_text
from classes.DataLogger import LEDGER_HEADER, DataLogger
from classes.Errors import BudgetExceeded, ParseError, SearchCancelled, StepBudget
from classes.PerformanceMonitor import PerformanceMonitor
from classes.SemigroupIO import (
    content_hash, expansion_to_dict, load_semigroup, parse_semigroup, semigroup_to_dict,
)
from classes.KrExpansion import kr_expand
from conftest import semigroup_file


class TestStepBudget:
    def test_limit(self):
        budget = StepBudget(2)
        budget.spend()
        budget.spend()
        assert budget.remaining == 0
        with pytest.raises(BudgetExceeded) as exc:
            budget.spend()
        assert exc.value.witness == 3

    def test_cancel_event(self):
        event = threading.Event()
        budget = StepBudget(10, event)
        budget.spend()
        event.set()
        with pytest.raises(SearchCancelled):
            budget.spend()
        assert budget.used == 1

    def test_positive_limit(self):
        with pytest.raises(ValueError):
            StepBudget(0)


class TestPerformanceMonitor:
    def test_counters_and_reset(self):
        monitor = PerformanceMonitor()
        monitor.record_function_time("kr_expand", 0.002)
        monitor.add_signatures(12)
        monitor.add_search_nodes(3)
        stats = monitor.get_latency_stats()
        assert stats["signatures_evaluated"] == 12
        assert stats["search_nodes"] == 3
        assert stats["operations"]["kr_expand"]["count"] == 1
        assert monitor.get_average_time("kr_expand") == pytest.approx(2.0)
        assert "PERFORMANCE SUMMARY" in monitor.get_performance_summary()
        monitor.reset()
        assert monitor.get_latency_stats()["operations"] == {}
        assert monitor.get_average_time("kr_expand") is None


class TestDataLogger:
    def test_rows_and_statistics(self, tmp_path):
        ledger = DataLogger(str(tmp_path / "runs"))
        ledger.log_run("info", "abc", "ok", 0, 0.01)
        ledger.log_run("check", "abc", "fails, witness", 1, 0.02)
        ledger.close_log_files()
        with open(ledger.ledger_filepath) as f:
            content = f.read()
        lines = content.splitlines()
        assert content.startswith(LEDGER_HEADER)
        assert len(lines) == 3
        assert lines[2].split(",")[3] == "fails; witness"
        stats = ledger.get_run_statistics()
        assert stats["info"]["runs"] == 1
        assert stats["check"]["elapsed"]["max_ms"] == pytest.approx(20.0)

    def test_header_written_once(self, tmp_path):
        first = DataLogger(str(tmp_path))
        first.log_run("info", "h", "ok", 0, 0.0)
        first.close_log_files()
        second = DataLogger(str(tmp_path))
        second.close_log_files()
        with open(second.ledger_filepath) as f:
            assert f.read().count(LEDGER_HEADER) == 1


class TestSemigroupIO:
    def test_load_file(self):
        S, gmap, digest = load_semigroup(semigroup_file("z2_0.json"))
        assert S.names == ("1", "g", "0")
        assert gmap.to_dict() == {"g": 1, "z": 2}
        with open(semigroup_file("z2_0.json"), "rb") as f:
            assert digest == content_hash(f.read())

    def test_builtin_hash(self):
        S, gmap, digest = load_semigroup("builtin:sl")
        assert S.order == 2
        assert digest == content_hash(b"builtin:sl")

    def test_unknown_builtin(self):
        with pytest.raises(ParseError):
            load_semigroup("builtin:nope")

    @pytest.mark.parametrize("document", [
        [],
        {"order": 1},
        {"table": "0"},
        {"table": [[0.5]]},
        {"table": [[True]]},
        {"order": 2, "table": [[0]]},
        {"table": [[0]], "generators": {}},
    ])
    def test_bad_documents(self, document):
        with pytest.raises(ParseError):
            parse_semigroup(document)

    def test_generator_names_and_indices(self):
        S, gmap = parse_semigroup({"table": [[0, 1], [1, 1]], "names": ["a", "b"], "generators": {"x": "a", "y": 1}})
        assert gmap.images == (0, 1)

    def test_round_trip_through_dict(self):
        S, gmap = builtin("z2_0")
        data = json.loads(json.dumps(semigroup_to_dict(S, gmap)))
        T, tmap = parse_semigroup(data)
        assert T.names == S.names
        assert tmap.to_dict() == gmap.to_dict()

    def test_expansion_sidecar(self, trivial_ab):
        S, gmap = trivial_ab
        data = expansion_to_dict(kr_expand(S, gmap))
        assert data["order"] == 6
        assert data["sidecar"]["projection"] == [0] * 6
        assert set(data["sidecar"]["letter_map"]) == {"a", "b"}
        assert data["sidecar"]["representatives"][:2] == ["a", "b"]


class TestRunConfig:
    def test_freeprod_takes_many_inputs(self):
        config = RunConfig(command="freeprod", inputs=["x.json", "y.json"], separate=["e f", "f e"])
        assert config.separate == ("e f", "f e")

    def test_single_input_commands(self):
        with pytest.raises(ValueError):
            RunConfig(command="info", inputs=["x.json", "y.json"])

    def test_check_needs_property(self):
        with pytest.raises(ValueError):
            RunConfig(command="check", inputs=["x.json"])


class TestGeneratorSpec:
    def test_pairs(self):
        S, _ = builtin("z2_0")
        assert parse_generator_spec(S, "a=g, b=0").to_dict() == {"a": 1, "b": 2}

    def test_json(self):
        S, _ = builtin("z2_0")
        assert parse_generator_spec(S, '{"a": 2}').to_dict() == {"a": 2}

    @pytest.mark.parametrize("text", ["a", "a=g,a=0", "{", "=g"])
    def test_errors(self, text):
        S, _ = builtin("z2_0")
        with pytest.raises(ParseError):
            parse_generator_spec(S, text)


def test_render_text_tables():
    text = render_text({"command": "tower", "orders": [2, 4], "levels": [{"level": 0, "order": 2}]})
    assert "levels:" in text
    assert "orders: [2, 4]" in text
