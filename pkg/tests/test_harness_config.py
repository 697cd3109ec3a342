#
#  BoltzmannMapTools - Simulation tools for Galton-Watson trees and Boltzmann planar maps
#  Copyright © 2024 Leon Böttger. All rights reserved.
#

import json
from fractions import Fraction

import numpy as np
import pytest

from Boltzmann import config as solver_config
from Harness import config as config_module
from Harness import result_cache
from Harness.config import (ExperimentConfig, InvalidConfigError, load_config, load_law, load_weights,
                            map_size_kind, parse_preset, parse_tree_functional)
from Harness.reports import default_run_name, render, to_csv, to_json, write_report
from Harness.result_cache import CacheFileError
from Periodicity.lattice import SizeVector


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 1, "samples": 5, "sizes": [4, 6]}))
    return str(path)


def test_defaults():
    config = load_config(environ={})
    assert config == ExperimentConfig()
    assert config.format == "json" and config.threads == 1


def test_file_then_environment_then_flags(config_file):
    config = load_config(config_file, {"samples": None, "radius": 3}, environ={"BMT_SEED": "2"})
    assert config.seed == 2
    assert config.samples == 5
    assert config.radius == 3
    assert config.sizes == (4, 6)
    assert load_config(config_file, {"seed": 9}, environ={"BMT_SEED": "2"}).seed == 9


def test_environment_values_are_converted():
    config = load_config(environ={"BMT_THREADS": "3", "BMT_FORMAT": "csv", "BMT_OUT": "-"})
    assert (config.threads, config.format, config.out) == (3, "csv", "-")
    with pytest.raises(InvalidConfigError):
        load_config(environ={"BMT_SEED": "many"})


def test_unknown_config_keys(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"seed": 1, "colour": "blue"}))
    with pytest.raises(InvalidConfigError, match="colour"):
        load_config(str(path), environ={})


@pytest.mark.parametrize("values", [
    {"format": "xml"},
    {"threads": 0},
    {"samples": 0},
    {"seed": -1},
    {"radius": -1},
    {"sizes": (3, -2)},
    {"tail_range": (9, 2)},
])
def test_invalid_values(values):
    with pytest.raises(InvalidConfigError):
        ExperimentConfig(**values)


def test_reproducible_json_drops_output_fields():
    data = ExperimentConfig(threads=4, out="-", sizes=(2,)).reproducible_json()
    assert "threads" not in data and "out" not in data and "format" not in data
    assert data["sizes"] == [2]
    assert data["tail_range"] == [5, 25]


def test_parse_preset():
    assert parse_preset("even:p=2") == ("even", {"p": 2})
    assert parse_preset("odd:p=1") == ("odd", {"p": 1})
    assert parse_preset("uipm") == ("uipm", {})
    assert parse_preset("MONO2") is None
    assert parse_preset("weights.json") is None
    with pytest.raises(InvalidConfigError):
        parse_preset("even:p=two")


def test_missing_inputs():
    with pytest.raises(InvalidConfigError):
        load_law(None)
    with pytest.raises(InvalidConfigError):
        load_weights(None)
    with pytest.raises(ValueError):
        load_weights("NO_SUCH_EXAMPLE")


def test_inputs_from_files_and_examples(tmp_path):
    path = tmp_path / "weights.json"
    path.write_text(json.dumps({"table": {"4": 0.05}}))
    assert load_weights(str(path)).q(4) == 0.05
    assert load_weights("quadrangulation").q(4) == pytest.approx(1 / 12)
    assert load_law("MONO2").K == 1


def test_preset_weights_are_cached(monkeypatch):
    first = load_weights("even:p=2")
    assert result_cache.get_cached_value("preset:even:p=2") == first.to_json()

    def fail(*args):
        raise AssertionError("the cached weights should be used")

    monkeypatch.setattr(config_module, "preset", fail)
    assert load_weights("even:p=2") == first


def test_parse_tree_functional(toy2, quadrangulation):
    assert parse_tree_functional("1,0", toy2) == SizeVector((1, 0), (1, 2))
    with pytest.raises(InvalidConfigError):
        parse_tree_functional("1", toy2)
    with pytest.raises(InvalidConfigError):
        parse_tree_functional("a,b", toy2)
    mobiles = quadrangulation.mobile_law.law
    faces = parse_tree_functional("F", mobiles)
    assert faces.labels == mobiles.labels


def test_map_size_kind():
    assert map_size_kind("E") == "E"
    with pytest.raises(InvalidConfigError):
        map_size_kind("1,0")


# --- result cache ------------------------------------------------------------------


def test_cache_round_trip():
    assert result_cache.get_cached_value("missing") is None
    result_cache.set_cached_value("answer", [4, 2])
    assert result_cache.get_cached_value("answer") == [4, 2]


def test_cache_generator_runs_once():
    calls = []

    def generate():
        calls.append(1)
        return {"value": 1}

    assert result_cache.get_cached_value_or_set("key", generate) == {"value": 1}
    assert result_cache.get_cached_value_or_set("key", generate) == {"value": 1}
    assert len(calls) == 1


def test_cache_entries_follow_the_solver_tolerances(monkeypatch):
    original = solver_config.residual_tolerance
    result_cache.set_cached_value("preset:uipm", {"geometric_lambda": 0.25})
    monkeypatch.setattr(solver_config, "residual_tolerance", 1e-9)
    assert result_cache.get_cached_value("preset:uipm") is None
    monkeypatch.setattr(solver_config, "residual_tolerance", original)
    assert result_cache.get_cached_value("preset:uipm") == {"geometric_lambda": 0.25}


def test_corrupt_cache_file(tmp_path, monkeypatch):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    monkeypatch.setenv("BMT_CACHE_FILE", str(path))
    assert result_cache.get_cached_value("anything") is None
    with pytest.raises(CacheFileError):
        result_cache.set_cached_value("anything", 1)


# --- reports -----------------------------------------------------------------------


def test_json_reports_are_canonical():
    a = {"b": 1, "a": {"y": 2, "x": 3}}
    b = {"a": {"x": 3, "y": 2}, "b": 1}
    assert to_json(a) == to_json(b)
    assert to_json(a).endswith("\n")
    assert list(json.loads(to_json(a))) == ["a", "b"]


def test_json_reports_convert_values():
    report = json.loads(to_json({
        "inf": float("inf"),
        "nested": [float("nan"), 1.5],
        "fraction": Fraction(1, 3),
        "array": np.arange(3),
        "number": np.float64(0.25),
        "count": np.int64(7),
        "code": b"\x01\xff",
        "labels": frozenset({3, 1}),
    }))
    assert report["inf"] == "inf"
    assert report["nested"] == ["nan", 1.5]
    assert report["fraction"] == "1/3"
    assert report["array"] == [0, 1, 2]
    assert report["number"] == 0.25 and report["count"] == 7
    assert report["code"] == "01ff"
    assert report["labels"] == [1, 3]


def test_json_reports_reject_unknown_types():
    with pytest.raises(TypeError):
        to_json({"value": object()})


def test_csv_of_rows():
    text = to_csv({"command": "convergence", "rows": [{"size": 10, "tv": 0.5}, {"size": 20, "tv": 0.25,
                                                                               "extra": {"a": 1}}]})
    lines = text.splitlines()
    assert lines[0] == "extra.a,size,tv"
    assert lines[1] == ",10,0.5"
    assert lines[2] == "1,20,0.25"


def test_csv_without_rows():
    lines = to_csv({"command": "analyze", "solution": {"critical": True, "Zplus": 2.0}}).splitlines()
    assert lines == ["key,value", "command,analyze", "solution.Zplus,2.0", "solution.critical,True"]


def test_render_and_write(tmp_path):
    with pytest.raises(ValueError):
        render({}, "xml")
    path = write_report({"command": "period"}, str(tmp_path / "out.json"), "json")
    assert json.loads(open(path).read()) == {"command": "period"}


def test_default_run_name():
    name = default_run_name("sample map", "csv")
    assert name.startswith("sample-map-")
    assert name.endswith(".csv")
    assert len(name.split("-")) == 5
