"""Tests for problem files and the demo runner."""

import json

import polars as pl
import pytest

from noether_kit.demo import SUMMARY_SCHEMA, corpus_paths, run_problem, theorem4_violations
from noether_kit.errors import IdentityViolationError, ProblemFileError
from noether_kit.problem import load_problem, open_problem


def write(directory, payload, name="problem"):
    path = directory / f"{name}.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


@pytest.fixture
def payload():
    return {
        "name": "space",
        "n": 1,
        "interval": [0, 1],
        "lagrangian": "v1^2/2",
        "family": {"T": "t", "X": ["x1 + s"]},
        "boundary": {"alpha": [0], "beta": [2]},
        "trajectories": {"line": {"breakpoints": [0, 1], "segments": [["2*t"]]}},
        "config": {"seed": 4, "samples": 9},
        "expect": {"invariance": "invariant", "noether": "v1", "trajectories": {"line": {"conserved": True}}},
    }


class TestLoadProblem:
    """Test load_problem() and open_problem()."""

    def test_loads(self, tmp_path, payload):
        spec = load_problem(write(tmp_path, payload))
        assert spec.name == "space"
        assert spec.family.gauge == "0"
        assert spec.trajectories["line"].breakpoints == [0.0, 1.0]

    def test_expression_breakpoints(self, tmp_path, payload):
        payload["trajectories"]["tent"] = {"breakpoints": [0, "1/2", 1], "segments": [["4*t"], ["2*t + 1"]]}
        problem = open_problem(write(tmp_path, payload))
        assert problem.trajectory("tent").breakpoints == (0.0, 0.5, 1.0)

    def test_file_config_and_flags_layer(self, tmp_path, payload):
        path = write(tmp_path, payload)
        assert open_problem(path).config.seed == 4
        assert open_problem(path).config.samples == 9
        overridden = open_problem(path, {"seed": 8, "tol": None})
        assert overridden.config.seed == 8
        assert overridden.config.samples == 9
        assert overridden.config.tol == 1e-6

    def test_trajectories_are_cached(self, tmp_path, payload):
        problem = open_problem(write(tmp_path, payload))
        assert problem.trajectory("line") is problem.trajectory("line")
        assert problem.boundary == ([0.0], [2.0])

    @pytest.mark.parametrize(
        "change",
        [
            {"interval": [1, 0]},
            {"n": 0},
            {"family": {"T": "t", "X": ["x1", "x1"]}},
            {"boundary": {"alpha": [0, 1], "beta": [0]}},
            {"trajectories": {"line": {"breakpoints": [0, 1], "segments": [["t"], ["t"]]}}},
            {"expect": {"trajectories": {"spiral": {"conserved": True}}}},
            {"config": {"samples": 1}},
            {"colour": "blue"},
        ],
    )
    def test_schema_errors(self, tmp_path, payload, change):
        payload.update(change)
        with pytest.raises(ProblemFileError):
            load_problem(write(tmp_path, payload))

    def test_family_errors_keep_their_type(self, tmp_path, payload):
        payload["family"] = {"T": "t", "X": ["x1 + 1"]}
        with pytest.raises(IdentityViolationError):
            open_problem(write(tmp_path, payload))

    def test_unknown_trajectory(self, tmp_path, payload):
        with pytest.raises(ProblemFileError):
            open_problem(write(tmp_path, payload)).trajectory("spiral")


class TestDemo:
    """Test run_problem(), corpus_paths() and theorem4_violations()."""

    def test_corpus_paths(self):
        names = [path.stem for path in corpus_paths()]
        assert "counterexample" in names
        assert names == sorted(names)
        assert [path.stem for path in corpus_paths(name_filter="boost")] == ["free_particle_boost"]

    def test_run_problem(self, tmp_path, payload):
        result = run_problem(open_problem(write(tmp_path, payload)))
        assert result.ok
        assert dict(result.summary.schema) == SUMMARY_SCHEMA
        assert result.summary.row(0, named=True)["conserved"] is True

    def test_run_problem_reports_mismatches(self, tmp_path, payload):
        payload["expect"]["trajectories"]["line"] = {"conserved": False, "weierstrass": "fail"}
        result = run_problem(open_problem(write(tmp_path, payload)))
        assert not result.ok
        assert len(result.mismatches) == 2

    def test_theorem4_violations(self):
        rows = [
            ("p", "a", "invariant", "pass", "pass", "pass", True, True, True, 0.0, 1.0, 0),
            ("p", "b", "invariant", "pass", "pass", "pass", True, True, False, 0.5, 1.0, 1),
            ("p", "c", "not_invariant", "pass", "pass", "pass", True, True, False, 0.5, 1.0, 0),
            ("p", "d", "invariant", "pass", "fail", "fail", False, False, False, 1.0, 1.0, 0),
        ]
        summary = pl.DataFrame(rows, schema=SUMMARY_SCHEMA, orient="row")
        assert theorem4_violations(summary)["trajectory"].to_list() == ["b"]
