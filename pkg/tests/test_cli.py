"""CLI front end: parsing, artifact emission, round-trips, exit codes."""

import json

import pytest

from qoresolve import cli, driver
from qoresolve.cli import (
    NormalizationRejected,
    ParseError,
    RunSpec,
    emit_outputs,
    parse_input,
    state_from_node,
    tree_dot,
    tree_json,
)
from tests.conftest import GOLDEN_CHARTS


class TestParseInput:
    def test_pairs_document(self):
        spec = parse_input({"m": 3, "pairs": [["2/3", "4/3"]]})
        assert spec.state.m == 3
        assert str(spec.state.pairs) == "[(2/3,4/3)]"

    def test_binomial_document(self):
        spec = parse_input({"binomial": {"m": 3, "a": 2, "b": 4}})
        assert spec.state.m == 3
        assert str(spec.state.pairs) == "[(2/3,4/3)]"

    def test_degree_defaults_to_denominator(self):
        spec = parse_input({"pairs": [["2/3", "4/3"]]})
        assert spec.state.m == 3

    def test_normalization_warning_path(self, capsys):
        spec = parse_input({"m": 3, "pairs": [["1/3", "2/3"]]})
        assert str(spec.state.pairs) == "[(2/3,1/3)]"
        assert "normalized" in capsys.readouterr().err

    def test_both_inputs_rejected(self):
        with pytest.raises(ParseError):
            parse_input({"pairs": [["1/2", "1/2"]], "binomial": {"m": 2, "a": 1, "b": 1}})

    def test_bad_fraction_rejected(self):
        with pytest.raises(ParseError):
            parse_input({"m": 2, "pairs": [["1/x", "1/2"]]})

    def test_unsupported_inversion_rejected(self):
        with pytest.raises(NormalizationRejected):
            parse_input({"m": 8, "pairs": [["0", "1/2"], ["1/2", "3/4"]]})


class TestEmitOutputs:
    def test_trace_contains_paper_invariant(self, golden_tree):
        spec = RunSpec(mode="resolve", outputs=("trace",))
        spec.path = GOLDEN_CHARTS
        art = emit_outputs(golden_tree, spec)
        assert "inv=(3,0;4/3,1;1,0;inf)" in art["trace"]

    def test_json_single_node_for_smooth_input(self):
        tree = driver.resolve(driver.initial_state(1, cli.PairList(())))
        doc = json.loads(tree_json(tree))
        assert doc["nodes"] == 1
        assert doc["root"]["resolved"] is True
        assert doc["root"]["children"] == {}

    def test_dot_well_formed(self, golden_tree):
        text = tree_dot(golden_tree)
        assert text.startswith("digraph resolution {")
        assert text.rstrip().endswith("}")
        assert '[label="origin/x"]' in text

    def test_paper_path_has_thirteen_nodes(self, golden_tree):
        doc = json.loads(tree_json(golden_tree))
        node, count = doc["root"], 1
        for chart in GOLDEN_CHARTS:
            node = node["children"][chart]
            count += 1
        assert count == 13 and node["resolved"]

    def test_files_written(self, golden_tree, tmp_path):
        spec = RunSpec(mode="resolve", outputs=("trace", "json", "dot"))
        spec.out_dir = tmp_path
        emit_outputs(golden_tree, spec)
        for name in ("trace.txt", "tree.json", "graph.dot"):
            assert (tmp_path / name).exists()


class TestRoundTrip:
    def test_json_reingestion_reproduces_subtrees(self, golden_tree):
        doc = json.loads(tree_json(golden_tree))
        node_doc = doc["root"]["children"]["x"]["children"]["y"]
        rebuilt = state_from_node(node_doc)
        subtree = driver.resolve(rebuilt)
        assert json.loads(cli.tree_json(subtree))["root"] == node_doc

    def test_byte_determinism_across_runs_and_workers(self):
        def run(workers):
            spec = parse_input({"binomial": {"m": 3, "a": 2, "b": 4}})
            spec.outputs = ("trace", "json", "dot")
            tree = driver.resolve(spec.state, workers=workers)
            return emit_outputs(tree, spec)

        first = run(1)
        second = run(1)
        third = run(4)
        assert first == second == third


class TestMain:
    def test_resolve_binomial_to_stdout(self, capsys):
        rc = cli.main(["--binomial", "3,2,4", "--emit", "trace"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "Year 0: inv=(3,0;2,0;1,0;inf) center=origin" in out

    def test_pairs_flag(self, capsys):
        rc = cli.main(["--pairs", "2/3,4/3", "--emit", "trace,dot"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "digraph resolution" in out

    def test_validate_mode(self, capsys):
        rc = cli.main(["--binomial", "2,1,3", "--validate"])
        assert rc == 0
        assert "OK" in capsys.readouterr().out

    def test_input_file(self, tmp_path, capsys):
        doc = tmp_path / "run.json"
        doc.write_text(json.dumps({"binomial": {"m": 3, "a": 2, "b": 4}}))
        rc = cli.main(["--input", str(doc), "--emit", "json", "--out", str(tmp_path)])
        assert rc == 0
        assert (tmp_path / "tree.json").exists()

    def test_bad_input_exit_code(self, capsys):
        assert cli.main(["--binomial", "nope"]) == 2
        assert cli.main([]) == 2

    def test_step_cap_exit_code(self, capsys):
        assert cli.main(["--binomial", "3,2,4", "--step-cap", "4"]) == 3

    def test_validate_requires_binomial(self, capsys):
        assert cli.main(["--pairs", "2/3,4/3", "--validate"]) == 2
