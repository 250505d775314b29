import copy

import pytest
import yaml

from varquant import (
    CheckResult,
    Report,
    ScenarioError,
    list_corpus,
    load_corpus_scenario,
    parse_report,
    parse_scenario,
    run_checks,
    serialize_report,
    serialize_scenario,
    validate_document,
)

MINIMAL = """\
version: 1
name: tiny
phi_space:
  id: phi
  points: [a, b]
variables:
- id: v
  values: ['0', '1']
  embedding: bits
groups:
- id: m
  space: phi
  generators:
  - [1, 0]
embeddings:
- id: bits
  mapping: {'0': 0.0, '1': 1.0}
checks: [group-axioms]
"""


def test_corpus_is_large_enough_and_loads():
    names = list_corpus()
    assert len(names) >= 12
    for name in names:
        scenario = load_corpus_scenario(name)
        assert scenario.name == name


@pytest.mark.parametrize("name", list_corpus())
def test_corpus_round_trips_identically(name):
    scenario = load_corpus_scenario(name)
    text = serialize_scenario(scenario)
    again = parse_scenario(text, source=name)
    assert again.document == scenario.document
    assert serialize_scenario(again) == text


@pytest.mark.parametrize("name", list_corpus())
def test_serialization_reproduces_the_bundled_bytes(name):
    from varquant.scenario import corpus_dir

    raw = (corpus_dir() / f"{name}.yaml").read_text(encoding="utf-8")
    assert serialize_scenario(load_corpus_scenario(name)) == raw


def test_minimal_scenario_parses_and_resolves():
    scenario = parse_scenario(MINIMAL)
    assert scenario.name == "tiny"
    assert scenario.phi_space.points == ("a", "b")
    assert scenario.phi_action is not None
    assert scenario.phi_action.order == 2
    assert scenario.checks == ("group-axioms",)
    assert scenario.embedding_for("v") is not None


def test_yaml_errors_are_wrapped():
    with pytest.raises(ScenarioError) as err:
        parse_scenario("{{{:::", source="inline")
    assert err.value.issues[0][0] == "$"
    assert "inline" in str(err.value)


def bad_doc(**overrides):
    doc = yaml.safe_load(MINIMAL)
    doc.update(overrides)
    return doc


def issue_paths(doc):
    return [path for path, _ in validate_document(doc)]


def test_validation_reports_path_qualified_issues():
    assert validate_document(yaml.safe_load(MINIMAL)) == []

    paths = issue_paths(bad_doc(checks=["not-a-real-check"]))
    assert any(p.startswith("checks[0]") for p in paths)

    doc = bad_doc()
    doc["variables"][0]["values"] = ["0"]
    assert any(p.startswith("variables[0]") for p in issue_paths(doc))

    doc = bad_doc()
    doc["variables"][0]["embedding"] = "missing"
    assert any(p.startswith("variables[0].embedding") for p in issue_paths(doc))

    doc = bad_doc()
    doc["groups"][0]["generators"] = [[1, 2, 0]]
    assert any(p.startswith("groups[0]") for p in issue_paths(doc))

    doc = bad_doc()
    doc["variables"].append(dict(doc["variables"][0]))
    assert any("duplicate" in m for _, m in validate_document(doc))

    doc = bad_doc()
    doc["embeddings"][0]["mapping"] = {"0": 0.0}
    assert issue_paths(doc)

    doc = bad_doc()
    doc["variables"][0]["surprise"] = 1
    assert "variables[0].surprise" in issue_paths(doc)

    assert issue_paths(None)
    assert issue_paths({"version": 1})


def test_parse_rejects_invalid_documents_with_all_issues():
    doc = bad_doc(checks=["not-a-real-check", "also-bad"])
    with pytest.raises(ScenarioError) as err:
        parse_scenario(yaml.safe_dump(doc))
    assert len(err.value.issues) == 2


def test_unknown_corpus_name_lists_the_alternatives():
    with pytest.raises(ScenarioError) as err:
        load_corpus_scenario("does-not-exist")
    assert "scenario-a" in str(err.value)


def test_reports_round_trip_byte_identically():
    scenario = load_corpus_scenario("scenario-rep-z4")
    report = run_checks(scenario)
    machine = serialize_report(report)
    parsed = parse_report(machine)
    assert serialize_report(parsed) == machine
    assert parsed.scenario == report.scenario
    assert parsed.seed == report.seed
    assert [r.name for r in parsed.results] == [r.name for r in report.results]


def test_runs_are_deterministic_for_a_fixed_seed():
    scenario = load_corpus_scenario("scenario-born")
    first = serialize_report(run_checks(scenario, seed=7))
    second = serialize_report(run_checks(scenario, seed=7))
    assert first == second


def test_human_format_summarizes_statuses():
    scenario = load_corpus_scenario("scenario-rep-z4")
    report = run_checks(scenario)
    text = serialize_report(report, fmt="human")
    assert text.startswith("scenario scenario-rep-z4")
    assert "PASS" in text
    assert "passed" in text.splitlines()[-1]
    with pytest.raises(ValueError):
        serialize_report(report, fmt="toml")


def test_check_results_validate_their_fields():
    with pytest.raises(Exception):
        CheckResult(name="x", status="maybe", metrics={}, witnesses=None, message="")
    with pytest.raises(Exception):
        CheckResult(name="x", status="pass", metrics={"v": float("nan")},
                    witnesses=None, message="")
    ok = CheckResult(name="x", status="pass", metrics={"v": 1.0},
                     witnesses=("w",), message="")
    report = Report(scenario="s", seed=0, results=(ok,), version=1)
    assert report.counts == {"pass": 1, "fail": 0, "error": 0, "total": 1}
    assert report.all_passed


def test_malformed_report_text_raises():
    with pytest.raises(Exception):
        parse_report("not json at all")
    with pytest.raises(Exception):
        parse_report("{}")


def test_empty_check_list_gives_an_empty_report():
    scenario = load_corpus_scenario("scenario-rep-z4")
    report = run_checks(scenario, names=())
    assert report.results == ()
    assert report.counts["total"] == 0


def test_document_copies_do_not_alias_the_scenario():
    scenario = load_corpus_scenario("scenario-a")
    doc = copy.deepcopy(scenario.document)
    assert doc == scenario.document
