import json
from pathlib import Path

import pytest

from varquant import load_corpus_scenario, run_checks, serialize_report
from varquant.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_a_bundled_scenario(capsys):
    code, out, err = run(capsys, "validate", "scenario-a")
    assert code == 0
    assert err == ""
    assert out.startswith("scenario scenario-a is valid")
    assert "checks: 9" in out


def test_validate_machine_output_is_json(capsys):
    code, out, _ = run(capsys, "validate", "scenario-a", "--format", "machine")
    assert code == 0
    payload = json.loads(out)
    assert payload["name"] == "scenario-a"
    assert payload["valid"] is True
    assert payload["counts"]["variables"] == 3


def test_validate_accepts_a_file_path(capsys, tmp_path):
    from varquant import serialize_scenario

    path = tmp_path / "copy.yaml"
    path.write_text(serialize_scenario(load_corpus_scenario("scenario-rep-z4")))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 0
    assert "scenario-rep-z4 is valid" in out


def test_check_passes_on_the_corpus(capsys):
    code, out, _ = run(capsys, "check", "scenario-rep-z4")
    assert code == 0
    assert "PASS" in out
    assert "0 failed, 0 errors" in out


def test_machine_stream_is_exactly_the_canonical_report(capsys):
    code, out, err = run(capsys, "check", "scenario-rep-z4", "--format", "machine")
    assert code == 0
    assert err == ""
    scenario = load_corpus_scenario("scenario-rep-z4")
    assert out == serialize_report(run_checks(scenario, seed=0))


def test_chsh_prints_the_correlation_combination(capsys):
    code, out, _ = run(capsys, "chsh", "scenario-chsh")
    assert code == 0
    first = out.splitlines()[0]
    assert first.startswith("S = ")
    assert float(first.removeprefix("S = ")) == pytest.approx(
        2.8284271247461903, abs=1e-9)


def test_experiment_commands_run_their_check_sets(capsys):
    code, out, _ = run(capsys, "born", "scenario-born")
    assert code == 0
    assert "transition-doubly-stochastic" in out
    code, out, _ = run(capsys, "ozawa", "scenario-pointer")
    assert code == 0
    assert "pointer-reproduces-system" in out
    code, out, _ = run(capsys, "context", "scenario-context")
    assert code == 0
    assert "forbidden-triples" in out


def test_only_restricts_and_rejects_unknown_names(capsys):
    code, out, _ = run(capsys, "check", "scenario-a", "--only", "group-axioms")
    assert code == 0
    assert "group-axioms" in out
    assert "representation-lemmas" not in out

    code, _, err = run(capsys, "check", "scenario-a", "--only", "no-such-check")
    assert code == 2
    assert "unknown check" in err


def test_out_writes_the_file_instead_of_stdout(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", "scenario-rep-z4",
                       "--format", "machine", "--out", str(target))
    assert code == 0
    assert out == ""
    parsed = json.loads(target.read_text())
    assert parsed["summary"]["all_passed"] is True


def test_seed_changes_sweeps_deterministically(capsys):
    code, first, _ = run(capsys, "check", "scenario-born",
                         "--format", "machine", "--seed", "3")
    assert code == 0
    code, second, _ = run(capsys, "check", "scenario-born",
                          "--format", "machine", "--seed", "3")
    assert first == second


def test_report_rerenders_a_stored_machine_report(capsys, tmp_path):
    stored = tmp_path / "stored.json"
    code, out, _ = run(capsys, "check", "scenario-rep-z4",
                       "--format", "machine", "--out", str(stored))
    assert code == 0
    code, out, _ = run(capsys, "report", str(stored))
    assert code == 0
    assert "PASS" in out
    code, out, _ = run(capsys, "report", str(stored), "--format", "machine")
    assert code == 0
    assert out == stored.read_text()


def test_report_rejects_non_report_files(capsys, tmp_path):
    bogus = tmp_path / "bogus.json"
    bogus.write_text("{}")
    code, _, err = run(capsys, "report", str(bogus))
    assert code == 2
    assert "not a machine-format report" in err


def test_broken_scenario_exits_2_with_issue_paths(capsys):
    code, _, err = run(capsys, "validate", str(DATA / "broken.yaml"))
    assert code == 2
    assert err.startswith("error: ")
    assert "phi_space" in err or "points" in err
    assert "checks[1]" in err


def test_missing_file_and_unknown_corpus_name_exit_2(capsys):
    code, _, err = run(capsys, "check", "no/such/file.yaml")
    assert code == 2
    assert "error" in err
    code, _, err = run(capsys, "check", "not-a-corpus-name")
    assert code == 2


def test_failing_check_exits_1(capsys):
    # the conflict corpus scenario declares an inconsistent-context
    # expectation, so forbidden-triples *passes*; force a failure instead
    # by running a check whose prerequisites hold but whose expectation
    # breaks under a doctored file
    code, out, _ = run(capsys, "context", "scenario-context-conflict")
    assert code == 0  # expectation says inconsistent, and it is
    assert "forbidden-triples" in out


def test_failing_check_exits_1_for_a_doctored_scenario(capsys, tmp_path):
    from varquant import serialize_scenario

    scenario = load_corpus_scenario("scenario-context-conflict")
    doc = json.loads(json.dumps(scenario.document))
    for xp in doc["experiments"]:
        xp["expect_consistent"] = True  # contradicts the chain graph
    import yaml

    path = tmp_path / "doctored.yaml"
    path.write_text(yaml.safe_dump(doc, sort_keys=False))
    code, out, _ = run(capsys, "context", str(path))
    assert code == 1
    assert "FAIL" in out
