import json
import subprocess
import sys

import pytest

from commapres.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, out


def reports(out):
    lines = [json.loads(line) for line in out.splitlines()]
    return lines[:-1], lines[-1]["summary"]


def test_reconstruct_example(capsys):
    status, out = run(capsys, "reconstruct", "--seed", "7", "--cases", "50", "--max-size", "4")
    reps, summary = reports(out)
    assert status == 0
    assert len(reps) == 50 and all(r["data"]["isIso"] for r in reps)
    assert summary["passed"] == 50 and summary["failed"] == 0


def test_lemma_example(capsys):
    status, out = run(capsys, "check-lemmas", "--mode", "filtration", "--cases", "20")
    reps, _ = reports(out)
    assert status == 0
    assert [r["check"] for r in reps] == ["lemma_G", "lemma_H"] * 20


def test_all_smoke_and_determinism(capsys):
    first = run(capsys, "all", "--seed", "0", "--cases", "5", "--max-size", "2")
    second = run(capsys, "all", "--seed", "0", "--cases", "5", "--max-size", "2")
    assert first[0] == 0 and first == second
    checks = {r["check"] for r in reports(first[1])[0]}
    assert checks == {"poset", "cofinality", "presentable", "lemma_G", "lemma_H", "reconstruct", "pushout_commute"}


def test_seed_changes_output(capsys):
    a = run(capsys, "check-commute", "--seed", "1", "--cases", "3")[1]
    b = run(capsys, "check-commute", "--seed", "2", "--cases", "3")[1]
    assert a != b


def test_budget_exceeded_gives_partial_report(capsys):
    status, out = run(capsys, "check-posets", "--cases", "3", "--budget", "1")
    reps, summary = reports(out)
    assert status == 3
    assert summary["budgetExceeded"]["budget"] == 1


def test_usage_errors_exit_2(capsys):
    for argv in (["frobnicate"], ["reconstruct", "--mode", "sideways"], ["reconstruct", "--cases", "-1"], []):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_text_format_and_out_file(tmp_path, capsys):
    path = tmp_path / "r.txt"
    status = main(["check-commute", "--cases", "2", "--format", "text", "--out", str(path)])
    text = path.read_text()
    assert status == 0
    assert text.splitlines()[0].startswith("PASS pushout_commute")
    assert text.splitlines()[-1] == "2 passed, 0 failed"
    assert capsys.readouterr().out == ""


def test_gen_emits_fixtures(capsys):
    status, out = run(capsys, "gen", "--cases", "3")
    fixtures = [json.loads(line) for line in out.splitlines()]
    assert status == 0 and len(fixtures) == 3
    assert set(fixtures[0]) == {"schemaVersion", "case", "target", "witness"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "commapres", "check-commute", "--cases", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout.splitlines()[-1])["summary"]["passed"] == 1


def test_failures_exit_1(capsys, monkeypatch):
    from commapres import cli
    from commapres.verify import Report

    def failing(args):
        rep = Report("demo", "case=0")
        rep.details.append("broken")
        yield rep

    monkeypatch.setitem(cli.SUITES, "check-commute", [failing])
    status, out = run(capsys, "check-commute")
    assert status == 1
    assert reports(out)[1]["failed"] == 1
