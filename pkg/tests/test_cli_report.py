import json

import pytest

from squarebraid.cli import main
from squarebraid.report import report_all


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_homology_json(capsys):
    code, out = run(capsys, "homology", "--p", "3", "--q", "3", "--format", "json")
    d = json.loads(out.out)
    assert code == 0 and d["betti"] == [1, 5, 0] and d["pass"]


def test_complex_text(capsys):
    code, out = run(capsys, "complex", "--p", "3", "--q", "3")
    assert code == 0 and "[36, 84, 44]" in out.out


def test_morse_comb_fails_loudly(capsys):
    code, out = run(capsys, "morse", "--p", "3", "--q", "3", "--tree", "comb:ll")
    assert code == 1 and "FAIL" in out.out


def test_morse_search(capsys):
    code, out = run(capsys, "morse", "--p", "4", "--q", "3", "--search-tree", "--format", "json")
    d = json.loads(out.out)
    assert code == 0 and d["selected"] == ["snake", "ll"]
    assert not any(a["match"] for a in d["attempts"][:-1])


def test_present_and_replay(capsys, tmp_path):
    log = tmp_path / "log.txt"
    code, out = run(capsys, "present", "--p", "4", "--q", "4", "--stage", "final", "--log", str(log))
    assert code == 0 and out.out.startswith("gens: ")
    assert len(out.out.splitlines()) == 1 + 17
    code, out = run(capsys, "replay", "--log", str(log))
    assert code == 0 and "OK" in out.out
    bad = tmp_path / "bad.txt"
    lines = log.read_text().splitlines()
    k = next(i for i, line in enumerate(lines) if line.startswith("MOVE eliminate"))
    bad.write_text("\n".join(lines[:k] + lines[k + 1:]) + "\n")
    code, out = run(capsys, "replay", "--log", str(bad))
    assert code == 1


@pytest.mark.parametrize("stage", ["raw", "s1", "s2", "s3", "q3", "abcd"])
def test_present_stages(capsys, stage):
    code, out = run(capsys, "present", "--p", "5", "--q", "3", "--stage", stage)
    assert code == 0 and out.out.startswith("gens: ")


def test_hnn_verify_and_export(capsys):
    code, out = run(capsys, "hnn", "--p", "6", "verify", "--format", "json")
    d = json.loads(out.out)
    assert code == 0 and d["pass"] and set(d["verdicts"]) == {
        "theta_well_defined", "relations_I_VIII", "section", "lemma_vii_viii", "abelianization", "phi_graph_iso"}
    code, out = run(capsys, "hnn", "--p", "6", "export", "--graph", "X")
    assert code == 0 and out.out.split() == ["x_1", "xp_1"]


def test_domain_error_exit_code(capsys):
    code, out = run(capsys, "present", "--p", "2", "--q", "3")
    assert code == 2 and "error" in out.err


def test_report_exit_and_json(capsys, tmp_path):
    dest = tmp_path / "r.json"
    code, _ = run(capsys, "report", "--p", "4", "--q", "3", "--output", str(dest))
    d = json.loads(dest.read_text())
    assert code == 0 and d["pass"] and "timings" not in d
    assert all(c["anchor"] for c in d["checks"])


def test_report_embeds_failures():
    r = report_all(5, 3)
    assert r.passed
    names = {c.name for c in r.checks}
    assert {"betti", "critical_census", "family_census", "hnn_section"} <= names


def test_threads_env(monkeypatch):
    from squarebraid.errors import DomainError
    from squarebraid.report import worker_count

    monkeypatch.setenv("SQUAREBRAID_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("SQUAREBRAID_THREADS", "x")
    with pytest.raises(DomainError):
        worker_count()
