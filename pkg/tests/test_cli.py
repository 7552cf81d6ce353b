import subprocess
import sys

import pytest

from adjnd import cli
from adjnd.machine import MonitorReport

from adjgen import CORPUS, CORPUS_REC, corpus_files


def call(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def keys(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line and " " not in line.split("=")[0])


@pytest.fixture
def write(tmp_path):
    def go(text, name="p.adj"):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p
    return go


def test_check_well_typed_lnl_file(capsys):
    code, out, _ = call(capsys, "check", CORPUS / "35_lnl_dup_via_down.adj")
    assert code == 0 and out.startswith("check=ok")


def test_check_reports_unused_linear_variable(capsys, write):
    p = write("prop A @ L\ndef f [] : A -o 1 = \\x. ()\n")
    code, _, err = call(capsys, "check", "--preset", "linear", p)
    assert code == 1 and "UnusedLinearVariable" in err


def test_check_syntax_error_is_a_user_error(capsys, write):
    code, _, err = call(capsys, "check", write("def f [] : = ()\n"))
    assert code == 1 and err.startswith("error:")


def test_missing_file(capsys, tmp_path):
    code, _, err = call(capsys, "check", tmp_path / "nope.adj")
    assert code == 1 and "error" in err


@pytest.mark.parametrize("path", corpus_files() + corpus_files(rec=True), ids=lambda p: p.name)
def test_oracle_agrees_on_the_corpus(capsys, path):
    code, out, _ = call(capsys, "check", "--oracle", "--emit-used", path)
    assert code == 0 and "oracle=agree" in out and "used." in out


def test_run_linear_identity(capsys):
    code, out, _ = call(capsys, "run", "--monitors", "g", CORPUS / "01_lin_identity.adj")
    k = keys(out)
    assert code == 0 and k["outcome"] == "value" and k["monitor.garbage"] == "pass"


@pytest.mark.parametrize("strategy", ["cbv", "cbneed"])
def test_run_strict_program(capsys, strategy):
    code, out, _ = call(capsys, "run", "--strategy", strategy, "--monitors", "s,d", CORPUS / "21_str_dup.adj")
    k = keys(out)
    assert code == 0 and k["monitor.strictness"] == "pass" and k["monitor.deadcode"] == "pass"


def test_run_out_of_budget(capsys):
    code, out, _ = call(capsys, "run", "--budget", "1", CORPUS / "49_lin_beta_chain.adj")
    assert code == 1 and keys(out)["outcome"] == "budget"


def test_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ADJND_BUDGET", "2")
    code, out, _ = call(capsys, "run", CORPUS / "49_lin_beta_chain.adj")
    assert code == 1 and keys(out)["outcome"] == "budget"


def test_run_needs_a_main(capsys, write):
    code, _, err = call(capsys, "run", write("mode L\ndef f [] : 1 = ()\n"))
    assert code == 1 and "main" in err


def test_unknown_monitor(capsys):
    code, _, err = call(capsys, "run", "--monitors", "q", CORPUS / "01_lin_identity.adj")
    assert code == 1 and "monitor" in err


def test_failed_theorem_monitor_is_internal(capsys, monkeypatch):
    import adjnd.machine as machine
    monkeypatch.setattr(machine, "monitor_garbage", lambda env, t: MonitorReport("garbage", False, ["x"]))
    code, out, _ = call(capsys, "run", "--monitors", "g", CORPUS / "01_lin_identity.adj")
    assert code == 2 and "monitor.garbage=fail" in out


def test_trace_lines(capsys):
    code, out, _ = call(capsys, "run", "--trace", CORPUS / "01_lin_identity.adj")
    first = out.splitlines()[0].split()
    assert code == 0 and first[:2] == ["0", "▷"]


def test_run_reports_are_byte_stable(capsys):
    args = ("run", "--strategy", "cbneed", "--monitors", "g,s,d", CORPUS_REC / "r08_lnl_count.adj")
    assert call(capsys, *args) == call(capsys, *args)


def test_normalize_beta_redex(capsys):
    code, out, _ = call(capsys, "normalize", "--emit-derivation", CORPUS / "49_lin_beta_chain.adj")
    k = keys(out)
    assert code == 0 and k["verification"] == "yes"
    assert ":" not in k["normalized"] and "\\" not in k["normalized"]


def test_normalize_already_normal(capsys):
    code, out, _ = call(capsys, "normalize", CORPUS / "01_lin_identity.adj")
    assert code == 0 and keys(out)["verification"] == "yes"


def test_normalize_recursive_program_is_budgeted(capsys):
    code, _, err = call(capsys, "normalize", CORPUS_REC / "r01_lin_double.adj")
    assert code == 1 and "BudgetExceeded" in err


def test_erase(capsys):
    code, out, _ = call(capsys, "erase", CORPUS / "38_lnl_erasable_payload.adj")
    k = keys(out)
    assert code == 0 and k["erasure.agree"] == "yes" and int(k["erasure.erased_subterms"]) > 0


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "adjnd", "check", str(CORPUS / "01_lin_identity.adj")],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "check=ok" in r.stdout
