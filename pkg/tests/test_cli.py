import pytest

from pomp import corpus_path
from pomp.cli import main
from pomp.lint import lint_domain
from pomp.syntax import parse_domain, parse_plan

SWAP = [corpus_path("swap.pomp"), corpus_path("swap.prob")]
TABLES = [corpus_path("tables.pomp"), corpus_path("tables.prob")]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def swap_plan_file(tmp_path, rel):
    path = tmp_path / f"swap{rel}.plan"
    path.write_text(f"""(define (plan s) (:agents Agent1 Agent2)
      (:steps (A1 (a Agent1)) (A2 (b Agent2))) (:orderings ({rel} A1 A2)))""")
    return str(path)


def test_plan_text_output_parses(capsys):
    code, out, _ = run(capsys, "plan", *SWAP)
    assert code == 0
    assert "; shortest linearization: 1 tick(s)" in out
    assert len(parse_plan(out).actions()) == 2


def test_machine_output_is_byte_identical(capsys, monkeypatch):
    outs = [run(capsys, "plan", *SWAP, "--output", "machine", "--seed", "5")[1] for _ in range(2)]
    monkeypatch.setenv("POMP_SEED", "5")
    outs.append(run(capsys, "plan", *SWAP, "--output", "machine")[1])
    assert outs[0] == outs[1] == outs[2]
    assert "linearization" not in outs[0]


def test_step_limit_exit_code(capsys):
    assert run(capsys, "plan", *TABLES, "--max-steps", "0")[0] == 2


def test_unsolvable_exit_code(capsys, tmp_path):
    prob = tmp_path / "p.prob"
    prob.write_text("(define (problem e) (:agents Agent1) (:init) (:goal (q)))")
    assert run(capsys, "plan", SWAP[0], str(prob))[0] == 1


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "plan", str(tmp_path / "missing.pomp"), SWAP[1])[0] == 3
    bad = tmp_path / "bad.pomp"
    bad.write_text("(define (operator x) :parameters (?a)")
    code, _, err = run(capsys, "plan", str(bad), SWAP[1])
    assert code == 3 and "1:" in err


def test_validate(capsys, tmp_path):
    assert run(capsys, "validate", *SWAP, swap_plan_file(tmp_path, "="))[0] == 0
    code, out, _ = run(capsys, "validate", *SWAP, swap_plan_file(tmp_path, "<"))
    assert code == 1 and "FAIL" in out
    assert run(capsys, "validate", *SWAP, swap_plan_file(tmp_path, "<"), "--sampled", "4")[0] == 1


def test_linearize(capsys):
    code, out, _ = run(capsys, "linearize", corpus_path("fig5.plan"), "--shortest")
    assert code == 0 and out.startswith("# shortest: 3 tick(s)")
    code, out, _ = run(capsys, "linearize", corpus_path("fig5.plan"), "--enumerate", "3")
    assert code == 0 and "# linearization 1" in out


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", *SWAP, "--horizon", "1")
    assert code == 0
    code, out, _ = run(capsys, "oracle", *TABLES, "--horizon", "3")
    assert code == 1 and out.strip() == "none (horizon)"


def test_esa(capsys, tmp_path):
    out = tmp_path / "swap-esa.pomp"
    assert run(capsys, "esa", *SWAP, "--out", str(out))[0] == 0
    d = parse_domain(out.read_text())
    assert "a_Agent1+b_Agent2" in {s.name for s in d.schemata}


def test_lint(capsys, tmp_path):
    assert run(capsys, "lint", corpus_path("tables.pomp"))[0] == 0
    code, out, _ = run(capsys, "lint", corpus_path("fig7.pomp"))
    assert code == 1 and "tortable" in out
    toggle = tmp_path / "t.pomp"
    toggle.write_text("(define (operator set) :parameters (?a) :precondition () :effect (q))\n"
                      "(define (operator clear) :parameters (?a) :precondition () :effect (not (q)))")
    code, out, err = run(capsys, "lint", str(toggle), "--fix-nonconcurrent")
    assert code == 0 and "conflict" in err
    assert lint_domain(parse_domain(out)) == []


@pytest.mark.parametrize("args", [["--tsv"], ["--figure"]])
def test_report_files(capsys, tmp_path, args):
    path = tmp_path / ("out.tsv" if args == ["--tsv"] else "out.png")
    assert run(capsys, "plan", *SWAP, args[0], str(path))[0] == 0
    assert path.stat().st_size > 0
