import json

from irplus.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, (json.loads(out) if out.strip() else None)


def test_chain_of_the_sigma_universe(capsys):
    status, doc = run(capsys, "chain", "sigma-universe", "--stages", "3")
    assert status == 0
    assert doc["chain"]["cardinalities"] == [1, 2, 21]
    assert all(s["split"] for s in doc["chain"]["stages"])


def test_chain_of_a_constant_code(capsys):
    status, doc = run(capsys, "chain", "iota")
    assert status == 0 and doc["chain"]["fixed"] == 1


def test_chain_of_the_compiled_lam(capsys):
    status, doc = run(capsys, "chain", "lam-code", "--stages", "3")
    assert doc["chain"]["cardinalities"] == [1, 4, 26]


def test_nest_agreement_table(capsys):
    status, doc = run(capsys, "nest", "lam", "--depth", "2", "--xs", "1,2")
    rows = {(r["depth"], r["X"]): (r["chain"], r["direct"]) for r in doc["nest"]["rows"]}
    assert status == 0
    assert rows[2, 1] == (4, 4) and rows[2, 2] == (9, 9)
    assert rows[0, 1] == (0, 0) and rows[0, 2] == (0, 0)


def test_constant_nest_counts_are_constant(tmp_path, capsys):
    src = tmp_path / "k.irp"
    src.write_text("(nest maybe (k m))\n", encoding="utf-8")
    status, doc = run(capsys, "nest", "maybe", "--file", str(src), "--depth", "3", "--xs", "0,1,2")
    assert status == 0
    for r in doc["nest"]["rows"]:
        assert r["chain"] == (0 if r["depth"] == 0 else r["X"] + 1)


def test_check_on_an_empty_file(tmp_path, capsys):
    src = tmp_path / "empty.irp"
    src.write_text("", encoding="utf-8")
    status, doc = run(capsys, "check", str(src))
    assert status == 0 and doc["suites"] == []


def test_check_with_mutation_reports_a_witness(tmp_path, capsys):
    src = tmp_path / "u.irp"
    src.write_text("(code sigma-universe (ground 2))\n", encoding="utf-8")
    status, doc = run(capsys, "check", str(src), "--mutate")
    assert status == 1
    failing = [s for s in doc["suites"] if s["failures"]]
    assert failing and set(failing[0]["failures"][0]) == {"input", "expected", "got"}


def test_check_a_small_file_passes(tmp_path, capsys):
    src = tmp_path / "u.irp"
    src.write_text("(code sigma-universe (ground 2))\n(nest sq (times id id))\n", encoding="utf-8")
    status, doc = run(capsys, "check", str(src))
    assert status == 0
    names = [s["name"] for s in doc["suites"]]
    assert list(doc) == ["version", "suites"]
    assert "container-combinators" in names and "functor-laws:sigma-universe" in names


def test_parse_error_exits_with_usage_status(tmp_path, capsys):
    src = tmp_path / "bad.irp"
    src.write_text("(code x (iota 1)", encoding="utf-8")
    assert main(["check", str(src)]) == 2
    assert "1:1" in capsys.readouterr().err


def test_budget_exit_status(capsys):
    status, doc = run(capsys, "chain", "sigma-universe", "--stages", "5", "--budget-chain", "50")
    assert status == 3 and doc["stage"] is not None


def test_folds(capsys):
    status, doc = run(capsys, "fold", "nf", "--depth", "2")
    assert status == 0 and doc["fold"]["elements"] > 0
    status, doc = run(capsys, "fold", "ground-map", "--map", "0,1,1", "--depth", "2")
    assert status == 0


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["chain"]) == 2
    capsys.readouterr()


def test_default_corpus_check_passes(capsys):
    status, doc = run(capsys, "check")
    assert status == 0
    assert all(not s["failures"] for s in doc["suites"])
