import json

import pytest
from click.testing import CliRunner

from gapgreedy.cli import cli
from gapgreedy.verify import GEOMETRIC_TWO, OIKHBERG_TOY

PQ_TOY = json.dumps({"space": "pq_block", "params": {"p": 2, "q": 2, "epsilon": 0.5, "m": 2, "strict": False}})
L2 = json.dumps({"space": "lp", "params": {"p": 2}})
TOY52 = json.dumps({"space": "oikhberg", "params": OIKHBERG_TOY})


@pytest.fixture
def run():
    runner = CliRunner()
    return lambda *args: runner.invoke(cli, list(args))


def test_norm_examples(run):
    assert run("norm", PQ_TOY, "[[1, 1], [2, 1]]").output.strip() == "2"
    assert run("norm", L2, "[[1, 3], [2, 4]]").output.strip() == "5"


def test_norm_prints_fifteen_digits(run):
    assert run("norm", L2, "[[1, 1], [2, 1]]").output.strip() == f"{2 ** 0.5:.15g}"


def test_norm_bad_input(run):
    assert run("norm", L2, "[[1, 3], [2,").exit_code == 2
    assert run("norm", "{not json", "[[1, 1]]").exit_code == 2
    assert run("norm", json.dumps({"space": "hilbert"}), "[[1, 1]]").exit_code == 2
    assert run("norm", L2, "[[0, 1]]").exit_code == 2


def test_constant_superdemocracy_l2(run):
    res = run("constant", "superdemocracy", "--space", L2, "--N", "8", "--s", "4")
    assert res.exit_code == 0
    assert json.loads(res.output)["value"] == pytest.approx(1.0, rel=1e-12)


def test_constant_ucc_oikhberg_toy(run):
    res = run("constant", "ucc", "--space", TOY52, "--N", "8", "--s", "5")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["value"] > 1
    assert data["value"] == pytest.approx(1.0466351393921056, rel=1e-12)
    assert data["search_class"]["N"] == 8


def test_constant_ul_pair_and_gaps(run):
    res = run("constant", "ul", "--space", L2, "--gaps", json.dumps(GEOMETRIC_TWO), "--N", "4", "--s", "2")
    assert res.exit_code == 0
    assert [e["name"] for e in json.loads(res.output)] == ["ul_lower", "ul_upper"]


def test_constant_errors(run):
    assert run("constant", "nope", "--space", L2).exit_code == 2
    assert run("constant", "democracy", "--space", L2, "--N", "2", "--s", "3").exit_code == 2
    assert run("constant", "slc", "--space", L2, "--N", "8", "--s", "4", "--limit", "10").exit_code == 2


def test_constant_writes_file(run, tmp_path):
    target = tmp_path / "c.json"
    assert run("constant", "democracy", "--space", L2, "--N", "4", "--s", "2", "--out", str(target)).exit_code == 0
    assert json.loads(target.read_text())["name"] == "democracy"


def _small_config(**extra):
    cfg = {"budget": {"N": 4, "s": 2}, "room_budget": {"N": 4, "s": 2, "max_support": 1},
           "spaces": [{"label": "l2", "space": json.loads(L2), "gaps": [GEOMETRIC_TWO], "groups": ["transfer"]}]}
    cfg.update(extra)
    return cfg


def test_verify_pass_and_fail(run, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(_small_config()))
    out = tmp_path / "report.json"
    res = run("verify", "--config", str(good), "--out", str(out))
    assert res.exit_code == 0
    assert json.loads(out.read_text())["summary"]["fail"] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(_small_config(fixture_rhs_offset={"prop4.5@": 50.0})))
    assert run("verify", "--config", str(bad), "--out", str(tmp_path / "r2.json")).exit_code == 1


def test_verify_usage_errors(run, tmp_path):
    assert run("verify", "--config", str(tmp_path / "missing.json")).exit_code == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run("verify", "--config", str(broken)).exit_code == 2
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps(_small_config(budget={"N": 1, "s": 2})))
    assert run("verify", "--config", str(unknown)).exit_code == 2
    assert run("verify", "--format", "xml").exit_code == 2


def test_verify_csv_and_config_output(run, tmp_path):
    target = tmp_path / "out.csv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(_small_config(output={"path": str(target), "format": "csv"})))
    assert run("verify", "--config", str(cfg)).exit_code == 0
    assert target.read_text().splitlines()[0] == "id,lhs,rhs,slack,status"


def test_verify_jobs_byte_identical(run, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(_small_config()))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run("verify", "--config", str(cfg), "--out", str(a), "--jobs", "1").exit_code == 0
    assert run("verify", "--config", str(cfg), "--out", str(b), "--jobs", "2").exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_lemma34_l2_example(run):
    res = run("lemma34", "--space", L2, "--vectors", "[[[1, 1]], [[2, 1]], [[3, 1]]]", "--gaps", '{"prefix": [2, 4]}')
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["kind"] == "subset" and data["B"] == [1, 2] and data["verified"]
    assert data["certificate"]["l"] == 2


def test_lemma34_small_case_and_signed(run):
    res = run("lemma34", "--space", L2, "--vectors", '{"4": [[1, 1]]}', "--gaps", '{"prefix": [2, 4]}')
    assert json.loads(res.output)["kind"] == "small_case"
    res = run("lemma34", "--space", L2, "--vectors", "[[[1, 1]], [[2, 1]]]", "--gaps", '{"prefix": [1, 2]}',
              "--coefficients", "[2, 2]")
    assert res.exit_code == 0 and json.loads(res.output)["verified"]


def test_lemma34_bad_input(run):
    assert run("lemma34", "--space", L2, "--vectors", "3", "--gaps", '{"prefix": [2]}').exit_code == 2
    assert run("lemma34", "--space", L2, "--vectors", "[[[1, 1]]]", "--gaps", '{"prefix": [1, 2]}',
               "--coefficients", "[0.5]").exit_code == 2


def test_verify_default_config_exit_zero(run, tmp_path):
    out = tmp_path / "default.json"
    res = run("verify", "--out", str(out))
    assert res.exit_code == 0
    assert json.loads(out.read_text())["summary"]["fail"] == 0
