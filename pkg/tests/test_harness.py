import json
import math

import pytest

from fracineq.errors import ConfigError, DomainError
from fracineq.harness import (
    COLUMNS,
    RunReport,
    default_config,
    json_to_csv,
    parse_config,
    read_csv,
    rows_to_csv,
    run_certify,
    run_falsify,
    run_verify_identities,
    run_verify_theorems,
)
from fracineq.harness.cli import main
from fracineq.harness.config import apply_env_overrides, env_jobs
from fracineq.harness.runner import parse_theorems

SMALL = """\
schema_version: 1
instances:
  - functions: [square, exp]
    maps: [identity, "scaled:0.7"]
    a: 0.5
    b: 1.5
    alpha: [0.5, 1.0, 2.0]
    lambda: [0.25]
    q: [2.0]
"""


def small(**env):
    return apply_env_overrides(parse_config(SMALL, apply_env=False), env)


def test_small_config_parses():
    cfg = small()
    assert cfg.schema_version == 1
    assert len(cfg.combinations()) == 12
    assert cfg.combinations() == sorted(cfg.combinations())
    assert cfg.certification_grid == (21, 21, 99)


def test_default_suite_shape():
    cfg = default_config(apply_env=False)
    assert len(cfg.combinations()) == 648
    assert cfg.to_dict()["schema_version"] == 1


def test_string_numbers_are_coerced():
    cfg = parse_config(SMALL.replace("b: 1.5", 'b: "1.5"') + "quadrature:\n  rel_tol: 1e-11\n", apply_env=False)
    assert cfg.instances[0].b == 1.5
    assert cfg.quadrature.rel_tol == 1e-11


@pytest.mark.parametrize("old, new, line, field", [
    ("alpha: [0.5, 1.0, 2.0]", "alpha: [0.5, -1.0]", 7, "instances.0.alpha.1"),
    ("lambda: [0.25]", "lambda: [0.75]", 8, "instances.0.lambda.0"),
    ("q: [2.0]", "q: [1.0]", 9, "instances.0.q.0"),
    ("functions: [square, exp]", "functions: [square, nope]", 3, "instances.0.functions.1"),
    ("    b: 1.5\n", "    b: 1.5\n    c: 2\n", 7, "instances.0.c"),
    ("schema_version: 1", "schema_version: 2", 1, "schema_version"),
])
def test_config_errors_name_line_and_field(old, new, line, field):
    with pytest.raises(ConfigError) as info:
        parse_config(SMALL.replace(old, new), apply_env=False)
    assert info.value.line == line
    assert info.value.field == field
    assert f"line {line}" in str(info.value)


def test_malformed_yaml():
    with pytest.raises(ConfigError) as info:
        parse_config("schema_version: [1\n", apply_env=False)
    assert info.value.line is not None


def test_env_overrides():
    cfg = small(FRACINEQ_RTOL="1e-9", FRACINEQ_ATOL="1e-13")
    assert cfg.quadrature.rel_tol == 1e-9
    assert cfg.quadrature.abs_tol == 1e-13
    with pytest.raises(ConfigError):
        small(FRACINEQ_RTOL="tight")
    with pytest.raises(ConfigError):
        small(FRACINEQ_RTOL="-1")


def test_env_jobs():
    assert env_jobs({}) == 1
    assert env_jobs({"FRACINEQ_JOBS": "3"}) == 3
    for bad in ("0", "many"):
        with pytest.raises(ConfigError):
            env_jobs({"FRACINEQ_JOBS": bad})


def test_parse_theorems():
    assert parse_theorems("t4, T1") == ("T1", "T4")
    assert parse_theorems("") == ()
    with pytest.raises(DomainError):
        parse_theorems("T9")


def test_identity_suite_passes():
    rep = run_verify_identities(small())
    # identity rows do not depend on lambda or q: 12 instances x 2 lemmas
    assert rep.summary == {"pass": 24, "flag": 0, "fail": 0, "error": 0, "total": 24}
    assert all(r["residual"] <= 1e-8 for r in rep.results)
    assert rep.exit_code == 0


def test_constant_suite_has_zero_residuals():
    cfg = parse_config(SMALL.replace("[square, exp]", '[const, "const:2.5"]'), apply_env=False)
    rep = run_verify_identities(cfg)
    assert rep.summary["pass"] == rep.summary["total"] == 24
    assert all(abs(r["lhs"]) <= 1e-14 and abs(r["rhs"]) <= 1e-14 for r in rep.results)


def test_missing_derivative_becomes_an_error_row():
    cfg = parse_config(SMALL.replace("[square, exp]", "[hinge2, square]"), apply_env=False)
    rep = run_verify_identities(cfg)
    errors = [r for r in rep.results if r["status"] == "error"]
    assert {r["lemma"] for r in errors} == {"L2"}
    assert all(r["error"] == "CapabilityError" for r in errors)
    assert rep.summary["pass"] == rep.summary["total"] - len(errors)
    assert rep.exit_code == 1


def test_theorem_suite_holds():
    rep = run_verify_theorems(small(), ("T4", "T6"))
    bounds = [r for r in rep.results if r["kind"] == "bound"]
    assert bounds and all(r["bound_holds_oracle"] for r in bounds)
    assert all(r["status"] != "fail" for r in rep.results)


def test_empty_theorem_set():
    rep = run_verify_theorems(small(), ())
    assert rep.results == []
    assert rep.summary["total"] == 0
    assert rep.exit_code == 0


def test_parallel_matches_serial():
    cfg = small()
    assert run_verify_theorems(cfg, ("T1",), jobs=2).to_json() == run_verify_theorems(cfg, ("T1",)).to_json()


def test_csv_round_trip():
    rep = run_verify_theorems(small(), ("T1", "T3"))
    text = rep.to_csv()
    header = text.splitlines()[0].split(",")
    assert tuple(header) == COLUMNS
    back = read_csv(text)
    assert len(back) == len(rep.results)
    for orig, row in zip(rep.results, back):
        assert row["key"] == orig["key"]
        if orig["kind"] != "bound":
            continue
        for col in ("gap", "paper_bound", "oracle_bound"):
            # floats are written with repr, so they come back exactly
            assert row[col] == orig[col]
        assert row["bound_holds_oracle"] is orig["bound_holds_oracle"]
    assert rows_to_csv(back) == text


def test_json_round_trip():
    rep = run_verify_identities(small())
    again = RunReport.from_json(rep.to_json())
    assert again.to_json() == rep.to_json()
    assert json_to_csv(rep.to_json()) == rep.to_csv()
    assert "wall_time" not in json.loads(rep.to_json())
    assert "wall_time" in json.loads(rep.to_json(include_timing=True))


def test_falsify_is_seeded():
    cfg = small()
    a = run_falsify(cfg, 15, 7)
    b = run_falsify(cfg, 15, 7)
    c = run_falsify(cfg, 15, 8)
    assert a.to_json() == b.to_json()
    assert a.to_json() != c.to_json()
    stats = a.extra["falsify"]
    assert stats["violations"] == 0
    assert stats["evaluated"] == stats["certified"] + stats["exploratory"]


def test_falsify_constant_functions_are_exact_equalities():
    cfg = parse_config(SMALL + "falsify:\n  functions: [const]\n", apply_env=False)
    stats = run_falsify(cfg, 10, 0).extra["falsify"]
    assert stats["exact_equality"] == stats["evaluated"]
    assert stats["max_slack_ratio"] is None


def test_falsify_rejects_bad_trials():
    with pytest.raises(DomainError):
        run_falsify(small(), 0, 1)


def test_certify_report():
    good = run_certify("exp", "identity", 0.5)
    bad = run_certify("exp", "scaled:0.7", 0.5)
    assert good.exit_code == 0
    assert bad.exit_code == 1
    row = bad.results[0]
    assert row["max_violation"] > 0
    assert 0 < row["argmax_t"] < 1


def test_cli_specfun(capsys):
    assert main(["specfun", "eval", "gamma", "0.5"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert main(["specfun", "eval", "hyp2f1", "1", "1", "-1", "0.5"]) == 2
    assert main(["specfun", "eval", "beta", "1"]) == 2


def test_cli_default_t4_suite(tmp_path, capsys):
    out = tmp_path / "t4.json"
    assert main(["theorems", "--which", "T4", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["summary"]["fail"] == 0
    assert "theorems" in capsys.readouterr().err


def test_cli_config_error(tmp_path, capsys):
    path = tmp_path / "bad.yaml"
    path.write_text(SMALL.replace("alpha: [0.5, 1.0, 2.0]", "alpha: [-1.0]"))
    assert main(["identities", "--config", str(path)]) == 2
    assert "line 7" in capsys.readouterr().err


def test_cli_usage_errors(capsys):
    assert main(["bogus"]) == 2
    assert main(["falsify", "--trials", "5"]) == 2
    assert main(["theorems", "--jobs", "0", "--which", "T1"]) == 2


def test_cli_report_and_formats(tmp_path):
    cfg = tmp_path / "small.yaml"
    cfg.write_text(SMALL)
    js, csv_a, csv_b = tmp_path / "r.json", tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["identities", "--config", str(cfg), "--out", str(js)]) == 0
    assert main(["identities", "--config", str(cfg), "--out", str(csv_a), "--format", "csv"]) == 0
    assert main(["report", "--in", str(js), "--out", str(csv_b)]) == 0
    assert csv_a.read_text() == csv_b.read_text()


def test_cli_falsify_and_certify(tmp_path, capsys):
    cfg = tmp_path / "small.yaml"
    cfg.write_text(SMALL)
    assert main(["falsify", "--config", str(cfg), "--trials", "5", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["falsify", "--config", str(cfg), "--trials", "5", "--seed", "3"]) == 0
    assert capsys.readouterr().out == first
    assert main(["certify", "--fn", "pow32", "--map", "identity", "--lambda", "0.5", "--order", "1"]) == 1
