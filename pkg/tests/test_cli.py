import json

import numpy as np
import pytest

from csbounds import cli
from csbounds.io import OUTPUT_DIR_ENV, SCHEMA, InputError, ingest

STATIONARY = {(0, 0): [1, 2, 2, 3], (0, 1): [1, 2, 2, 3], (1, 0): [1, 1, 3, 3], (1, 1): [2, 3, 4, 4]}
CROSSING = {(0, 0): [1, 3], (0, 1): [1, 3], (1, 0): [2, 3], (1, 1): [2, 3]}


def write_csv(path, cells, weights=None, delimiter=","):
    lines = [delimiter.join(["y", "d", "t"] + (["w"] if weights is not None else []))]
    for (d, t), ys in cells.items():
        for y in ys:
            row = [repr(float(y)), str(d), str(t)] + ([repr(weights)] if weights is not None else [])
            lines.append(delimiter.join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def stationary_csv(tmp_path):
    return write_csv(tmp_path / "stationary.csv", STATIONARY)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ingest_eight_rows(tmp_path):
    cells = {(0, 0): [1, 2], (0, 1): [1, 3], (1, 0): [2, 4], (1, 1): [5, 6]}
    s = ingest(write_csv(tmp_path / "x.csv", cells))
    for F in (s.g0, s.g1, s.h0, s.h1):
        assert len(F) == 2 and F.cumprobs.tolist() == [0.5, 1.0]
    assert s.p == 0.5 and s.counts == {"g0": 2, "g1": 2, "h0": 2, "h1": 2}


def test_ingest_missing_column(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("y,d\n1,0\n", encoding="utf-8")
    with pytest.raises(InputError, match="'t'"):
        ingest(p)


@pytest.mark.parametrize("row, msg", [("abc,0,1", "line 3"), ("1,2,0", "line 3"),
                                      ("1,0", "line 3"), ("inf,0,0", "line 3")])
def test_ingest_reports_line_numbers(tmp_path, row, msg):
    p = tmp_path / "x.csv"
    p.write_text(f"y,d,t\n1,0,0\n{row}\n", encoding="utf-8")
    with pytest.raises(InputError, match=msg):
        ingest(p)


def test_ingest_empty_cell(tmp_path):
    cells = {(0, 0): [1], (0, 1): [1], (1, 0): [1]}
    with pytest.raises(InputError, match="h1"):
        ingest(write_csv(tmp_path / "x.csv", cells))


def test_ingest_nonpositive_weight(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("y,d,t,w\n1,0,0,0\n", encoding="utf-8")
    with pytest.raises(InputError, match="'w'"):
        ingest(p)


def test_constant_weights_change_nothing(tmp_path):
    a = ingest(write_csv(tmp_path / "a.csv", STATIONARY))
    b = ingest(write_csv(tmp_path / "b.csv", STATIONARY, weights=2.0))
    for k in ("g0", "g1", "h0", "h1"):
        Fa, Fb = getattr(a, k), getattr(b, k)
        assert np.array_equal(Fa.points, Fb.points) and np.array_equal(Fa.cumprobs, Fb.cumprobs)
    assert a.p == b.p


def test_panel_share_uses_base_period(tmp_path):
    cells = {(0, 0): [1, 2, 3], (0, 1): [1], (1, 0): [1], (1, 1): [1, 2, 3, 4, 5]}
    p = write_csv(tmp_path / "x.csv", cells)
    assert ingest(p).p == 6 / 10
    assert ingest(p, panel=True).p == 1 / 4


def test_semicolon_delimiter(tmp_path):
    p = write_csv(tmp_path / "x.csv", STATIONARY, delimiter=";")
    assert ingest(p, delimiter=";").counts["g0"] == 4


def test_bounds_stationary(capsys, stationary_csv):
    code, out, _ = run(capsys, "bounds", "--input", stationary_csv)
    assert code == cli.EXIT_OK
    doc = json.loads(out)
    assert doc["schema"] == SCHEMA
    b = doc["bounds"]
    assert b["lb_values"] == b["ub_values"] == [0.5, 0.5, 1.0]
    assert b["diagnostics"]["crossings"] == [] and b["diagnostics"]["support"]["t1"] == "assumed"
    assert doc["metadata"]["config"]["input"] == str(stationary_csv)
    assert doc["metadata"]["counts"]["h1"] == 4


def test_bounds_crossing_exit_code(capsys, tmp_path):
    code, out, _ = run(capsys, "bounds", "--input", write_csv(tmp_path / "c.csv", CROSSING))
    assert code == cli.EXIT_VIOLATION
    doc = json.loads(out)
    assert doc["bounds"]["diagnostics"]["crossings"][0]["start"] == 1.0


def test_bounds_error_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "bounds", "--input", tmp_path / "missing.csv")
    assert code == cli.EXIT_ERROR and "error" in err


def test_bounds_custom_grid(capsys, stationary_csv):
    code, out, _ = run(capsys, "bounds", "--input", stationary_csv, "--grid", "1,3,99")
    assert code == cli.EXIT_OK
    assert json.loads(out)["bounds"]["eval_points"] == [1.0, 3.0]


def test_output_is_deterministic(capsys, stationary_csv):
    first = run(capsys, "welfare", "--input", stationary_csv)[1]
    second = run(capsys, "welfare", "--input", stationary_csv)[1]
    assert first == second


def test_output_directory_from_environment(capsys, stationary_csv, tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path / "outdir"))
    code, out, _ = run(capsys, "bounds", "--input", stationary_csv)
    assert code == 0 and out == ""
    doc = json.loads((tmp_path / "outdir" / "bounds.json").read_text())
    assert doc["metadata"]["command"] == "bounds"
    explicit = tmp_path / "mine.json"
    run(capsys, "bounds", "--input", stationary_csv, "--out", explicit)
    assert explicit.exists()


def test_csv_export(capsys, stationary_csv, tmp_path):
    run(capsys, "bounds", "--input", stationary_csv, "--csv-dir", tmp_path / "plots")
    for name in ("lb", "ub", "distdid"):
        lines = (tmp_path / "plots" / f"{name}.csv").read_text().splitlines()
        assert lines[0] == "y,value" and lines[-1].endswith(",1.0")


def test_welfare_rows(capsys, stationary_csv):
    code, out, _ = run(capsys, "welfare", "--input", stationary_csv, "--tails", "0.25,0.5",
                       "--range", "0.1,0.9")
    assert code == 0
    w = json.loads(out)["welfare"]
    scopes = [(r["quantity"], r["scope"], r["tail"]) for r in w["rows"]]
    assert ("mean", "overall", None) in scopes and ("gini", "tail", 0.25) in scopes
    assert ("gini", "range", [0.1, 0.9]) in scopes
    assert len(w["dominance"]) == 20


def test_welfare_family_filter(capsys, stationary_csv):
    code, out, _ = run(capsys, "welfare", "--input", stationary_csv, "--families", "mean")
    rows = json.loads(out)["welfare"]["rows"]
    assert code == 0 and [r["quantity"] for r in rows] == ["mean"]


def test_params(capsys, stationary_csv):
    code, out, _ = run(capsys, "params", "--input", stationary_csv, "--mw", 2.5, "--wbar", 3.5)
    assert code == 0
    pol = json.loads(out)["policy"]
    for k in ("lb", "ub", "distdid"):
        assert pol[k]["e"] == pol[k]["a"] + pol[k]["b"]


def test_params_rejects_bad_cutoffs(capsys, stationary_csv):
    code, _, err = run(capsys, "params", "--input", stationary_csv, "--mw", 5, "--wbar", 3)
    assert code == cli.EXIT_ERROR and "mw" in err


def test_simulate_analytic(capsys):
    code, out, _ = run(capsys, "simulate", "--analytic", "--preset", "poisson")
    assert code == 0
    res = json.loads(out)["simulate"]["results"]["poisson"]
    assert res["covered"] and res["ai2006_max_diff"] <= 1e-12


def test_simulate_config_file(capsys, tmp_path):
    cfg = tmp_path / "chi2.cfg"
    cfg.write_text("family = chi2\nk0 = 3\nk1 = 5\n", encoding="utf-8")
    code, out, _ = run(capsys, "simulate", "--analytic", "--dgp", cfg)
    assert code == 0 and json.loads(out)["simulate"]["results"]["chi2"]["max_width"] <= 1e-9
    cfg.write_text("family = chi2\nk0 = 3\n", encoding="utf-8")
    assert run(capsys, "simulate", "--analytic", "--dgp", cfg)[0] == cli.EXIT_ERROR


def test_simulate_coverage_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "analytic_coverage", lambda dgp: {"covered": False})
    assert run(capsys, "simulate", "--analytic", "--preset", "poisson")[0] == cli.EXIT_COVERAGE


def test_simulate_sampled_worker_count_does_not_matter(capsys):
    args = ["simulate", "--preset", "bunching", "--n", 2000, "--seed", 3, "--replications", 3]
    one = json.loads(run(capsys, *args, "--workers", 1)[1])["simulate"]
    two = json.loads(run(capsys, *args, "--workers", 2)[1])["simulate"]
    assert one == two
    assert [r["replication"] for r in one["results"]["bunching"]["replications"]] == [0, 1, 2]


def test_simulate_unknown_preset(capsys):
    assert run(capsys, "simulate", "--analytic", "--preset", "nope")[0] == cli.EXIT_ERROR


def test_validate_fixtures(capsys):
    code, out, _ = run(capsys, "validate")
    assert code == 0 and "FAIL" not in out


def test_validate_crossing_fixture(capsys):
    code, out, _ = run(capsys, "validate", "--fixture", "crossing")
    assert code == cli.EXIT_VIOLATION
    failed = {line.split()[2] for line in out.splitlines() if line.startswith("FAIL")}
    assert {"support_condition", "no_crossing"} <= failed


def test_validate_corrupted_steps(capsys, tmp_path):
    p = tmp_path / "steps.json"
    p.write_text(json.dumps({"steps": {
        "good": {"points": [1, 2, 3], "cumprobs": [0.2, 0.5, 1.0]},
        "bad": {"points": [1, 2, 3], "cumprobs": [0.2, 0.6, 0.5]},
    }}))
    code, out, _ = run(capsys, "validate", "--steps", p)
    assert code == cli.EXIT_VIOLATION
    failed = [line.split()[1:3] for line in out.splitlines() if line.startswith("FAIL")]
    assert ["bad", "cumprobs_ascending"] in failed
    assert all(g == "bad" for g, _ in failed)


def test_validate_input_file(capsys, stationary_csv):
    code, out, _ = run(capsys, "validate", "--input", stationary_csv)
    assert code == 0 and "monotone_transform_invariance" in out
