"""Command-line behavior: outputs, formats, engines, exit codes."""

import json
import subprocess
import sys

import pytest

from congruence_lab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# build


def test_build_quadform_exact_stdout(capsys):
    code, out, _ = run(capsys, "build", "quadform", "--p", "3", "--c", "1",
                       "--d", "1", "--exact")
    assert code == 0
    assert out == "3 0\n0 1 4\n1 3 7\n4 7 12\n"


def test_build_cauchy_stdout(capsys):
    code, out, _ = run(capsys, "build", "cauchy", "--kind", "invdiff", "--p", "3",
                       "--diag", "zero", "--mod", "9")
    assert code == 0
    assert out == "2 9\n0 8\n1 0\n"


def test_build_primeind_stdout(capsys):
    code, out, _ = run(capsys, "build", "primeind", "--n", "2")
    assert code == 0
    assert out == "2 0\n1 1\n1 0\n"


def test_build_exact_mod_conflict(capsys):
    code, _, err = run(capsys, "build", "quadform", "--p", "5", "--c", "1",
                       "--d", "1", "--exact", "--mod", "5")
    assert code == 2
    assert "mutually exclusive" in err


def test_build_cauchy_non_unit_difference(capsys):
    code, _, err = run(capsys, "build", "cauchy", "--kind", "invdiff", "--p", "7",
                       "--set", "p", "--diag", "zero", "--mod", "3")
    assert code == 2
    assert "error:" in err


def test_build_invform_wrong_residue_class(capsys):
    code, _, err = run(capsys, "build", "invform", "--p", "13",
                       "--which", "half_range_sq")
    assert code == 2


def test_build_to_file(tmp_path, capsys):
    target = tmp_path / "m.txt"
    code, out, _ = run(capsys, "build", "quadform", "--p", "3", "--c", "1",
                       "--d", "1", "--exact", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text() == "3 0\n0 1 4\n1 3 7\n4 7 12\n"


# ---------------------------------------------------------------------------
# det / per


@pytest.fixture
def remark_file(tmp_path):
    path = tmp_path / "remark.txt"
    path.write_text("3 0\n0 1 4\n1 3 7\n4 7 12\n")
    return str(path)


def test_det_exact_auto_engine(remark_file, capsys):
    code, out, err = run(capsys, "det", remark_file)
    assert code == 0
    assert out == "-4\n"
    assert err == "engine: bareiss\n"


def test_det_naive_engine(remark_file, capsys):
    code, out, err = run(capsys, "det", remark_file, "--engine", "naive")
    assert (code, out, err) == (0, "-4\n", "engine: naive\n")


def test_det_mod_reduces_exact_input(remark_file, capsys):
    code, out, err = run(capsys, "det", remark_file, "--mod", "3")
    assert code == 0
    assert out == "2\n"
    assert err == "engine: field\n"


def test_det_field_and_bareiss_agree(remark_file, capsys):
    _, out_field, _ = run(capsys, "det", remark_file, "--mod", "7", "--engine", "field")
    _, out_bareiss, _ = run(capsys, "det", remark_file, "--mod", "7", "--engine", "bareiss")
    assert out_field == out_bareiss == "3\n"


def test_det_mod_conflicts_with_header(tmp_path, capsys):
    path = tmp_path / "m9.txt"
    path.write_text("2 9\n0 8\n1 0\n")
    code, _, err = run(capsys, "det", str(path), "--mod", "7")
    assert code == 2
    assert "conflicts" in err


def test_det_missing_file(capsys):
    code, _, err = run(capsys, "det", "/nonexistent/matrix.txt")
    assert code == 2
    assert "cannot read" in err


def test_per_all_ones(tmp_path, capsys):
    path = tmp_path / "ones.txt"
    path.write_text("3 0\n1 1 1\n1 1 1\n1 1 1\n")
    code, out, err = run(capsys, "per", str(path))
    assert (code, out, err) == (0, "6\n", "engine: ryser\n")
    code, out, _ = run(capsys, "per", str(path), "--engine", "naive")
    assert out == "6\n"


def test_per_chunks_flag(tmp_path, capsys):
    path = tmp_path / "m.txt"
    path.write_text("3 0\n1 2 3\n4 5 6\n7 8 10\n")
    _, serial, _ = run(capsys, "per", str(path), "--engine", "ryser")
    _, chunked, _ = run(capsys, "per", str(path), "--engine", "ryser", "--chunks", "4")
    assert serial == chunked == "463\n"


def test_checkerboard_auto_engine_on_primeind(tmp_path, capsys):
    # prime-indicator matrices live on the checkerboard support (2 = 1 + 1)
    target = tmp_path / "pi6.txt"
    run(capsys, "build", "primeind", "--n", "6", "--out", str(target))
    code, out, err = run(capsys, "det", str(target))
    assert (code, out, err) == (0, "-1\n", "engine: checkerboard\n")


def test_stdin_dash_roundtrip():
    proc = subprocess.run(
        [sys.executable, "-m", "congruence_lab", "per", "-", "--engine", "naive"],
        input="2 0\n1 2\n3 4\n", capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "10\n"


# ---------------------------------------------------------------------------
# check


def test_check_pass_exit_zero(capsys):
    code, out, _ = run(capsys, "check", "eq15", "--p", "5", "--c", "1", "--d", "2",
                       "--format", "jsonl")
    assert code == 0
    record = json.loads(out)
    assert list(record) == ["check_id", "params", "computed", "expected",
                            "verdict", "elapsed_ms"]
    assert record["check_id"] == "eq15"
    assert record["verdict"] == "pass"
    assert record["params"] == {"p": 5, "c": 1, "d": 2}


def test_check_fail_exit_one(capsys):
    code, out, _ = run(capsys, "check", "background", "--p", "5", "--which",
                       "full_range_ij", "--format", "jsonl")
    assert code == 1
    assert json.loads(out)["verdict"] == "fail"


def test_check_conj_multi_part(capsys):
    code, out, _ = run(capsys, "check", "conj", "--id", "9", "--p", "5",
                       "--format", "jsonl")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["params"]["part"] for r in records] == ["per", "det"]
    assert [r["computed"] for r in records] == ["9", "22"]


def test_check_per_order_cap_flag(capsys):
    code, out, _ = run(capsys, "check", "conj", "--id", "5", "--p", "17",
                       "--format", "jsonl")
    assert code == 0
    verdicts = [json.loads(line)["verdict"] for line in out.splitlines()]
    assert verdicts == ["inconclusive", "pass"]
    code, out, _ = run(capsys, "check", "conj", "--id", "5", "--p", "17",
                       "--per-order-cap", "16", "--format", "jsonl")
    verdicts = [json.loads(line)["verdict"] for line in out.splitlines()]
    assert verdicts == ["pass", "pass"]


def test_check_missing_params(capsys):
    code, _, err = run(capsys, "check", "eq15", "--p", "5", "--c", "1")
    assert code == 2
    assert "--d" in err
    code, _, err = run(capsys, "check", "conj", "--p", "5")
    assert code == 2
    assert "--id" in err
    code, _, err = run(capsys, "check", "dp-theorem", "--p", "7")
    assert code == 2
    assert "--variant" in err


def test_check_non_prime_is_input_error(capsys):
    code, _, err = run(capsys, "check", "eq15", "--p", "9", "--c", "1", "--d", "1")
    assert code == 2
    assert "odd prime" in err


def test_check_csv_format(capsys):
    code, out, _ = run(capsys, "check", "p3", "--c", "1", "--d", "1",
                       "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "check_id,params,computed,expected,verdict,elapsed_ms"
    assert lines[1].startswith('p3,"{""c"": 1, ""d"": 1}",-4,-4,pass,')


def test_check_tty_format(capsys):
    code, out, _ = run(capsys, "check", "conj", "--id", "10", "--p", "5")
    assert code == 0
    assert "not-applicable" in out
    assert "computed=-" in out
    assert out.endswith("1 checks: 0 pass, 0 fail, 0 inconclusive, 1 not-applicable\n")


# ---------------------------------------------------------------------------
# sweep


def test_sweep_vanishing_family_passes(capsys):
    code, out, _ = run(capsys, "sweep", "dp-theorem", "--variant", "two_two",
                       "--pmax", "50", "--format", "jsonl")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert len(records) == len([p for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)])
    for r in records:
        expected = "pass" if r["params"]["p"] % 4 == 3 and r["params"]["p"] > 3 else "not-applicable"
        assert r["verdict"] == expected


def test_sweep_conj5_small_primes(capsys):
    code, out, _ = run(capsys, "sweep", "conj", "--id", "5", "--pmax", "13",
                       "--format", "jsonl")
    assert code == 0
    records = [json.loads(line) for line in out.splitlines()]
    assert len(records) == 10  # five primes, two parts each
    assert all(r["verdict"] == "pass" for r in records)


def test_sweep_background_reports_failures(capsys):
    code, out, _ = run(capsys, "sweep", "background", "--pmax", "11",
                       "--format", "jsonl")
    assert code == 1
    records = [json.loads(line) for line in out.splitlines()]
    fails = [r for r in records if r["verdict"] == "fail"]
    assert fails and all(r["params"]["which"] == "full_range_ij" for r in fails)


def test_sweep_jobs_do_not_change_reports(capsys):
    def strip(payload):
        records = [json.loads(line) for line in payload.splitlines()]
        for r in records:
            del r["elapsed_ms"]
        return records

    _, serial, _ = run(capsys, "sweep", "dp-theorem", "--pmax", "23",
                       "--format", "jsonl")
    _, parallel, _ = run(capsys, "sweep", "dp-theorem", "--pmax", "23",
                         "--jobs", "2", "--format", "jsonl")
    assert strip(serial) == strip(parallel)


def test_sweep_requires_bound(capsys):
    code, _, err = run(capsys, "sweep", "eq15")
    assert code == 2
    assert "pmax" in err


def test_sweep_tty_summary_line(capsys):
    code, out, _ = run(capsys, "sweep", "conj", "--id", "10", "--pmax", "11")
    assert code == 0
    assert out.endswith("4 checks: 2 pass, 0 fail, 0 inconclusive, 2 not-applicable\n")


# ---------------------------------------------------------------------------
# argparse plumbing


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as e:
        cli.main(["transmogrify"])
    assert e.value.code == 2


def test_unknown_engine_exits_two(remark_file):
    with pytest.raises(SystemExit) as e:
        cli.main(["det", remark_file, "--engine", "cofactor"])
    assert e.value.code == 2
