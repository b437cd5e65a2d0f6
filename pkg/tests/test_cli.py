"""CLI subcommands, persistence format, exit codes, figures."""

import json
import os

import pytest

from quadcoset import cli, forms

from conftest import HALF


@pytest.fixture
def delta_file(tmp_path):
    rec = forms.coset_to_record(
        forms.diagonal_coset([4, 4, 12], [HALF, HALF, HALF])
    )
    path = tmp_path / "delta.json"
    path.write_text(json.dumps(rec))
    return str(path)


@pytest.fixture
def indefinite_file(tmp_path):
    rec = forms.coset_to_record(forms.diagonal_coset([-1, 1, 1]))
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(rec))
    return str(path)


def test_reduce_roundtrip(delta_file, capsys):
    assert cli.main(["reduce", "--coset", delta_file]) == 0
    out = capsys.readouterr().out
    assert "4/1" in out and "1/2" in out


def test_reduce_rejects_indefinite(indefinite_file, capsys):
    assert cli.main(["reduce", "--coset", indefinite_file]) == 2
    assert "NotPositiveDefinite" in capsys.readouterr().err


def test_check_regular_delta(delta_file, tmp_path, capsys):
    out_path = str(tmp_path / "verdict.jsonl")
    fig_path = str(tmp_path / "verdict.png")
    code = cli.main([
        "check-regular", "--coset", delta_file, "--bound", "800",
        "--output", out_path, "--figure", fig_path,
    ])
    assert code == 0
    assert "regular_up_to_N" in capsys.readouterr().out
    header, records = cli.read_records(out_path)
    assert header["command"] == "check-regular"
    assert len(records) == 1
    assert records[0]["verdict"]["status"] == "regular_up_to_N"
    assert os.path.getsize(fig_path) > 0


def test_polygonal_not_represented(capsys):
    code = cli.main(["polygonal", "--m", "3", "--coeffs", "1,1,3",
                     "--represents", "8"])
    assert code == 0
    assert "not represented" in capsys.readouterr().out


def test_polygonal_universal(capsys):
    assert cli.main(["polygonal", "--m", "3", "--coeffs", "1,1,1",
                     "--universal-up-to", "500"]) == 0
    assert "universal up to 500" in capsys.readouterr().out


def test_polygonal_to_coset(capsys):
    assert cli.main(["polygonal", "--m", "3", "--coeffs", "1,1,3",
                     "--to-coset"]) == 0
    out = capsys.readouterr().out
    assert "8*k + 5" in out


def test_local_subcommand(delta_file, capsys):
    assert cli.main(["local", "--coset", delta_file, "--prime", "2"]) == 0
    out = capsys.readouterr().out
    assert "represented class: 5 + 2^3" in out
    assert "progression: 5 mod 8" in out


def test_local_represents_flag(delta_file, capsys):
    assert cli.main(["local", "--coset", delta_file, "--prime", "3",
                     "--represents", "69"]) == 0
    assert "not represented" in capsys.readouterr().out


def test_watson_chain(tmp_path, capsys):
    rec = forms.coset_to_record(forms.diagonal_coset([1, 9, 9]))
    path = tmp_path / "l199.json"
    path.write_text(json.dumps(rec))
    out_path = str(tmp_path / "chain.jsonl")
    assert cli.main(["watson", "--coset", str(path), "--chain",
                     "--output", out_path]) == 0
    header, records = cli.read_records(out_path)
    assert header["params"]["chain"] is True
    assert records[0]["t"] == 4


def test_watson_behaves_well_error(tmp_path, capsys):
    rec = forms.coset_to_record(forms.diagonal_coset([1, 1, 1]))
    path = tmp_path / "ones.json"
    path.write_text(json.dumps(rec))
    assert cli.main(["watson", "--coset", str(path), "--prime", "3"]) == 2
    assert "BehavesWellAtP" in capsys.readouterr().err


def test_verify_identity(tmp_path, capsys):
    out_path = str(tmp_path / "identity.jsonl")
    fig_path = str(tmp_path / "identity.png")
    assert cli.main(["verify-identity", "--n-max", "12",
                     "--output", out_path, "--figure", fig_path]) == 0
    assert "holds" in capsys.readouterr().out
    header, rows = cli.read_records(out_path)
    assert len(rows) == 13
    assert rows[0] == {"n": 0, "r": 8, "r1": 16, "r2": 8}
    assert os.path.getsize(fig_path) > 0


def test_census_persistence_and_resume(tmp_path, capsys):
    out_path = str(tmp_path / "census.jsonl")
    args = ["census", "--conductor", "1", "--disc-bound", "2",
            "--bound", "150", "--coeff-bound", "2", "--output", out_path]
    assert cli.main(args) == 0
    first = open(out_path, "rb").read()
    header, records = cli.read_records(out_path)
    assert header["command"] == "census"
    assert len(records) >= 3

    # Byte-identical round trip.
    copy_path = str(tmp_path / "copy.jsonl")
    cli.write_records(copy_path, header, records)
    assert open(copy_path, "rb").read() == first

    # Resume adds zero duplicates and reproduces the same bytes.
    assert cli.main(args + ["--resume"]) == 0
    assert open(out_path, "rb").read() == first


def test_census_jobs_same_bytes(tmp_path):
    a = str(tmp_path / "a.jsonl")
    b = str(tmp_path / "b.jsonl")
    base = ["census", "--conductor", "2", "--disc-bound", "8",
            "--bound", "120", "--coeff-bound", "3"]
    assert cli.main(base + ["--output", a, "--jobs", "1"]) == 0
    assert cli.main(base + ["--output", b, "--jobs", "2"]) == 0
    ba, bb = open(a, "rb").read(), open(b, "rb").read()
    assert ba == bb


def test_census_figure(tmp_path):
    out_path = str(tmp_path / "census.jsonl")
    fig_path = str(tmp_path / "census.png")
    assert cli.main(["census", "--conductor", "1", "--disc-bound", "1",
                     "--bound", "100", "--coeff-bound", "1",
                     "--output", out_path, "--figure", fig_path]) == 0
    assert os.path.getsize(fig_path) > 0


def test_malformed_record_file(tmp_path, capsys):
    path = tmp_path / "broken.jsonl"
    path.write_text('{"tool": "quadcoset"}\nnot json at all\n')
    code = cli.main(["census", "--conductor", "1", "--disc-bound", "1",
                     "--bound", "50", "--coeff-bound", "1",
                     "--output", str(path), "--resume"])
    assert code == 2
    assert "line 2" in capsys.readouterr().err


def test_missing_coset_file(capsys):
    assert cli.main(["reduce", "--coset", "/nonexistent.json"]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["census"])
    assert exc.value.code == 2


def test_nonpositive_bound_rejected(delta_file, capsys):
    assert cli.main(["check-regular", "--coset", delta_file,
                     "--bound", "0"]) == 2
    assert "positive" in capsys.readouterr().err


def test_bad_coeffs_rejected(capsys):
    assert cli.main(["polygonal", "--m", "3", "--coeffs", "1,x,3",
                     "--represents", "1"]) == 2
